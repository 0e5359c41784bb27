/*
   Copyright 2026 The layoutsearch Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */

#include <cmath>

#include "layoutsearch/gradcheck.hpp"
#include "layoutsearch/model.hpp"
#include "layoutsearch/ops.hpp"
#include "layoutsearch/random.hpp"
#include "layoutsearch/synth.hpp"

namespace layoutsearch {

namespace {

constexpr double kTolerance = 1e-3;

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = rng.uniform(lo, hi);
  return t;
}

// Keeps entries away from the ReLU kink so central differences stay smooth.
Tensor away_from_zero(Tensor t) {
  for (double& v : t.data()) {
    if (std::abs(v) < 0.05) v = v < 0 ? -0.05 : 0.05;
  }
  return t;
}

// Zero-initialised biases over an all-zero background put ReLU inputs exactly
// on the kink, where one-sided derivatives differ. Jittering the biases moves
// the check to a point where the loss is differentiable.
void jitter_biases(std::span<Parameter* const> params, Rng& rng) {
  for (Parameter* p : params) {
    if (p->value.rank() != 1) continue;
    for (double& v : p->value.data()) v += rng.uniform(-0.05, 0.05);
  }
}

double dot(const Tensor& a, const Tensor& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

class Suite {
 public:
  Suite(std::uint64_t seed, bool corrupt) : rng_(seed), seed_(seed), corrupt_(corrupt) {}

  void check(std::string name, const std::function<double()>& loss, std::vector<Tensor*> inputs,
             std::vector<Tensor> analytic) {
    if (corrupt_) {
      for (Tensor& g : analytic) {
        for (double& v : g.data()) v = v * 1.1 + 1e-2;
      }
    }
    GradCheckOptions opts;
    opts.seed = seed_;
    opts.step = step_;
    results_.push_back(finite_diff_check(std::move(name), loss, inputs, analytic, kTolerance, opts));
  }

  Rng& rng() { return rng_; }
  std::uint64_t seed() const { return seed_; }
  std::vector<GradCheckResult> take() { return std::move(results_); }

 private:
  Rng rng_;
  std::uint64_t seed_;
  bool corrupt_;
  double step_ = 1e-4;
  std::vector<GradCheckResult> results_;
};

void check_layers(Suite& s) {
  Rng& rng = s.rng();
  {
    Tensor x = random_tensor({2, 3, 3}, rng);
    s.check("sum", [&] { double t = 0; for (double v : x.data()) t += v; return t; }, {&x},
            {Tensor(x.shape(), 1.0)});
  }
  {
    Tensor x = random_tensor({2, 5, 6}, rng);
    Tensor w = random_tensor({3, 2, 3, 3}, rng);
    Tensor b = random_tensor({3}, rng);
    const Tensor r = random_tensor({3, 5, 6}, rng);
    const auto g = ops::conv2d_backward(x, w, r);
    s.check("conv2d", [&] { return dot(r, ops::conv2d(x, w, b)); }, {&x, &w, &b}, {g.input, g.weight, g.bias});
  }
  {
    Tensor x = random_tensor({4, 2, 2}, rng);
    Tensor w = random_tensor({3, 4, 1, 1}, rng);
    Tensor b = random_tensor({3}, rng);
    const Tensor r = random_tensor({3, 2, 2}, rng);
    const auto g = ops::conv2d_backward(x, w, r);
    s.check("conv2d_1x1", [&] { return dot(r, ops::conv2d(x, w, b)); }, {&x, &w, &b}, {g.input, g.weight, g.bias});
  }
  {
    Tensor x = away_from_zero(random_tensor({2, 4, 4}, rng));
    const Tensor r = random_tensor(x.shape(), rng);
    s.check("relu", [&] { return dot(r, ops::relu(x)); }, {&x}, {ops::relu_backward(x, r)});
  }
  {
    Tensor x = random_tensor({2, 3, 3}, rng, -4, 4);
    const Tensor r = random_tensor(x.shape(), rng);
    s.check("sigmoid", [&] { return dot(r, ops::sigmoid(x)); }, {&x}, {ops::sigmoid_backward(ops::sigmoid(x), r)});
  }
  {
    Tensor x = random_tensor({2, 4, 6}, rng);
    const Tensor r = random_tensor({2, 2, 3}, rng);
    s.check("maxpool2", [&] { return dot(r, ops::maxpool2(x)); }, {&x}, {ops::maxpool2_backward(x, r)});
  }
  {
    Tensor x = random_tensor({2, 3, 2}, rng);
    const Tensor r = random_tensor({2, 6, 4}, rng);
    s.check("upsample2", [&] { return dot(r, ops::upsample2(x)); }, {&x}, {ops::upsample2_backward(r)});
  }
  {
    Tensor x = random_tensor({5}, rng);
    Tensor w = random_tensor({4, 5}, rng);
    Tensor b = random_tensor({4}, rng);
    const Tensor r = random_tensor({4}, rng);
    const auto g = ops::fully_connected_backward(x, w, r);
    s.check("fully_connected", [&] { return dot(r, ops::fully_connected(x, w, b)); }, {&x, &w, &b},
            {g.input, g.weight, g.bias});
  }
  {
    const Tensor target = random_tensor({3, 4, 4}, rng, 0, 1);
    Tensor pred = random_tensor({3, 4, 4}, rng, 0, 1);
    s.check("mse_loss", [&] { return ops::mse_loss(target, pred); }, {&pred}, {ops::mse_loss_grad(target, pred)});
  }
  {
    const Tensor target = random_tensor({3, 4, 4}, rng, 0.01, 1);
    Tensor pred = random_tensor({3, 4, 4}, rng, 0.01, 1);
    s.check("dice_coef", [&] { return ops::dice_coef(target, pred); }, {&pred}, {ops::dice_coef_grad(target, pred)});
  }
  {
    // conv -> relu -> pool -> mse on a 1x8x8 input.
    Tensor x = random_tensor({1, 8, 8}, rng);
    Tensor w = random_tensor({2, 1, 3, 3}, rng);
    Tensor b = random_tensor({2}, rng, -0.1, 0.1);
    const Tensor target = random_tensor({2, 4, 4}, rng, 0, 1);
    const auto loss = [&] { return ops::mse_loss(target, ops::maxpool2(ops::relu(ops::conv2d(x, w, b)))); };
    const Tensor conv = ops::conv2d(x, w, b);
    const Tensor act = ops::relu(conv);
    const Tensor g_pool = ops::mse_loss_grad(target, ops::maxpool2(act));
    const Tensor g_act = ops::maxpool2_backward(act, g_pool);
    const auto g = ops::conv2d_backward(x, w, ops::relu_backward(conv, g_act));
    s.check("conv_relu_pool_mse", loss, {&x, &w, &b}, {g.input, g.weight, g.bias});
  }
}

void check_autoencoder(Suite& s, int attention_maps) {
  AutoencoderConfig config;
  config.resolution = {16, 16};
  config.attention_maps = attention_maps;
  config.seed = s.seed();
  ImageAutoencoder model(config);
  jitter_biases(model.parameters(), s.rng());

  GeneratorConfig gen;
  gen.seed = s.seed();
  gen.per_category = 1;
  const Corpus corpus = generate(gen);
  const AnnotatedLayout& layout = corpus.layouts[s.rng().below(corpus.layouts.size())];
  SemanticImage image = rasterize(layout, config.resolution);
  // Flat colour regions make exact max-pool ties that a perturbation can
  // break either way; a light dither keeps the check point generic.
  for (double& v : image.pixels.data()) {
    const double d = s.rng().uniform(0.0, 0.01);
    v = v < 0.5 ? v + d : v - d;
  }
  const AttentionMap attention = attention_map(layout, config.resolution);

  std::vector<Tensor> grads;
  model.loss_and_gradients(image, attention, grads);
  std::vector<Tensor*> inputs;
  for (Parameter* p : model.parameters()) inputs.push_back(&p->value);
  s.check("autoencoder_m" + std::to_string(attention_maps), [&] { return model.loss(image, attention); }, inputs,
          grads);
}

void check_label_net(Suite& s) {
  LabelNet net(label_seed(s.seed()));
  jitter_biases(net.parameters(), s.rng());
  LabelVector labels{};
  for (double& v : labels) v = s.rng().uniform() < 0.5 ? 1.0 : 0.0;
  std::vector<Tensor> grads;
  net.loss_and_gradients(labels, grads);
  std::vector<Tensor*> inputs;
  for (Parameter* p : net.parameters()) inputs.push_back(&p->value);
  s.check("label_net", [&] { return net.loss(labels); }, inputs, grads);
}

}  // namespace

std::vector<GradCheckResult> run_gradient_suite(std::uint64_t seed, bool corrupt_gradients) {
  Suite suite(seed, corrupt_gradients);
  check_layers(suite);
  check_autoencoder(suite, 0);
  check_autoencoder(suite, 4);
  check_label_net(suite);
  return suite.take();
}

}  // namespace layoutsearch
