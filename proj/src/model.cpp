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

#include "layoutsearch/model.hpp"

#include <cmath>

#include "layoutsearch/errors.hpp"
#include "layoutsearch/ops.hpp"
#include "layoutsearch/random.hpp"

namespace layoutsearch {

namespace {

constexpr std::size_t kAttentionChannels = 3;

void init_uniform(Parameter& p, std::size_t fan_in, std::size_t fan_out, std::uint64_t seed) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Rng rng(seed);
  for (double& v : p.value.data()) v = rng.uniform(-limit, limit);
}

template <typename Layer>
void collect(std::vector<Layer>& layers, std::vector<Parameter*>& out) {
  for (auto& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
}

template <typename Layer>
void collect(const std::vector<Layer>& layers, std::vector<const Parameter*>& out) {
  for (const auto& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// AutoencoderConfig

void AutoencoderConfig::validate() const {
  const auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); };
  if (resolution.height <= 0 || resolution.width <= 0 || resolution.height % 16 || resolution.width % 16) {
    fail("resolution " + std::to_string(resolution.height) + "x" + std::to_string(resolution.width) +
         " must be positive and divisible by 16");
  }
  if (attention_maps < 0 || attention_maps > static_cast<int>(kEncoderBlocks)) {
    fail("attention_maps must be in 0..4, got " + std::to_string(attention_maps));
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be positive");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (epochs < 0) fail("epochs must be >= 0");
  if (patience < 1) fail("patience must be >= 1");
}

nlohmann::json AutoencoderConfig::to_json() const {
  return {{"height", resolution.height}, {"width", resolution.width}, {"m", attention_maps},
          {"seed", seed},          {"learning_rate", learning_rate}, {"batch_size", batch_size},
          {"epochs", epochs},      {"patience", patience}};
}

AutoencoderConfig AutoencoderConfig::from_json(const nlohmann::json& j) {
  AutoencoderConfig c;
  try {
    c.resolution = {j.at("height").get<int>(), j.at("width").get<int>()};
    c.attention_maps = j.at("m").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.batch_size = j.at("batch_size").get<int>();
    c.epochs = j.at("epochs").get<int>();
    c.patience = j.at("patience").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// ImageAutoencoder

struct ImageAutoencoder::Trace {
  std::array<Tensor, kEncoderBlocks> enc_input, enc_conv, enc_act, enc_pooled, enc_cat, enc_proj;
  std::array<Tensor, kEncoderBlocks> dec_input, dec_up, dec_conv;
  Tensor output;
};

ImageAutoencoder::ImageAutoencoder(const AutoencoderConfig& config) : config_(config) {
  config_.validate();
  const auto conv = [&](const std::string& name, std::size_t cin, std::size_t cout, std::size_t k,
                        std::uint64_t stream) {
    ConvLayer layer{Parameter(name + ".weight", {cout, cin, k, k}), Parameter(name + ".bias", {cout})};
    init_uniform(layer.weight, cin * k * k, cout * k * k, derive_seed(config_.seed, stream));
    return layer;
  };
  for (std::size_t b = 0; b < kEncoderBlocks; ++b) {
    encoder_.push_back(conv("enc" + std::to_string(b), kEncoderChannels[b], kEncoderChannels[b + 1], 3, 100 + b));
  }
  for (std::size_t b = 0; b < kEncoderBlocks; ++b) {
    if (!attended(b)) continue;
    const std::size_t c = kEncoderChannels[b + 1];
    projections_.push_back(conv("attn" + std::to_string(b), c + kAttentionChannels, c, 1, 200 + b));
  }
  // Decoder layer j maps kEncoderChannels[4-j] -> kEncoderChannels[3-j].
  for (std::size_t j = 0; j < kEncoderBlocks; ++j) {
    decoder_.push_back(conv("dec" + std::to_string(j), kEncoderChannels[kEncoderBlocks - j],
                            kEncoderChannels[kEncoderBlocks - j - 1], 3, 300 + j));
  }
}

bool ImageAutoencoder::attended(std::size_t block) const {
  return block + static_cast<std::size_t>(config_.attention_maps) >= kEncoderBlocks;
}

const ImageAutoencoder::ConvLayer& ImageAutoencoder::projection(std::size_t block) const {
  return projections_[block - (kEncoderBlocks - static_cast<std::size_t>(config_.attention_maps))];
}

std::vector<std::size_t> ImageAutoencoder::latent_shape() const {
  return {kEncoderChannels.back(), static_cast<std::size_t>(config_.resolution.height / 16),
          static_cast<std::size_t>(config_.resolution.width / 16)};
}

std::vector<Parameter*> ImageAutoencoder::parameters() {
  std::vector<Parameter*> out;
  collect(encoder_, out);
  collect(projections_, out);
  collect(decoder_, out);
  return out;
}

std::vector<const Parameter*> ImageAutoencoder::parameters() const {
  std::vector<const Parameter*> out;
  collect(encoder_, out);
  collect(projections_, out);
  collect(decoder_, out);
  return out;
}

void ImageAutoencoder::check_inputs(const SemanticImage& image, const AttentionMap& attention) const {
  const std::vector<std::size_t> expected = {3, static_cast<std::size_t>(config_.resolution.height),
                                             static_cast<std::size_t>(config_.resolution.width)};
  if (image.pixels.shape() != expected || attention.mask.shape() != expected) {
    throw Error(ErrorKind::ResolutionMismatch, "model expects " + shape_string(expected) + ", got image " +
                                                   shape_string(image.pixels.shape()) + " and attention " +
                                                   shape_string(attention.mask.shape()));
  }
}

Tensor ImageAutoencoder::encode_traced(const SemanticImage& image, const AttentionMap& attention,
                                       Trace* trace) const {
  check_inputs(image, attention);
  Tensor x = image.pixels;
  for (std::size_t b = 0; b < kEncoderBlocks; ++b) {
    const ConvLayer& layer = encoder_[b];
    Tensor conv = ops::conv2d(x, layer.weight.value, layer.bias.value);
    Tensor act = ops::relu(conv);
    Tensor pooled = ops::maxpool2(act);
    Tensor out;
    Tensor cat, proj;
    if (attended(b)) {
      const auto small = downsample_binary(attention, static_cast<int>(pooled.dim(1)), static_cast<int>(pooled.dim(2)));
      cat = ops::concat_channels(pooled, small.mask);
      const ConvLayer& p = projection(b);
      proj = ops::conv2d(cat, p.weight.value, p.bias.value);
      out = ops::relu(proj);
    } else {
      out = pooled;
    }
    if (trace) {
      trace->enc_input[b] = std::move(x);
      trace->enc_conv[b] = std::move(conv);
      trace->enc_act[b] = std::move(act);
      trace->enc_pooled[b] = std::move(pooled);
      trace->enc_cat[b] = std::move(cat);
      trace->enc_proj[b] = std::move(proj);
    }
    x = std::move(out);
  }
  return x;
}

Tensor ImageAutoencoder::decode_traced(const Tensor& latent, Trace* trace) const {
  if (latent.shape() != latent_shape()) {
    throw Error(ErrorKind::ShapeMismatch,
                "latent must be " + shape_string(latent_shape()) + ", got " + shape_string(latent.shape()));
  }
  Tensor x = latent;
  for (std::size_t j = 0; j < kEncoderBlocks; ++j) {
    const ConvLayer& layer = decoder_[j];
    Tensor up = ops::upsample2(x);
    Tensor conv = ops::conv2d(up, layer.weight.value, layer.bias.value);
    Tensor out = j + 1 == kEncoderBlocks ? ops::sigmoid(conv) : ops::relu(conv);
    if (trace) {
      trace->dec_input[j] = std::move(x);
      trace->dec_up[j] = std::move(up);
      trace->dec_conv[j] = std::move(conv);
    }
    x = std::move(out);
  }
  return x;
}

Tensor ImageAutoencoder::encode(const SemanticImage& image, const AttentionMap& attention) const {
  return encode_traced(image, attention, nullptr);
}

SemanticImage ImageAutoencoder::decode(const Tensor& latent) const {
  return SemanticImage{decode_traced(latent, nullptr)};
}

double ImageAutoencoder::loss(const SemanticImage& image, const AttentionMap& attention) const {
  return ae_loss(image, decode(encode(image, attention)));
}

double ImageAutoencoder::loss_and_gradients(const SemanticImage& image, const AttentionMap& attention,
                                            std::vector<Tensor>& grads) const {
  Trace trace;
  const Tensor latent = encode_traced(image, attention, &trace);
  const SemanticImage recon{decode_traced(latent, &trace)};
  const double loss = ae_loss(image, recon);

  const std::size_t n_enc = 2 * encoder_.size();
  const std::size_t n_proj = 2 * projections_.size();
  grads.resize(n_enc + n_proj + 2 * decoder_.size());
  const auto store = [&grads](std::size_t slot, ops::Conv2dGrads& g) {
    grads[slot] = std::move(g.weight);
    grads[slot + 1] = std::move(g.bias);
  };

  Tensor g = ae_loss_grad(image, recon);
  for (std::size_t j = kEncoderBlocks; j-- > 0;) {
    const Tensor g_conv = j + 1 == kEncoderBlocks ? ops::sigmoid_backward(recon.pixels, g)
                                                  : ops::relu_backward(trace.dec_conv[j], g);
    auto cg = ops::conv2d_backward(trace.dec_up[j], decoder_[j].weight.value, g_conv);
    g = ops::upsample2_backward(cg.input);
    store(n_enc + n_proj + 2 * j, cg);
  }
  for (std::size_t b = kEncoderBlocks; b-- > 0;) {
    Tensor g_pooled;
    if (attended(b)) {
      const Tensor g_proj = ops::relu_backward(trace.enc_proj[b], g);
      auto pg = ops::conv2d_backward(trace.enc_cat[b], projection(b).weight.value, g_proj);
      g_pooled = ops::leading_channels(pg.input, kEncoderChannels[b + 1]);
      const std::size_t first_proj = kEncoderBlocks - static_cast<std::size_t>(config_.attention_maps);
      store(n_enc + 2 * (b - first_proj), pg);
    } else {
      g_pooled = std::move(g);
    }
    const Tensor g_act = ops::maxpool2_backward(trace.enc_act[b], g_pooled);
    const Tensor g_conv = ops::relu_backward(trace.enc_conv[b], g_act);
    auto cg = ops::conv2d_backward(trace.enc_input[b], encoder_[b].weight.value, g_conv);
    g = std::move(cg.input);
    store(2 * b, cg);
  }
  return loss;
}

double ae_loss(const SemanticImage& x, const SemanticImage& x_hat) {
  return ops::mse_loss(x.pixels, x_hat.pixels) + (1.0 - ops::dice_coef(x.pixels, x_hat.pixels));
}

Tensor ae_loss_grad(const SemanticImage& x, const SemanticImage& x_hat) {
  Tensor g = ops::mse_loss_grad(x.pixels, x_hat.pixels);
  const Tensor d = ops::dice_coef_grad(x.pixels, x_hat.pixels);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= d[i];
  return g;
}

// ---------------------------------------------------------------------------
// LabelNet

std::uint64_t label_seed(std::uint64_t seed) { return derive_seed(seed, 0x1ABE1ULL); }

LabelNet::LabelNet(std::uint64_t seed) {
  const auto dense = [&](const std::string& name, std::size_t in, std::size_t out, std::uint64_t stream) {
    DenseLayer layer{Parameter(name + ".weight", {out, in}), Parameter(name + ".bias", {out})};
    init_uniform(layer.weight, in, out, derive_seed(seed, stream));
    return layer;
  };
  for (std::size_t i = 0; i + 1 < kLabelLayers.size(); ++i) {
    encoder_.push_back(dense("label_enc" + std::to_string(i), kLabelLayers[i], kLabelLayers[i + 1], 400 + i));
  }
  for (std::size_t i = 0; i + 1 < kLabelLayers.size(); ++i) {
    const std::size_t in = kLabelLayers[kLabelLayers.size() - 1 - i];
    const std::size_t out = kLabelLayers[kLabelLayers.size() - 2 - i];
    decoder_.push_back(dense("label_dec" + std::to_string(i), in, out, 500 + i));
  }
}

std::vector<Parameter*> LabelNet::parameters() {
  std::vector<Parameter*> out;
  collect(encoder_, out);
  collect(decoder_, out);
  return out;
}

std::vector<const Parameter*> LabelNet::parameters() const {
  std::vector<const Parameter*> out;
  collect(encoder_, out);
  collect(decoder_, out);
  return out;
}

namespace {

Tensor label_tensor(const LabelVector& labels) {
  return Tensor({kNumLabelClasses}, std::vector<double>(labels.begin(), labels.end()));
}

}  // namespace

Tensor LabelNet::encode(const LabelVector& labels) const {
  Tensor x = label_tensor(labels);
  for (std::size_t i = 0; i < encoder_.size(); ++i) {
    x = ops::fully_connected(x, encoder_[i].weight.value, encoder_[i].bias.value);
    if (i + 1 < encoder_.size()) x = ops::relu(x);
  }
  return x;
}

Tensor LabelNet::decode(const Tensor& content) const {
  if (content.shape() != std::vector<std::size_t>{kContentSize}) {
    throw Error(ErrorKind::ShapeMismatch, "content vector must be [64], got " + shape_string(content.shape()));
  }
  Tensor x = content;
  for (std::size_t i = 0; i < decoder_.size(); ++i) {
    x = ops::fully_connected(x, decoder_[i].weight.value, decoder_[i].bias.value);
    x = i + 1 < decoder_.size() ? ops::relu(x) : ops::sigmoid(x);
  }
  return x;
}

double LabelNet::loss(const LabelVector& labels) const {
  return ops::mse_loss(label_tensor(labels), decode(encode(labels)));
}

double LabelNet::loss_and_gradients(const LabelVector& labels, std::vector<Tensor>& grads) const {
  // Forward with every layer's input and pre-activation kept.
  std::vector<const DenseLayer*> layers;
  for (const auto& l : encoder_) layers.push_back(&l);
  for (const auto& l : decoder_) layers.push_back(&l);
  const std::size_t n = layers.size();
  const std::size_t last_encoder = encoder_.size() - 1;

  std::vector<Tensor> inputs(n), pre(n);
  const Tensor target = label_tensor(labels);
  Tensor x = target;
  for (std::size_t i = 0; i < n; ++i) {
    inputs[i] = x;
    pre[i] = ops::fully_connected(x, layers[i]->weight.value, layers[i]->bias.value);
    if (i == n - 1) {
      x = ops::sigmoid(pre[i]);
    } else if (i == last_encoder) {
      x = pre[i];  // content vector, linear
    } else {
      x = ops::relu(pre[i]);
    }
  }
  const double loss = ops::mse_loss(target, x);

  grads.resize(2 * n);
  Tensor g = ops::mse_loss_grad(target, x);
  for (std::size_t i = n; i-- > 0;) {
    Tensor g_pre;
    if (i == n - 1) {
      g_pre = ops::sigmoid_backward(x, g);
    } else if (i == last_encoder) {
      g_pre = std::move(g);
    } else {
      g_pre = ops::relu_backward(pre[i], g);
    }
    auto fg = ops::fully_connected_backward(inputs[i], layers[i]->weight.value, g_pre);
    grads[2 * i] = std::move(fg.weight);
    grads[2 * i + 1] = std::move(fg.bias);
    g = std::move(fg.input);
  }
  return loss;
}

// ---------------------------------------------------------------------------
// Embedding

ModelWeights initialize_model(const AutoencoderConfig& config) {
  return ModelWeights{ImageAutoencoder(config), LabelNet(label_seed(config.seed))};
}

std::size_t embedding_size(const AutoencoderConfig& config) {
  return kEncoderChannels.back() * static_cast<std::size_t>(config.resolution.height / 16) *
             static_cast<std::size_t>(config.resolution.width / 16) +
         kContentSize;
}

EmbeddingVector embed(const ImageAutoencoder& image_model, const LabelNet& label_model,
                      const AnnotatedLayout& layout, const EmbeddingScaling& scaling) {
  const AnnotatedLayout valid = validate_layout(layout);
  const Resolution res = image_model.config().resolution;
  const Tensor z1 = image_model.encode(rasterize(valid, res), attention_map(valid, res));
  const Tensor z2 = label_model.encode(multi_hot(valid));
  EmbeddingVector z;
  z.reserve(z1.size() + z2.size());
  for (double v : z1.data()) z.push_back(static_cast<float>(v * scaling.structural));
  for (double v : z2.data()) z.push_back(static_cast<float>(v * scaling.content));
  return z;
}

}  // namespace layoutsearch
