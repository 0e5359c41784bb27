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

#include <gtest/gtest.h>

#include <set>

#include "layoutsearch/model.hpp"
#include "layoutsearch/ops.hpp"
#include "layoutsearch/random.hpp"
#include "layoutsearch/synth.hpp"
#include "layoutsearch/weights_io.hpp"
#include "test_util.hpp"

using namespace layoutsearch;
using namespace layoutsearch::testing;

namespace {

AutoencoderConfig config_at(int size, int m) {
  AutoencoderConfig c;
  c.resolution = {size, size};
  c.attention_maps = m;
  return c;
}

AnnotatedLayout sample_layout() {
  return make_layout("s", 360, 640,
                     {element(ComponentClass::UpperTaskBar, 0, 0, 360, 24), element(ComponentClass::InputField, 40, 200, 320, 250),
                      element(ComponentClass::TextButton, 100, 400, 260, 450), element(ComponentClass::Icon, 150, 80, 210, 140)});
}

}  // namespace

TEST(AutoencoderConfig, DefaultsAndValidation) {
  const AutoencoderConfig c;
  EXPECT_EQ(c.resolution, (Resolution{256, 256}));
  EXPECT_EQ(c.learning_rate, 0.00005);
  EXPECT_EQ(c.batch_size, 32);
  EXPECT_NO_THROW(c.validate());
  for (int m : {-1, 5}) EXPECT_EQ(error_kind([&] { config_at(64, m).validate(); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(error_kind([] { config_at(40, 4).validate(); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(error_kind([] { config_at(0, 4).validate(); }), ErrorKind::InvalidConfig);
  AutoencoderConfig bad_lr = config_at(64, 4);
  bad_lr.learning_rate = 0;
  EXPECT_EQ(error_kind([&] { bad_lr.validate(); }), ErrorKind::InvalidConfig);
}

TEST(AutoencoderConfig, JsonRoundTrip) {
  AutoencoderConfig c = config_at(64, 2);
  c.seed = 99;
  c.learning_rate = 0.125;
  c.epochs = 3;
  EXPECT_EQ(AutoencoderConfig::from_json(c.to_json()), c);
}

TEST(ImageAutoencoder, ShapesAt256ForEveryM) {
  const AnnotatedLayout layout = sample_layout();
  for (int m = 0; m <= 4; ++m) {
    const AutoencoderConfig config = config_at(256, m);
    const ImageAutoencoder model(config);
    const Tensor z1 = model.encode(rasterize(layout, config.resolution), attention_map(layout, config.resolution));
    EXPECT_EQ(z1.shape(), (std::vector<std::size_t>{32, 16, 16})) << m;
    EXPECT_EQ(embedding_size(config), 8256u);
    const SemanticImage out = model.decode(z1);
    EXPECT_EQ(out.pixels.shape(), (std::vector<std::size_t>{3, 256, 256}));
    for (double v : out.pixels.data()) {
      ASSERT_GT(v, 0.0);
      ASSERT_LT(v, 1.0);
    }
  }
}

TEST(ImageAutoencoder, ParameterGroups) {
  const ImageAutoencoder m0(config_at(64, 0));
  const ImageAutoencoder m4(config_at(64, 4));
  EXPECT_EQ(m0.parameters().size(), 16u);
  EXPECT_EQ(m4.parameters().size(), 24u);
  std::set<std::string> names;
  for (const Parameter* p : m4.parameters()) names.insert(p->name);
  EXPECT_TRUE(names.contains("attn3.weight"));
  EXPECT_TRUE(names.contains("enc0.weight"));
  const ImageAutoencoder m1(config_at(64, 1));
  EXPECT_FALSE(m1.attended(2));
  EXPECT_TRUE(m1.attended(3));
}

TEST(ImageAutoencoder, WithoutAttentionMapsIgnoresTheMap) {
  const AutoencoderConfig config = config_at(32, 0);
  const ImageAutoencoder model(config);
  const AnnotatedLayout layout = sample_layout();
  const SemanticImage img = rasterize(layout, config.resolution);
  const AttentionMap zeros{Tensor({3, 32, 32})};
  EXPECT_EQ(model.encode(img, attention_map(layout, config.resolution)), model.encode(img, zeros));
}

TEST(ImageAutoencoder, AttentionPixelChangesLatent) {
  const AutoencoderConfig config = config_at(32, 4);
  const ImageAutoencoder model(config);
  const AnnotatedLayout layout = sample_layout();
  const SemanticImage img = rasterize(layout, config.resolution);
  AttentionMap attn = attention_map(layout, config.resolution);
  const Tensor before = model.encode(img, attn);
  // The top-left pixel is sampled at every downsampled scale.
  attn.mask.at(0, 0, 0) = 1.0 - attn.mask.at(0, 0, 0);
  EXPECT_NE(model.encode(img, attn), before);
}

TEST(ImageAutoencoder, RejectsWrongResolution) {
  const ImageAutoencoder model(config_at(32, 4));
  const AnnotatedLayout layout = sample_layout();
  EXPECT_EQ(error_kind([&] { model.encode(rasterize(layout, {64, 64}), attention_map(layout, {64, 64})); }),
            ErrorKind::ResolutionMismatch);
  EXPECT_EQ(error_kind([&] { model.decode(Tensor({32, 1, 1})); }), ErrorKind::ShapeMismatch);
}

TEST(ImageAutoencoder, DeterministicInitialisationPerSeed) {
  AutoencoderConfig a = config_at(32, 4), b = config_at(32, 4);
  b.seed = 8;
  const ImageAutoencoder ma(a), ma2(a), mb(b);
  for (std::size_t i = 0; i < ma.parameters().size(); ++i) {
    EXPECT_EQ(ma.parameters()[i]->value, ma2.parameters()[i]->value);
  }
  EXPECT_NE(ma.parameters()[0]->value, mb.parameters()[0]->value);
}

TEST(ImageAutoencoder, WeightsWithinGlorotBound) {
  const ImageAutoencoder model(config_at(32, 4));
  for (const Parameter* p : model.parameters()) {
    if (p->value.rank() != 4) continue;
    const double fan_in = double(p->value.dim(1) * p->value.dim(2) * p->value.dim(3));
    const double fan_out = double(p->value.dim(0) * p->value.dim(2) * p->value.dim(3));
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (double v : p->value.data()) ASSERT_LE(std::abs(v), bound) << p->name;
  }
}

TEST(AeLoss, Examples) {
  const SemanticImage x{tensor({3, 1, 2}, {1, 0, 0, 1, 1, 1})};
  EXPECT_LT(ae_loss(x, x), 1e-6);
  const SemanticImage ones{Tensor({3, 4, 4}, 1.0)};
  const SemanticImage zeros{Tensor({3, 4, 4}, 0.0)};
  EXPECT_NEAR(ae_loss(ones, zeros), 2.0, 1e-6);
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    SemanticImage a{Tensor({3, 2, 2})}, b{Tensor({3, 2, 2})};
    for (double& v : a.pixels.data()) v = rng.uniform();
    for (double& v : b.pixels.data()) v = rng.uniform();
    EXPECT_GE(ae_loss(a, b), 0.0);
  }
}

TEST(AeLoss, GradientIsMsePlusNegativeDice) {
  const SemanticImage x{tensor({3, 1, 1}, {1, 0, 0.5})};
  const SemanticImage y{tensor({3, 1, 1}, {0.2, 0.7, 0.5})};
  const Tensor g = ae_loss_grad(x, y);
  const Tensor mse = ops::mse_loss_grad(x.pixels, y.pixels);
  const Tensor dice = ops::dice_coef_grad(x.pixels, y.pixels);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(g[i], mse[i] - dice[i]);
}

TEST(LabelNet, ShapesAndRange) {
  const LabelNet net(label_seed(7));
  const LabelVector v = multi_hot(sample_layout());
  const Tensor z2 = net.encode(v);
  EXPECT_EQ(z2.shape(), (std::vector<std::size_t>{64}));
  EXPECT_EQ(z2, net.encode(v));
  const Tensor out = net.decode(z2);
  EXPECT_EQ(out.shape(), (std::vector<std::size_t>{11}));
  for (double o : out.data()) {
    EXPECT_GT(o, 0.0);
    EXPECT_LT(o, 1.0);
  }
}

TEST(LabelNet, DistinctInputsGiveDistinctContent) {
  const LabelNet net(label_seed(7));
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    LabelVector a{}, b{};
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = double(rng.below(2));
      b[i] = double(rng.below(2));
    }
    if (a == b) b[rng.below(11)] = 1 - b[0];
    if (a == b) continue;
    EXPECT_NE(net.encode(a), net.encode(b));
  }
}

TEST(Embed, LengthAndDeterminism) {
  const ModelWeights model = initialize_model(config_at(64, 4));
  const AnnotatedLayout layout = sample_layout();
  const EmbeddingVector z = embed(model, layout);
  EXPECT_EQ(z.size(), 32u * 4 * 4 + 64);
  EXPECT_EQ(z, embed(model, layout));
  AnnotatedLayout copy = layout;
  copy.id = "other";
  EXPECT_EQ(embed(model, copy), z);
  for (float v : z) EXPECT_TRUE(std::isfinite(v));
}

TEST(Embed, EmptyLayoutIsWellDefined) {
  const ModelWeights model = initialize_model(config_at(32, 2));
  const EmbeddingVector z = embed(model, make_layout("e", 360, 640, {}));
  EXPECT_EQ(z.size(), 32u * 2 * 2 + 64);
}

TEST(Embed, ConcatenatesStructureThenContent) {
  const AutoencoderConfig config = config_at(32, 4);
  const ModelWeights model = initialize_model(config);
  const AnnotatedLayout layout = sample_layout();
  const Tensor z1 = model.image.encode(rasterize(layout, config.resolution), attention_map(layout, config.resolution));
  const Tensor z2 = model.label.encode(multi_hot(layout));
  const EmbeddingVector z = embed(model, layout);
  for (std::size_t i = 0; i < z1.size(); ++i) EXPECT_EQ(z[i], static_cast<float>(z1[i]));
  for (std::size_t i = 0; i < z2.size(); ++i) EXPECT_EQ(z[z1.size() + i], static_cast<float>(z2[i]));

  const EmbeddingVector scaled = embed(model, layout, EmbeddingScaling{2.0, 0.0});
  EXPECT_EQ(scaled[0], static_cast<float>(2.0 * z1[0]));
  EXPECT_EQ(scaled.back(), 0.0f);
}

TEST(Embed, RejectsDegenerateLayout) {
  const ModelWeights model = initialize_model(config_at(32, 0));
  EXPECT_EQ(error_kind([&] { embed(model, make_layout("d", 10, 10, {element(ComponentClass::Icon, 3, 3, 3, 8)})); }),
            ErrorKind::DegenerateBox);
}

TEST(WeightsIo, RoundTripKeepsFloat32Values) {
  TempDir dir("weights");
  const ModelWeights model = initialize_model(config_at(32, 3));
  save_weights(model, dir / "w.bin");
  const ModelWeights back = load_weights(dir / "w.bin");
  EXPECT_EQ(back.image.config(), model.image.config());
  const auto a = model.image.parameters(), b = back.image.parameters();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i]->value.size(); ++j) {
      ASSERT_EQ(b[i]->value[j], static_cast<double>(static_cast<float>(a[i]->value[j])));
    }
  }
  // Float32 storage is a fixed point.
  EXPECT_EQ(serialize_weights(back), serialize_weights(model));
}

TEST(WeightsIo, RejectsCorruption) {
  const std::string bytes = serialize_weights(initialize_model(config_at(32, 1)));
  EXPECT_EQ(error_kind([&] { deserialize_weights("XXXX" + bytes.substr(4)); }), ErrorKind::BadWeights);
  EXPECT_EQ(error_kind([&] { deserialize_weights(bytes.substr(0, bytes.size() - 3)); }), ErrorKind::BadWeights);
  EXPECT_EQ(error_kind([&] { deserialize_weights(bytes + "x"); }), ErrorKind::BadWeights);
  EXPECT_EQ(error_kind([&] { deserialize_weights(""); }), ErrorKind::BadWeights);
  std::string version = bytes;
  version[4] = 9;
  EXPECT_EQ(error_kind([&] { deserialize_weights(version); }), ErrorKind::BadWeights);
  TempDir dir("weights_missing");
  EXPECT_EQ(error_kind([&] { load_weights(dir / "none.bin"); }), ErrorKind::Io);
}

TEST(WeightsIo, RejectsConfigShapeMismatch) {
  // Swap the stored config for one with a different m: tensor names and count no longer match.
  const std::string m1 = serialize_weights(initialize_model(config_at(32, 1)));
  const std::string m2 = serialize_weights(initialize_model(config_at(32, 2)));
  const auto config_end = [](const std::string& b) {
    const auto len = static_cast<unsigned char>(b[8]) | static_cast<unsigned char>(b[9]) << 8;
    return std::size_t(12 + len);
  };
  const std::string spliced = m2.substr(0, config_end(m2)) + m1.substr(config_end(m1));
  EXPECT_EQ(error_kind([&] { deserialize_weights(spliced); }), ErrorKind::BadWeights);
}
