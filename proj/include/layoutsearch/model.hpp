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

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "layoutsearch/layout.hpp"
#include "layoutsearch/raster.hpp"
#include "layoutsearch/tensor.hpp"

namespace layoutsearch {

// Encoder channel plan: 3 -> 8 -> 16 -> 16 -> 32, one pooled block per step.
inline constexpr std::array<std::size_t, 5> kEncoderChannels = {3, 8, 16, 16, 32};
inline constexpr std::size_t kEncoderBlocks = 4;
inline constexpr std::size_t kContentSize = 64;
inline constexpr std::array<std::size_t, 4> kLabelLayers = {kNumLabelClasses, 16, 32, kContentSize};

struct AutoencoderConfig {
  Resolution resolution{256, 256};
  // Number of trailing encoder blocks conditioned on the box attention map.
  int attention_maps = 4;
  std::uint64_t seed = 7;
  double learning_rate = 0.00005;
  int batch_size = 32;
  int epochs = 100;
  int patience = 10;

  // Throws InvalidConfig.
  void validate() const;

  nlohmann::json to_json() const;
  static AutoencoderConfig from_json(const nlohmann::json& j);

  friend bool operator==(const AutoencoderConfig&, const AutoencoderConfig&) = default;
};

// Attention-aware convolutional autoencoder over semantic images.
//
// Each encoder block is conv3x3 -> ReLU -> maxpool2. For the last
// `attention_maps` blocks the box attention map is subsampled to the pooled
// resolution, stacked onto the block output, and projected back to the
// block's channel count by a 1x1 conv + ReLU. The decoder mirrors the
// encoder (upsample2 -> conv3x3 -> ReLU) and ends in a 3-channel sigmoid.
class ImageAutoencoder {
 public:
  explicit ImageAutoencoder(const AutoencoderConfig& config);

  const AutoencoderConfig& config() const noexcept { return config_; }

  // z1: [32, H/16, W/16].
  Tensor encode(const SemanticImage& image, const AttentionMap& attention) const;
  SemanticImage decode(const Tensor& latent) const;

  double loss(const SemanticImage& image, const AttentionMap& attention) const;

  // Forward and backward of ae_loss(x, decode(encode(x))). `grads` receives
  // one tensor per parameter, in parameters() order.
  double loss_and_gradients(const SemanticImage& image, const AttentionMap& attention,
                            std::vector<Tensor>& grads) const;

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  std::vector<std::size_t> latent_shape() const;
  bool attended(std::size_t block) const;

 private:
  struct ConvLayer {
    Parameter weight;
    Parameter bias;
  };
  struct Trace;

  Tensor encode_traced(const SemanticImage& image, const AttentionMap& attention, Trace* trace) const;
  Tensor decode_traced(const Tensor& latent, Trace* trace) const;
  void check_inputs(const SemanticImage& image, const AttentionMap& attention) const;
  const ConvLayer& projection(std::size_t block) const;

  AutoencoderConfig config_;
  std::vector<ConvLayer> encoder_;
  std::vector<ConvLayer> projections_;  // one per attended block, in block order
  std::vector<ConvLayer> decoder_;
};

// mse(x, x_hat) + (1 - dice(x, x_hat))
double ae_loss(const SemanticImage& x, const SemanticImage& x_hat);
// d ae_loss / d x_hat.
Tensor ae_loss_grad(const SemanticImage& x, const SemanticImage& x_hat);

// Label encoder-decoder: FC 11 -> 16 -> 32 -> 64 (ReLU between layers, the
// 64-d output is the content vector), decoder FC 64 -> 32 -> 16 -> 11 with a
// sigmoid output, trained with MSE on the multi-hot vector.
class LabelNet {
 public:
  explicit LabelNet(std::uint64_t seed);

  Tensor encode(const LabelVector& labels) const;
  Tensor decode(const Tensor& content) const;

  double loss(const LabelVector& labels) const;
  double loss_and_gradients(const LabelVector& labels, std::vector<Tensor>& grads) const;

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

 private:
  struct DenseLayer {
    Parameter weight;
    Parameter bias;
  };

  std::vector<DenseLayer> encoder_;
  std::vector<DenseLayer> decoder_;
};

std::uint64_t label_seed(std::uint64_t seed);

struct ModelWeights {
  ImageAutoencoder image;
  LabelNet label;
};

ModelWeights initialize_model(const AutoencoderConfig& config);

using EmbeddingVector = std::vector<float>;

// Optional per-part multipliers applied before concatenation. Both default
// to 1, which leaves z = (z1, z2) untouched.
struct EmbeddingScaling {
  double structural = 1.0;
  double content = 1.0;
};

std::size_t embedding_size(const AutoencoderConfig& config);

// z = (flatten(z1), z2) for a layout: validate, rasterize and build the
// attention map at the model resolution, encode both parts, concatenate.
EmbeddingVector embed(const ImageAutoencoder& image_model, const LabelNet& label_model,
                      const AnnotatedLayout& layout, const EmbeddingScaling& scaling = {});
inline EmbeddingVector embed(const ModelWeights& model, const AnnotatedLayout& layout,
                             const EmbeddingScaling& scaling = {}) {
  return embed(model.image, model.label, layout, scaling);
}

}  // namespace layoutsearch
