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

#include "layoutsearch/tensor.hpp"

// Forward and backward passes for the layers used by the embedding networks.
// Backward functions take the forward inputs plus the upstream gradient and
// return exact gradients; nothing is cached between calls.
namespace layoutsearch::ops {

// Below this total mass both inputs count as empty and overlap is perfect.
inline constexpr double kDiceEmpty = 1e-6;

// input [Cin,H,W], weight [Cout,Cin,k,k] (k odd), bias [Cout] -> [Cout,H,W].
// Stride 1, zero padding k/2.
Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias);

struct Conv2dGrads {
  Tensor input;
  Tensor weight;
  Tensor bias;
};
Conv2dGrads conv2d_backward(const Tensor& input, const Tensor& weight, const Tensor& grad_output);

// Subgradient at 0 is 0.
Tensor relu(const Tensor& x);
Tensor relu_backward(const Tensor& x, const Tensor& grad_output);

Tensor sigmoid(const Tensor& x);
// Takes the forward output y = sigmoid(x).
Tensor sigmoid_backward(const Tensor& y, const Tensor& grad_output);

// 2x2 window, stride 2. Ties go to the first maximum in row-major order.
Tensor maxpool2(const Tensor& x);
Tensor maxpool2_backward(const Tensor& x, const Tensor& grad_output);

// Nearest-neighbour 2x replication.
Tensor upsample2(const Tensor& x);
Tensor upsample2_backward(const Tensor& grad_output);

// y = W x + b with x [n], W [m,n], b [m].
Tensor fully_connected(const Tensor& x, const Tensor& weight, const Tensor& bias);

struct FullyConnectedGrads {
  Tensor input;
  Tensor weight;
  Tensor bias;
};
FullyConnectedGrads fully_connected_backward(const Tensor& x, const Tensor& weight, const Tensor& grad_output);

// Stacks [Ca,H,W] and [Cb,H,W] into [Ca+Cb,H,W].
Tensor concat_channels(const Tensor& a, const Tensor& b);
// Leading `channels` channels of x.
Tensor leading_channels(const Tensor& x, std::size_t channels);

// mean((x - x_hat)^2)
double mse_loss(const Tensor& target, const Tensor& prediction);
// d mse / d prediction = 2 (prediction - target) / N
Tensor mse_loss_grad(const Tensor& target, const Tensor& prediction);

// 2*sum(x*y) / (sum(x) + sum(y)); 1 when both are empty.
double dice_coef(const Tensor& target, const Tensor& prediction);
// d dice / d prediction (by symmetry also d dice / d target with arguments swapped).
Tensor dice_coef_grad(const Tensor& target, const Tensor& prediction);

}  // namespace layoutsearch::ops
