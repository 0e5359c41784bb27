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

#include <cstddef>
#include <span>

// Compute kernels behind the tensor ops. `reference` holds the direct
// definitional loops and is kept for testing; `parallel` is the OpenMP
// version used everywhere else. Both are deterministic for any thread count.
namespace layoutsearch::kernels {

// Square kernel of odd size, stride 1, zero padding kernel/2.
struct ConvShape {
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t kernel = 3;

  std::size_t input_size() const { return in_channels * height * width; }
  std::size_t output_size() const { return out_channels * height * width; }
  std::size_t weight_size() const { return out_channels * in_channels * kernel * kernel; }
};

namespace reference {

void conv2d_forward(const ConvShape& s, std::span<const double> input, std::span<const double> weight,
                    std::span<const double> bias, std::span<double> output);

// Overwrites all three gradient buffers.
void conv2d_backward(const ConvShape& s, std::span<const double> input, std::span<const double> weight,
                     std::span<const double> grad_output, std::span<double> grad_input,
                     std::span<double> grad_weight, std::span<double> grad_bias);

// out[i] = sum_j (rows[i*dim + j] - query[j])^2, accumulated in double in j order.
void squared_distances(std::span<const float> rows, std::size_t dim, std::span<const float> query,
                       std::span<double> out);

}  // namespace reference

namespace parallel {

void conv2d_forward(const ConvShape& s, std::span<const double> input, std::span<const double> weight,
                    std::span<const double> bias, std::span<double> output);

void conv2d_backward(const ConvShape& s, std::span<const double> input, std::span<const double> weight,
                     std::span<const double> grad_output, std::span<double> grad_input,
                     std::span<double> grad_weight, std::span<double> grad_bias);

void squared_distances(std::span<const float> rows, std::size_t dim, std::span<const float> query,
                       std::span<double> out);

}  // namespace parallel

}  // namespace layoutsearch::kernels
