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

#include "layoutsearch/kernels.hpp"

namespace layoutsearch::kernels::reference {

void conv2d_forward(const ConvShape& s, std::span<const double> input, std::span<const double> weight,
                    std::span<const double> bias, std::span<double> output) {
  const auto H = static_cast<long>(s.height);
  const auto W = static_cast<long>(s.width);
  const auto K = static_cast<long>(s.kernel);
  const long pad = K / 2;
  for (std::size_t co = 0; co < s.out_channels; ++co) {
    for (long y = 0; y < H; ++y) {
      for (long x = 0; x < W; ++x) {
        double sum = bias[co];
        for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
          for (long ky = 0; ky < K; ++ky) {
            for (long kx = 0; kx < K; ++kx) {
              const long iy = y + ky - pad;
              const long ix = x + kx - pad;
              if (iy < 0 || iy >= H || ix < 0 || ix >= W) continue;
              sum += weight[((co * s.in_channels + ci) * K + ky) * K + kx] *
                     input[(ci * H + iy) * W + ix];
            }
          }
        }
        output[(co * H + y) * W + x] = sum;
      }
    }
  }
}

void conv2d_backward(const ConvShape& s, std::span<const double> input, std::span<const double> weight,
                     std::span<const double> grad_output, std::span<double> grad_input,
                     std::span<double> grad_weight, std::span<double> grad_bias) {
  const auto H = static_cast<long>(s.height);
  const auto W = static_cast<long>(s.width);
  const auto K = static_cast<long>(s.kernel);
  const long pad = K / 2;

  for (std::size_t co = 0; co < s.out_channels; ++co) {
    double sum = 0;
    for (long i = 0; i < H * W; ++i) sum += grad_output[co * H * W + i];
    grad_bias[co] = sum;
  }

  for (std::size_t co = 0; co < s.out_channels; ++co) {
    for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
      for (long ky = 0; ky < K; ++ky) {
        for (long kx = 0; kx < K; ++kx) {
          double sum = 0;
          for (long y = 0; y < H; ++y) {
            for (long x = 0; x < W; ++x) {
              const long iy = y + ky - pad;
              const long ix = x + kx - pad;
              if (iy < 0 || iy >= H || ix < 0 || ix >= W) continue;
              sum += grad_output[(co * H + y) * W + x] * input[(ci * H + iy) * W + ix];
            }
          }
          grad_weight[((co * s.in_channels + ci) * K + ky) * K + kx] = sum;
        }
      }
    }
  }

  // d out[co][y][x] / d in[ci][iy][ix] = w[co][ci][iy-y+pad][ix-x+pad]
  for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
    for (long iy = 0; iy < H; ++iy) {
      for (long ix = 0; ix < W; ++ix) {
        double sum = 0;
        for (std::size_t co = 0; co < s.out_channels; ++co) {
          for (long ky = 0; ky < K; ++ky) {
            for (long kx = 0; kx < K; ++kx) {
              const long y = iy - ky + pad;
              const long x = ix - kx + pad;
              if (y < 0 || y >= H || x < 0 || x >= W) continue;
              sum += weight[((co * s.in_channels + ci) * K + ky) * K + kx] *
                     grad_output[(co * H + y) * W + x];
            }
          }
        }
        grad_input[(ci * H + iy) * W + ix] = sum;
      }
    }
  }
}

void squared_distances(std::span<const float> rows, std::size_t dim, std::span<const float> query,
                       std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    double sum = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = static_cast<double>(rows[i * dim + j]) - static_cast<double>(query[j]);
      sum += d * d;
    }
    out[i] = sum;
  }
}

}  // namespace layoutsearch::kernels::reference
