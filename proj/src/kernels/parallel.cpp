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

#include <algorithm>

#include "layoutsearch/kernels.hpp"

namespace layoutsearch::kernels::parallel {

namespace {

// Rows/cols of the output that read an in-bounds input at offset (k - pad).
struct Range {
  long begin;
  long end;
};

Range valid_range(long extent, long k, long pad) {
  const long shift = k - pad;
  return {std::max(0L, -shift), std::min(extent, extent - shift)};
}

}  // namespace

void conv2d_forward(const ConvShape& s, std::span<const double> input, std::span<const double> weight,
                    std::span<const double> bias, std::span<double> output) {
  const auto H = static_cast<long>(s.height);
  const auto W = static_cast<long>(s.width);
  const auto K = static_cast<long>(s.kernel);
  const long pad = K / 2;
  const auto Cin = static_cast<long>(s.in_channels);
  const auto Cout = static_cast<long>(s.out_channels);
  const double* in = input.data();
  const double* w = weight.data();
  double* out = output.data();

#pragma omp parallel for schedule(static)
  for (long co = 0; co < Cout; ++co) {
    double* plane = out + co * H * W;
    std::fill(plane, plane + H * W, bias[static_cast<std::size_t>(co)]);
    for (long ci = 0; ci < Cin; ++ci) {
      const double* src = in + ci * H * W;
      for (long ky = 0; ky < K; ++ky) {
        const Range ry = valid_range(H, ky, pad);
        for (long kx = 0; kx < K; ++kx) {
          const Range rx = valid_range(W, kx, pad);
          const double wv = w[((co * Cin + ci) * K + ky) * K + kx];
          const long dy = ky - pad;
          const long dx = kx - pad;
          for (long y = ry.begin; y < ry.end; ++y) {
            double* orow = plane + y * W;
            const double* irow = src + (y + dy) * W + dx;
            for (long x = rx.begin; x < rx.end; ++x) orow[x] += wv * irow[x];
          }
        }
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
  const auto Cin = static_cast<long>(s.in_channels);
  const auto Cout = static_cast<long>(s.out_channels);
  const double* in = input.data();
  const double* w = weight.data();
  const double* gout = grad_output.data();
  double* gin = grad_input.data();
  double* gw = grad_weight.data();

#pragma omp parallel for schedule(static)
  for (long co = 0; co < Cout; ++co) {
    const double* g = gout + co * H * W;
    double sum = 0;
    for (long i = 0; i < H * W; ++i) sum += g[i];
    grad_bias[static_cast<std::size_t>(co)] = sum;
    for (long ci = 0; ci < Cin; ++ci) {
      const double* src = in + ci * H * W;
      for (long ky = 0; ky < K; ++ky) {
        const Range ry = valid_range(H, ky, pad);
        for (long kx = 0; kx < K; ++kx) {
          const Range rx = valid_range(W, kx, pad);
          const long dy = ky - pad;
          const long dx = kx - pad;
          double acc = 0;
          for (long y = ry.begin; y < ry.end; ++y) {
            const double* grow = g + y * W;
            const double* irow = src + (y + dy) * W + dx;
            for (long x = rx.begin; x < rx.end; ++x) acc += grow[x] * irow[x];
          }
          gw[((co * Cin + ci) * K + ky) * K + kx] = acc;
        }
      }
    }
  }

#pragma omp parallel for schedule(static)
  for (long ci = 0; ci < Cin; ++ci) {
    double* plane = gin + ci * H * W;
    std::fill(plane, plane + H * W, 0.0);
    for (long co = 0; co < Cout; ++co) {
      const double* g = gout + co * H * W;
      for (long ky = 0; ky < K; ++ky) {
        const Range ry = valid_range(H, ky, pad);
        for (long kx = 0; kx < K; ++kx) {
          const Range rx = valid_range(W, kx, pad);
          const double wv = w[((co * Cin + ci) * K + ky) * K + kx];
          const long dy = ky - pad;
          const long dx = kx - pad;
          for (long y = ry.begin; y < ry.end; ++y) {
            const double* grow = g + y * W;
            double* prow = plane + (y + dy) * W + dx;
            for (long x = rx.begin; x < rx.end; ++x) prow[x] += wv * grow[x];
          }
        }
      }
    }
  }
}

void squared_distances(std::span<const float> rows, std::size_t dim, std::span<const float> query,
                       std::span<double> out) {
  const auto n = static_cast<long>(out.size());
  const float* data = rows.data();
  const float* q = query.data();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const float* row = data + static_cast<std::size_t>(i) * dim;
    double sum = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = static_cast<double>(row[j]) - static_cast<double>(q[j]);
      sum += d * d;
    }
    out[static_cast<std::size_t>(i)] = sum;
  }
}

}  // namespace layoutsearch::kernels::parallel
