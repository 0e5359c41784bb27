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

#include "layoutsearch/ops.hpp"

#include <algorithm>
#include <cmath>

#include "layoutsearch/errors.hpp"
#include "layoutsearch/kernels.hpp"

namespace layoutsearch::ops {

namespace {

[[noreturn]] void shape_error(const std::string& what) { throw Error(ErrorKind::ShapeMismatch, what); }

kernels::ConvShape conv_shape(const Tensor& input, const Tensor& weight) {
  if (input.rank() != 3) shape_error("conv2d input must be [C,H,W], got " + shape_string(input.shape()));
  if (weight.rank() != 4 || weight.dim(2) != weight.dim(3) || weight.dim(2) % 2 == 0) {
    shape_error("conv2d weight must be [Cout,Cin,k,k] with odd k, got " + shape_string(weight.shape()));
  }
  if (weight.dim(1) != input.dim(0)) {
    shape_error("conv2d weight " + shape_string(weight.shape()) + " does not accept input " +
                shape_string(input.shape()));
  }
  return {input.dim(0), weight.dim(0), input.dim(1), input.dim(2), weight.dim(2)};
}

void require_chw(const Tensor& x, const char* op) {
  if (x.rank() != 3) shape_error(std::string(op) + " expects [C,H,W], got " + shape_string(x.shape()));
}

}  // namespace

Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias) {
  const auto s = conv_shape(input, weight);
  if (bias.rank() != 1 || bias.dim(0) != s.out_channels) {
    shape_error("conv2d bias must be [" + std::to_string(s.out_channels) + "], got " +
                shape_string(bias.shape()));
  }
  Tensor out({s.out_channels, s.height, s.width});
  kernels::parallel::conv2d_forward(s, input.data(), weight.data(), bias.data(), out.data());
  return out;
}

Conv2dGrads conv2d_backward(const Tensor& input, const Tensor& weight, const Tensor& grad_output) {
  const auto s = conv_shape(input, weight);
  if (grad_output.shape() != std::vector<std::size_t>{s.out_channels, s.height, s.width}) {
    shape_error("conv2d grad_output " + shape_string(grad_output.shape()));
  }
  Conv2dGrads g{Tensor(input.shape()), Tensor(weight.shape()), Tensor({s.out_channels})};
  kernels::parallel::conv2d_backward(s, input.data(), weight.data(), grad_output.data(), g.input.data(),
                                     g.weight.data(), g.bias.data());
  return g;
}

Tensor relu(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.data()) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor relu_backward(const Tensor& x, const Tensor& grad_output) {
  require_same_shape(x, grad_output, "relu_backward");
  Tensor g(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] > 0.0 ? grad_output[i] : 0.0;
  return g;
}

Tensor sigmoid(const Tensor& x) {
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    // Split on sign so exp never overflows.
    if (v >= 0) {
      y[i] = 1.0 / (1.0 + std::exp(-v));
    } else {
      const double e = std::exp(v);
      y[i] = e / (1.0 + e);
    }
  }
  return y;
}

Tensor sigmoid_backward(const Tensor& y, const Tensor& grad_output) {
  require_same_shape(y, grad_output, "sigmoid_backward");
  Tensor g(y.shape());
  for (std::size_t i = 0; i < y.size(); ++i) g[i] = grad_output[i] * y[i] * (1.0 - y[i]);
  return g;
}

Tensor maxpool2(const Tensor& x) {
  require_chw(x, "maxpool2");
  const std::size_t C = x.dim(0), H = x.dim(1), W = x.dim(2);
  if (H % 2 || W % 2) {
    throw Error(ErrorKind::OddSpatialDim, "maxpool2 needs even spatial dims, got " + shape_string(x.shape()));
  }
  Tensor y({C, H / 2, W / 2});
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t oy = 0; oy < H / 2; ++oy) {
      for (std::size_t ox = 0; ox < W / 2; ++ox) {
        double best = x.at(c, 2 * oy, 2 * ox);
        best = std::max(best, x.at(c, 2 * oy, 2 * ox + 1));
        best = std::max(best, x.at(c, 2 * oy + 1, 2 * ox));
        best = std::max(best, x.at(c, 2 * oy + 1, 2 * ox + 1));
        y.at(c, oy, ox) = best;
      }
    }
  }
  return y;
}

Tensor maxpool2_backward(const Tensor& x, const Tensor& grad_output) {
  require_chw(x, "maxpool2_backward");
  const std::size_t C = x.dim(0), H = x.dim(1), W = x.dim(2);
  if (H % 2 || W % 2) {
    throw Error(ErrorKind::OddSpatialDim, "maxpool2 needs even spatial dims, got " + shape_string(x.shape()));
  }
  if (grad_output.shape() != std::vector<std::size_t>{C, H / 2, W / 2}) {
    shape_error("maxpool2_backward grad_output " + shape_string(grad_output.shape()));
  }
  Tensor g(x.shape());
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t oy = 0; oy < H / 2; ++oy) {
      for (std::size_t ox = 0; ox < W / 2; ++ox) {
        std::size_t by = 2 * oy, bx = 2 * ox;
        double best = x.at(c, by, bx);
        for (std::size_t dy = 0; dy < 2; ++dy) {
          for (std::size_t dx = 0; dx < 2; ++dx) {
            const double v = x.at(c, 2 * oy + dy, 2 * ox + dx);
            if (v > best) {
              best = v;
              by = 2 * oy + dy;
              bx = 2 * ox + dx;
            }
          }
        }
        g.at(c, by, bx) = grad_output.at(c, oy, ox);
      }
    }
  }
  return g;
}

Tensor upsample2(const Tensor& x) {
  require_chw(x, "upsample2");
  const std::size_t C = x.dim(0), H = x.dim(1), W = x.dim(2);
  Tensor y({C, 2 * H, 2 * W});
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t oy = 0; oy < 2 * H; ++oy) {
      for (std::size_t ox = 0; ox < 2 * W; ++ox) y.at(c, oy, ox) = x.at(c, oy / 2, ox / 2);
    }
  }
  return y;
}

Tensor upsample2_backward(const Tensor& grad_output) {
  require_chw(grad_output, "upsample2_backward");
  const std::size_t C = grad_output.dim(0), H = grad_output.dim(1), W = grad_output.dim(2);
  if (H % 2 || W % 2) {
    throw Error(ErrorKind::OddSpatialDim, "upsample2_backward needs even dims, got " +
                                              shape_string(grad_output.shape()));
  }
  Tensor g({C, H / 2, W / 2});
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t y = 0; y < H / 2; ++y) {
      for (std::size_t x = 0; x < W / 2; ++x) {
        g.at(c, y, x) = grad_output.at(c, 2 * y, 2 * x) + grad_output.at(c, 2 * y, 2 * x + 1) +
                        grad_output.at(c, 2 * y + 1, 2 * x) + grad_output.at(c, 2 * y + 1, 2 * x + 1);
      }
    }
  }
  return g;
}

Tensor fully_connected(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  if (x.rank() != 1 || weight.rank() != 2 || weight.dim(1) != x.dim(0) || bias.rank() != 1 ||
      bias.dim(0) != weight.dim(0)) {
    shape_error("fully_connected x " + shape_string(x.shape()) + ", W " + shape_string(weight.shape()) +
                ", b " + shape_string(bias.shape()));
  }
  const std::size_t m = weight.dim(0), n = weight.dim(1);
  Tensor y({m});
  for (std::size_t i = 0; i < m; ++i) {
    double sum = bias[i];
    for (std::size_t j = 0; j < n; ++j) sum += weight[i * n + j] * x[j];
    y[i] = sum;
  }
  return y;
}

FullyConnectedGrads fully_connected_backward(const Tensor& x, const Tensor& weight, const Tensor& grad_output) {
  if (x.rank() != 1 || weight.rank() != 2 || weight.dim(1) != x.dim(0) || grad_output.rank() != 1 ||
      grad_output.dim(0) != weight.dim(0)) {
    shape_error("fully_connected_backward x " + shape_string(x.shape()) + ", W " +
                shape_string(weight.shape()) + ", dy " + shape_string(grad_output.shape()));
  }
  const std::size_t m = weight.dim(0), n = weight.dim(1);
  FullyConnectedGrads g{Tensor({n}), Tensor({m, n}), grad_output};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      g.weight[i * n + j] = grad_output[i] * x[j];
      g.input[j] += weight[i * n + j] * grad_output[i];
    }
  }
  return g;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  require_chw(a, "concat_channels");
  require_chw(b, "concat_channels");
  if (a.dim(1) != b.dim(1) || a.dim(2) != b.dim(2)) {
    shape_error("concat_channels " + shape_string(a.shape()) + " with " + shape_string(b.shape()));
  }
  Tensor out({a.dim(0) + b.dim(0), a.dim(1), a.dim(2)});
  std::copy(a.data().begin(), a.data().end(), out.data().begin());
  std::copy(b.data().begin(), b.data().end(), out.data().begin() + static_cast<std::ptrdiff_t>(a.size()));
  return out;
}

Tensor leading_channels(const Tensor& x, std::size_t channels) {
  require_chw(x, "leading_channels");
  if (channels > x.dim(0)) shape_error("leading_channels beyond " + shape_string(x.shape()));
  const std::size_t n = channels * x.dim(1) * x.dim(2);
  return Tensor({channels, x.dim(1), x.dim(2)},
                std::vector<double>(x.data().begin(), x.data().begin() + static_cast<std::ptrdiff_t>(n)));
}

double mse_loss(const Tensor& target, const Tensor& prediction) {
  require_same_shape(target, prediction, "mse_loss");
  if (target.empty()) return 0.0;
  double sum = 0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double d = target[i] - prediction[i];
    sum += d * d;
  }
  return sum / static_cast<double>(target.size());
}

Tensor mse_loss_grad(const Tensor& target, const Tensor& prediction) {
  require_same_shape(target, prediction, "mse_loss_grad");
  Tensor g(prediction.shape());
  const double scale = target.empty() ? 0.0 : 2.0 / static_cast<double>(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) g[i] = scale * (prediction[i] - target[i]);
  return g;
}

namespace {

struct DiceTerms {
  double numerator;
  double denominator;
};

DiceTerms dice_terms(const Tensor& x, const Tensor& y) {
  double inter = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    inter += x[i] * y[i];
    sx += x[i];
    sy += y[i];
  }
  return {2.0 * inter, sx + sy};
}

}  // namespace

double dice_coef(const Tensor& target, const Tensor& prediction) {
  require_same_shape(target, prediction, "dice_coef");
  const auto t = dice_terms(target, prediction);
  if (t.denominator < kDiceEmpty) return 1.0;
  return t.numerator / t.denominator;
}

Tensor dice_coef_grad(const Tensor& target, const Tensor& prediction) {
  require_same_shape(target, prediction, "dice_coef_grad");
  const auto t = dice_terms(target, prediction);
  Tensor g(prediction.shape());
  if (t.denominator < kDiceEmpty) return g;
  const double d2 = t.denominator * t.denominator;
  for (std::size_t i = 0; i < target.size(); ++i) {
    g[i] = (2.0 * target[i] * t.denominator - t.numerator) / d2;
  }
  return g;
}

}  // namespace layoutsearch::ops
