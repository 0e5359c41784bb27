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

#include "layoutsearch/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "layoutsearch/errors.hpp"
#include "layoutsearch/random.hpp"

namespace layoutsearch {

GradCheckResult finite_diff_check(std::string name, const std::function<double()>& loss,
                                  std::span<Tensor* const> inputs, std::span<const Tensor> analytic,
                                  double tolerance, const GradCheckOptions& options) {
  if (inputs.size() != analytic.size()) {
    throw Error(ErrorKind::ShapeMismatch, "finite_diff_check: " + std::to_string(inputs.size()) +
                                              " inputs but " + std::to_string(analytic.size()) + " gradients");
  }
  GradCheckResult result;
  result.name = std::move(name);
  result.tolerance = tolerance;
  Rng rng(derive_seed(options.seed, 0x6C8EC4ULL));

  for (std::size_t t = 0; t < inputs.size(); ++t) {
    Tensor& x = *inputs[t];
    require_same_shape(x, analytic[t], "finite_diff_check");
    std::vector<std::size_t> entries(x.size());
    std::iota(entries.begin(), entries.end(), std::size_t{0});
    if (options.max_entries_per_tensor != 0 && entries.size() > options.max_entries_per_tensor) {
      rng.shuffle(std::span<std::size_t>(entries));
      entries.resize(options.max_entries_per_tensor);
      std::sort(entries.begin(), entries.end());
    }
    for (std::size_t i : entries) {
      const double saved = x[i];
      x[i] = saved + options.step;
      const double up = loss();
      x[i] = saved - options.step;
      const double down = loss();
      x[i] = saved;
      const double numeric = (up - down) / (2.0 * options.step);
      const double err = std::abs(analytic[t][i] - numeric) / std::max(1.0, std::abs(numeric));
      result.max_relative_error = std::max(result.max_relative_error, std::isfinite(err) ? err : INFINITY);
      ++result.entries_checked;
    }
  }
  result.passed = result.max_relative_error < tolerance;
  return result;
}

}  // namespace layoutsearch
