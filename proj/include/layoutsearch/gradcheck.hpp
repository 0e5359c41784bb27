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

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "layoutsearch/tensor.hpp"

namespace layoutsearch {

struct GradCheckOptions {
  double step = 1e-4;
  // 0 checks every entry; otherwise a seeded sample of this many per tensor.
  std::size_t max_entries_per_tensor = 0;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  std::string name;
  double max_relative_error = 0;
  std::size_t entries_checked = 0;
  double tolerance = 0;
  bool passed = false;
};

// Compares `analytic[i]` with central differences of `loss` taken by
// perturbing `inputs[i]` in place. Error per entry is
// |analytic - numeric| / max(1, |numeric|).
GradCheckResult finite_diff_check(std::string name, const std::function<double()>& loss,
                                  std::span<Tensor* const> inputs, std::span<const Tensor> analytic,
                                  double tolerance, const GradCheckOptions& options = {});

// The full numerics + end-to-end suite used by `gradcheck` and the
// acceptance tests. `corrupt_gradients` perturbs every analytic gradient and
// must make the suite fail.
std::vector<GradCheckResult> run_gradient_suite(std::uint64_t seed, bool corrupt_gradients = false);

}  // namespace layoutsearch
