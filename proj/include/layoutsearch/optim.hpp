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

#include <span>

#include "layoutsearch/tensor.hpp"

namespace layoutsearch {

// value -= lr * grad for every parameter, then zero the gradients.
void sgd_step(std::span<Parameter* const> params, double learning_rate);

}  // namespace layoutsearch
