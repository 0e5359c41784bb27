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

#include "layoutsearch/optim.hpp"

namespace layoutsearch {

void sgd_step(std::span<Parameter* const> params, double learning_rate) {
  for (Parameter* p : params) {
    auto value = p->value.data();
    const auto grad = p->grad.data();
    for (std::size_t i = 0; i < value.size(); ++i) value[i] -= learning_rate * grad[i];
    p->zero_grad();
  }
}

}  // namespace layoutsearch
