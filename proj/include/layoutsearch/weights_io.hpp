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

#include <filesystem>
#include <string>
#include <string_view>

#include "layoutsearch/model.hpp"

namespace layoutsearch {

inline constexpr std::uint32_t kWeightsFormatVersion = 1;

// Layout (all integers u32 little-endian):
//   magic "LSWT", format_version, config JSON (length-prefixed),
//   tensor count, then per tensor: name (length-prefixed), rank, dims...,
//   values as little-endian float32.
// Values are stored in 32-bit precision.
std::string serialize_weights(const ModelWeights& model);

// Rebuilds the networks from the stored config and checks every tensor's
// name and shape against them. Throws BadWeights or InvalidConfig.
ModelWeights deserialize_weights(std::string_view bytes);

void save_weights(const ModelWeights& model, const std::filesystem::path& path);
ModelWeights load_weights(const std::filesystem::path& path);

}  // namespace layoutsearch
