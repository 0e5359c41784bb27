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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "layoutsearch/corpus.hpp"

namespace layoutsearch {

struct FractionRange {
  double lo = 0;
  double hi = 0;
};

// How the instances of a repeated slot share its centre range.
enum class Arrangement { Free, Vertical, Horizontal };

// One kind of component in a template. Ranges are fractions of the canvas;
// centre ranges bound where a realized box centre may fall.
struct SlotSpec {
  ComponentClass cls = ComponentClass::Text;
  FractionRange center_x;
  FractionRange center_y;
  FractionRange width;
  FractionRange height;
  double presence = 1.0;
  int min_count = 1;
  int max_count = 1;
  Arrangement arrangement = Arrangement::Free;
};

struct TemplateSpec {
  std::string category;
  std::vector<SlotSpec> slots;

  // Throws InvalidConfig if a range leaves [0,1] or a probability is invalid.
  void validate() const;
};

struct GeneratorConfig {
  std::uint64_t seed = 7;
  int per_category = 50;
  int width = 360;
  int height = 640;
};

// login, login_with_background, onboarding, grid, list, sliding_menu.
const std::vector<TemplateSpec>& builtin_templates();

// Category-labelled corpus sorted by id ("<category>_<index:04>"). Every
// layout gets its own sub-seed derived from (seed, template, index).
Corpus generate(const GeneratorConfig& config);
Corpus generate(const GeneratorConfig& config, std::span<const TemplateSpec> templates);

// One VOC XML per layout ("<id>.xml") plus categories.csv. Creates the
// directory if needed. Throws Io.
void export_corpus(const Corpus& corpus, const std::filesystem::path& directory);

}  // namespace layoutsearch
