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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace layoutsearch {

// UI component taxonomy. The integer codes are stable and used by every file
// format; do not reorder.
enum class ComponentClass : std::uint8_t {
  BackgroundImage = 0,
  CheckedView = 1,
  Icon = 2,
  InputField = 3,
  Image = 4,
  Text = 5,
  TextButton = 6,
  PageIndicator = 7,
  PopUpWindow = 8,
  SlidingMenu = 9,
  Switch = 10,
  UpperTaskBar = 11,
};

inline constexpr std::size_t kNumClasses = 12;
// Classes 0..10 form the label set; UpperTaskBar is rasterized but not labeled.
inline constexpr std::size_t kNumLabelClasses = 11;

const std::array<ComponentClass, kNumClasses>& all_classes();

constexpr int class_code(ComponentClass cls) { return static_cast<int>(cls); }
std::optional<ComponentClass> class_from_code(int code);

// Lowercase snake_case name, e.g. "text_button".
std::string_view class_name(ComponentClass cls);

// Accepts the canonical names plus CamelCase / spaced spellings
// ("TextButton", "Text Button") and a few common dataset aliases.
std::optional<ComponentClass> class_from_name(std::string_view name);

constexpr bool in_label_set(ComponentClass cls) { return cls != ComponentClass::UpperTaskBar; }

struct BoundingBox {
  double x_min = 0;
  double y_min = 0;
  double x_max = 0;
  double y_max = 0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct LayoutElement {
  ComponentClass cls = ComponentClass::Text;
  BoundingBox box;
  // Present for detector outputs, absent for ground truth.
  std::optional<double> confidence;

  friend bool operator==(const LayoutElement&, const LayoutElement&) = default;
};

struct AnnotatedLayout {
  std::string id;
  int width = 0;
  int height = 0;
  std::vector<LayoutElement> elements;
  std::optional<std::string> category;

  friend bool operator==(const AnnotatedLayout&, const AnnotatedLayout&) = default;
};

using LabelVector = std::array<double, kNumLabelClasses>;

// Clamps every box to the canvas. Throws EmptyCanvas for a non-positive
// canvas and DegenerateBox (subject = element index) for non-finite or
// zero-area boxes.
AnnotatedLayout validate_layout(AnnotatedLayout layout);

// Position i is 1 iff some element with class code i is present.
LabelVector multi_hot(const AnnotatedLayout& layout);

AnnotatedLayout scale_layout(const AnnotatedLayout& layout, int target_width, int target_height);

}  // namespace layoutsearch
