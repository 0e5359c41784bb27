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

#include "layoutsearch/layout.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "layoutsearch/errors.hpp"

namespace layoutsearch {

namespace {

constexpr std::array<std::string_view, kNumClasses> kNames = {
    "background_image", "checked_view",   "icon",          "input_field",
    "image",            "text",           "text_button",   "page_indicator",
    "pop_up_window",    "sliding_menu",   "switch",        "upper_task_bar",
};

struct Alias {
  std::string_view key;
  ComponentClass cls;
};

// Keys are in normalized form (lowercase, no separators).
constexpr std::array<Alias, 9> kAliases = {{
    {"checkedtextview", ComponentClass::CheckedView},
    {"checkbox", ComponentClass::CheckedView},
    {"radiobutton", ComponentClass::CheckedView},
    {"edittext", ComponentClass::InputField},
    {"drawer", ComponentClass::SlidingMenu},
    {"modal", ComponentClass::PopUpWindow},
    {"popupwindow", ComponentClass::PopUpWindow},
    {"switchmain", ComponentClass::Switch},
    {"statusbar", ComponentClass::UpperTaskBar},
}};

std::string normalize(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

const std::array<ComponentClass, kNumClasses>& all_classes() {
  static const std::array<ComponentClass, kNumClasses> classes = [] {
    std::array<ComponentClass, kNumClasses> out{};
    for (std::size_t i = 0; i < kNumClasses; ++i) out[i] = static_cast<ComponentClass>(i);
    return out;
  }();
  return classes;
}

std::optional<ComponentClass> class_from_code(int code) {
  if (code < 0 || code >= static_cast<int>(kNumClasses)) return std::nullopt;
  return static_cast<ComponentClass>(code);
}

std::string_view class_name(ComponentClass cls) { return kNames[static_cast<std::size_t>(cls)]; }

std::optional<ComponentClass> class_from_name(std::string_view name) {
  const std::string key = normalize(name);
  if (key.empty()) return std::nullopt;
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    if (normalize(kNames[i]) == key) return static_cast<ComponentClass>(i);
  }
  for (const auto& alias : kAliases) {
    if (alias.key == key) return alias.cls;
  }
  return std::nullopt;
}

AnnotatedLayout validate_layout(AnnotatedLayout layout) {
  if (layout.width <= 0 || layout.height <= 0) {
    throw Error(ErrorKind::EmptyCanvas,
                "layout '" + layout.id + "' has canvas " + std::to_string(layout.width) + "x" +
                    std::to_string(layout.height));
  }
  const double w = layout.width;
  const double h = layout.height;
  for (std::size_t i = 0; i < layout.elements.size(); ++i) {
    BoundingBox& b = layout.elements[i].box;
    const bool finite = std::isfinite(b.x_min) && std::isfinite(b.y_min) &&
                        std::isfinite(b.x_max) && std::isfinite(b.y_max);
    if (finite) {
      b.x_min = std::clamp(b.x_min, 0.0, w);
      b.x_max = std::clamp(b.x_max, 0.0, w);
      b.y_min = std::clamp(b.y_min, 0.0, h);
      b.y_max = std::clamp(b.y_max, 0.0, h);
    }
    if (!finite || !(b.x_min < b.x_max) || !(b.y_min < b.y_max)) {
      throw Error(ErrorKind::DegenerateBox,
                  "element " + std::to_string(i) + " of layout '" + layout.id +
                      "' has zero area after clamping",
                  std::to_string(i));
    }
  }
  return layout;
}

LabelVector multi_hot(const AnnotatedLayout& layout) {
  LabelVector v{};
  for (const auto& e : layout.elements) {
    if (in_label_set(e.cls)) v[static_cast<std::size_t>(e.cls)] = 1.0;
  }
  return v;
}

AnnotatedLayout scale_layout(const AnnotatedLayout& layout, int target_width, int target_height) {
  if (target_width <= 0 || target_height <= 0) {
    throw Error(ErrorKind::EmptyCanvas, "scale target " + std::to_string(target_width) + "x" +
                                            std::to_string(target_height));
  }
  if (layout.width <= 0 || layout.height <= 0) {
    throw Error(ErrorKind::EmptyCanvas, "layout '" + layout.id + "' has an empty canvas");
  }
  AnnotatedLayout out = layout;
  const double sx = static_cast<double>(target_width) / layout.width;
  const double sy = static_cast<double>(target_height) / layout.height;
  for (auto& e : out.elements) {
    e.box.x_min *= sx;
    e.box.x_max *= sx;
    e.box.y_min *= sy;
    e.box.y_max *= sy;
  }
  out.width = target_width;
  out.height = target_height;
  return out;
}

}  // namespace layoutsearch
