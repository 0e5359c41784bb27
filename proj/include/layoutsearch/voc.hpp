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

#include <string>
#include <string_view>

#include "json.hpp"

#include "layoutsearch/layout.hpp"

namespace layoutsearch {

// Pascal-VOC annotation:
//   annotation/{filename, size/{width,height}, object*/{name, bndbox/{xmin,ymin,xmax,ymax}}}
// `filename` becomes the layout id verbatim. The result is validated.
AnnotatedLayout parse_voc(std::string_view xml);

// Canonical VOC document with integer coordinates, elements in order.
std::string write_voc(const AnnotatedLayout& layout);

// Detector output document:
//   {"id": str, "width": int, "height": int,
//    "detections": [{"class": str, "box": [xmin,ymin,xmax,ymax], "confidence": num}]}
// Detections below `confidence_threshold` are dropped.
AnnotatedLayout parse_detections(std::string_view json, double confidence_threshold);

enum class ConfidencePolicy { Required, Optional };

// Same schema as parse_detections, from an already parsed value. With
// ConfidencePolicy::Optional a missing confidence leaves the element as
// ground truth; "id" may then be absent too.
AnnotatedLayout layout_from_json(const nlohmann::json& doc, ConfidencePolicy policy);

nlohmann::json layout_to_json(const AnnotatedLayout& layout);

}  // namespace layoutsearch
