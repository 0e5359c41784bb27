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

#include "layoutsearch/voc.hpp"

#include <cmath>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "layoutsearch/errors.hpp"

namespace layoutsearch {

namespace pt = boost::property_tree;

namespace {

std::string required_text(const pt::ptree& node, const std::string& path, const std::string& where) {
  const auto child = node.get_child_optional(path);
  if (!child) throw Error(ErrorKind::MissingField, "missing " + where + path, where + path);
  return child->get_value<std::string>();
}

double required_number(const pt::ptree& node, const std::string& path, const std::string& where) {
  const std::string text = required_text(node, path, where);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::MalformedXml, "non-numeric value '" + text + "' at " + where + path,
                where + path);
  }
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Integer pixel span [lo, hi) that stays non-empty and inside [0, extent].
std::pair<long long, long long> integer_span(double lo, double hi, int extent) {
  long long a = std::llround(lo);
  long long b = std::llround(hi);
  if (b <= a) {
    if (a < extent) {
      b = a + 1;
    } else {
      a = b - 1;
    }
  }
  return {a, b};
}

const nlohmann::json& json_field(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorKind::MissingField, "missing " + where + key, where + key);
  return *it;
}

}  // namespace

AnnotatedLayout parse_voc(std::string_view xml) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorKind::MalformedXml, e.what());
  }
  const auto root = tree.get_child_optional("annotation");
  if (!root) throw Error(ErrorKind::MissingField, "missing annotation root", "annotation");

  AnnotatedLayout layout;
  layout.id = required_text(*root, "filename", "annotation/");
  const double width = required_number(*root, "size.width", "annotation/");
  const double height = required_number(*root, "size.height", "annotation/");
  layout.width = static_cast<int>(std::lround(width));
  layout.height = static_cast<int>(std::lround(height));

  std::size_t index = 0;
  for (const auto& [key, node] : *root) {
    if (key != "object") continue;
    const std::string where = "annotation/object[" + std::to_string(index++) + "]/";
    const std::string name = required_text(node, "name", where);
    const auto cls = class_from_name(name);
    if (!cls) throw Error(ErrorKind::UnknownClass, "unknown component class '" + name + "'", name);
    LayoutElement e;
    e.cls = *cls;
    e.box.x_min = required_number(node, "bndbox.xmin", where);
    e.box.y_min = required_number(node, "bndbox.ymin", where);
    e.box.x_max = required_number(node, "bndbox.xmax", where);
    e.box.y_max = required_number(node, "bndbox.ymax", where);
    layout.elements.push_back(e);
  }
  return validate_layout(std::move(layout));
}

std::string write_voc(const AnnotatedLayout& layout) {
  std::ostringstream out;
  out << "<annotation>\n";
  out << "\t<filename>" << escape_xml(layout.id) << "</filename>\n";
  out << "\t<size>\n";
  out << "\t\t<width>" << layout.width << "</width>\n";
  out << "\t\t<height>" << layout.height << "</height>\n";
  out << "\t\t<depth>3</depth>\n";
  out << "\t</size>\n";
  for (const auto& e : layout.elements) {
    const auto [x0, x1] = integer_span(e.box.x_min, e.box.x_max, layout.width);
    const auto [y0, y1] = integer_span(e.box.y_min, e.box.y_max, layout.height);
    out << "\t<object>\n";
    out << "\t\t<name>" << class_name(e.cls) << "</name>\n";
    out << "\t\t<bndbox>\n";
    out << "\t\t\t<xmin>" << x0 << "</xmin>\n";
    out << "\t\t\t<ymin>" << y0 << "</ymin>\n";
    out << "\t\t\t<xmax>" << x1 << "</xmax>\n";
    out << "\t\t\t<ymax>" << y1 << "</ymax>\n";
    out << "\t\t</bndbox>\n";
    out << "\t</object>\n";
  }
  out << "</annotation>\n";
  return out.str();
}

AnnotatedLayout layout_from_json(const nlohmann::json& doc, ConfidencePolicy policy) {
  if (!doc.is_object()) throw Error(ErrorKind::MalformedJson, "layout document must be an object");
  AnnotatedLayout layout;
  try {
    if (policy == ConfidencePolicy::Required) {
      layout.id = json_field(doc, "id", "").get<std::string>();
    } else if (doc.contains("id")) {
      layout.id = doc.at("id").get<std::string>();
    }
    layout.width = json_field(doc, "width", "").get<int>();
    layout.height = json_field(doc, "height", "").get<int>();
    const auto& detections = json_field(doc, "detections", "");
    if (!detections.is_array()) throw Error(ErrorKind::MalformedJson, "detections must be an array");
    std::size_t index = 0;
    for (const auto& d : detections) {
      const std::string where = "detections[" + std::to_string(index++) + "]/";
      if (!d.is_object()) throw Error(ErrorKind::MalformedJson, where + " must be an object");
      const std::string name = json_field(d, "class", where).get<std::string>();
      const auto cls = class_from_name(name);
      if (!cls) throw Error(ErrorKind::UnknownClass, "unknown component class '" + name + "'", name);
      const auto& box = json_field(d, "box", where);
      if (!box.is_array() || box.size() != 4) {
        throw Error(ErrorKind::MalformedJson, where + "box must be [xmin,ymin,xmax,ymax]");
      }
      LayoutElement e;
      e.cls = *cls;
      e.box = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(), box[3].get<double>()};
      if (d.contains("confidence")) {
        const double c = d.at("confidence").get<double>();
        if (!(c >= 0.0 && c <= 1.0)) {
          throw Error(ErrorKind::MalformedJson, where + "confidence outside [0,1]");
        }
        e.confidence = c;
      } else if (policy == ConfidencePolicy::Required) {
        throw Error(ErrorKind::MissingField, "missing " + where + "confidence", where + "confidence");
      }
      layout.elements.push_back(e);
    }
    if (doc.contains("category") && doc.at("category").is_string()) {
      layout.category = doc.at("category").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedJson, e.what());
  }
  return layout;
}

AnnotatedLayout parse_detections(std::string_view json, double confidence_threshold) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::MalformedJson, e.what());
  }
  AnnotatedLayout layout = layout_from_json(doc, ConfidencePolicy::Required);
  std::erase_if(layout.elements,
                [&](const LayoutElement& e) { return *e.confidence < confidence_threshold; });
  return validate_layout(std::move(layout));
}

nlohmann::json layout_to_json(const AnnotatedLayout& layout) {
  nlohmann::json detections = nlohmann::json::array();
  for (const auto& e : layout.elements) {
    nlohmann::json d = {
        {"class", std::string(class_name(e.cls))},
        {"box", {e.box.x_min, e.box.y_min, e.box.x_max, e.box.y_max}},
    };
    if (e.confidence) d["confidence"] = *e.confidence;
    detections.push_back(std::move(d));
  }
  nlohmann::json doc = {{"id", layout.id},
                        {"width", layout.width},
                        {"height", layout.height},
                        {"detections", std::move(detections)}};
  if (layout.category) doc["category"] = *layout.category;
  return doc;
}

}  // namespace layoutsearch
