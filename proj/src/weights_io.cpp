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

#include "layoutsearch/weights_io.hpp"

#include "binary_io.hpp"
#include "layoutsearch/corpus.hpp"
#include "layoutsearch/errors.hpp"

namespace layoutsearch {

namespace {

constexpr std::string_view kMagic = "LSWT";

std::vector<const Parameter*> all_parameters(const ModelWeights& model) {
  auto params = model.image.parameters();
  for (const Parameter* p : model.label.parameters()) params.push_back(p);
  return params;
}

std::vector<Parameter*> all_parameters(ModelWeights& model) {
  auto params = model.image.parameters();
  for (Parameter* p : model.label.parameters()) params.push_back(p);
  return params;
}

}  // namespace

std::string serialize_weights(const ModelWeights& model) {
  detail::ByteWriter w;
  w.bytes(kMagic);
  w.u32(kWeightsFormatVersion);
  w.string(model.image.config().to_json().dump());
  const auto params = all_parameters(model);
  w.u32(static_cast<std::uint32_t>(params.size()));
  for (const Parameter* p : params) {
    w.string(p->name);
    w.u32(static_cast<std::uint32_t>(p->value.rank()));
    for (std::size_t d : p->value.shape()) w.u32(static_cast<std::uint32_t>(d));
    for (double v : p->value.data()) w.f32(static_cast<float>(v));
  }
  return w.str();
}

ModelWeights deserialize_weights(std::string_view bytes) {
  detail::ByteReader r(bytes, ErrorKind::BadWeights);
  if (r.bytes(kMagic.size()) != kMagic) throw Error(ErrorKind::BadWeights, "not a weights file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kWeightsFormatVersion) {
    throw Error(ErrorKind::BadWeights, "unsupported weights format version " + std::to_string(version));
  }
  nlohmann::json config_json;
  try {
    config_json = nlohmann::json::parse(r.string());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadWeights, std::string("config header: ") + e.what());
  }
  ModelWeights model = initialize_model(AutoencoderConfig::from_json(config_json));
  auto params = all_parameters(model);
  const std::uint32_t count = r.u32();
  if (count != params.size()) {
    throw Error(ErrorKind::BadWeights, "expected " + std::to_string(params.size()) + " tensors, file has " +
                                           std::to_string(count));
  }
  for (Parameter* p : params) {
    const std::string name = r.string();
    if (name != p->name) throw Error(ErrorKind::BadWeights, "expected tensor '" + p->name + "', found '" + name + "'");
    const std::uint32_t rank = r.u32();
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) d = r.u32();
    if (shape != p->value.shape()) {
      throw Error(ErrorKind::BadWeights, "tensor '" + name + "' has shape " + shape_string(shape) + ", model expects " +
                                             shape_string(p->value.shape()));
    }
    for (double& v : p->value.data()) v = static_cast<double>(r.f32());
  }
  if (!r.at_end()) throw Error(ErrorKind::BadWeights, std::to_string(r.remaining()) + " trailing bytes");
  return model;
}

void save_weights(const ModelWeights& model, const std::filesystem::path& path) {
  write_file(path, serialize_weights(model));
}

ModelWeights load_weights(const std::filesystem::path& path) { return deserialize_weights(read_file(path)); }

}  // namespace layoutsearch
