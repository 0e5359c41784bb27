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

#include "layoutsearch/retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "binary_io.hpp"
#include "layoutsearch/errors.hpp"
#include "layoutsearch/kernels.hpp"

namespace layoutsearch {

double euclidean(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "vectors of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

EmbeddingIndex::EmbeddingIndex(std::size_t dim) : dim_(dim) {}

void EmbeddingIndex::add(std::string id, std::span<const float> vector) {
  if (frozen_) throw Error(ErrorKind::BadIndex, "cannot add '" + id + "' to a frozen index", id);
  if (vector.size() != dim_) {
    throw Error(ErrorKind::DimensionMismatch, "'" + id + "' has dimension " + std::to_string(vector.size()) +
                                                  ", index dimension is " + std::to_string(dim_));
  }
  if (positions_.count(id)) throw Error(ErrorKind::BadIndex, "duplicate id '" + id + "'", id);
  positions_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  data_.insert(data_.end(), vector.begin(), vector.end());
}

std::span<const float> EmbeddingIndex::vector(std::size_t i) const {
  return std::span<const float>(data_).subspan(i * dim_, dim_);
}

std::optional<std::size_t> EmbeddingIndex::find(std::string_view id) const {
  const auto it = positions_.find(std::string(id));
  if (it == positions_.end()) return std::nullopt;
  return it->second;
}

RankedResult EmbeddingIndex::query(std::span<const float> z, std::size_t k,
                                   std::optional<std::string_view> exclude) const {
  if (ids_.empty()) throw Error(ErrorKind::EmptyIndex, "query against an empty index");
  if (z.size() != dim_) {
    throw Error(ErrorKind::DimensionMismatch, "query has dimension " + std::to_string(z.size()) +
                                                  ", index dimension is " + std::to_string(dim_));
  }
  std::vector<double> squared(ids_.size());
  kernels::parallel::squared_distances(data_, dim_, z, squared);

  std::vector<std::size_t> candidates;
  candidates.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (exclude && ids_[i] == *exclude) continue;
    candidates.push_back(i);
  }
  std::vector<double> distance(ids_.size());
  for (std::size_t i : candidates) distance[i] = std::sqrt(squared[i]);
  const auto before = [&](std::size_t a, std::size_t b) {
    if (distance[a] != distance[b]) return distance[a] < distance[b];
    return ids_[a] < ids_[b];
  };
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take), candidates.end(),
                    before);

  RankedResult result;
  result.neighbors.reserve(take);
  for (std::size_t r = 0; r < take; ++r) {
    result.neighbors.push_back({ids_[candidates[r]], distance[candidates[r]]});
  }
  return result;
}

EmbeddingIndex build_index(const Corpus& corpus, const ModelWeights& model, const EmbeddingScaling& scaling) {
  const std::size_t dim = embedding_size(model.image.config());
  const std::size_t n = corpus.layouts.size();
  std::vector<EmbeddingVector> vectors(n);
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      vectors[k] = embed(model, corpus.layouts[k], scaling);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  EmbeddingIndex index(dim);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& id = corpus.layouts[i].id;
    if (!errors[i].empty()) {
      throw Error(ErrorKind::BadIndex, "embedding '" + id + "' failed: " + errors[i], id);
    }
    index.add(id, vectors[i]);
  }
  index.freeze();
  return index;
}

std::string serialize_index(const EmbeddingIndex& index) {
  detail::ByteWriter w;
  w.u32(kIndexFormatVersion);
  w.u32(static_cast<std::uint32_t>(index.dim()));
  w.u32(static_cast<std::uint32_t>(index.size()));
  for (std::size_t i = 0; i < index.size(); ++i) {
    w.string(index.id(i));
    for (float v : index.vector(i)) w.f32(v);
  }
  return w.str();
}

EmbeddingIndex deserialize_index(std::string_view bytes) {
  detail::ByteReader r(bytes, ErrorKind::BadIndex);
  const std::uint32_t version = r.u32();
  if (version != kIndexFormatVersion) {
    throw Error(ErrorKind::BadIndex, "unsupported index format version " + std::to_string(version));
  }
  const std::uint32_t dim = r.u32();
  const std::uint32_t n = r.u32();
  // Each record needs at least 4 + 4*dim bytes; reject absurd headers early.
  if (static_cast<std::uint64_t>(n) * (4 + 4ULL * dim) > r.remaining()) {
    throw Error(ErrorKind::BadIndex, "header claims more records than the file holds");
  }
  EmbeddingIndex index(dim);
  std::vector<float> row(dim);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string id = r.string();
    for (auto& v : row) v = r.f32();
    index.add(std::move(id), row);
  }
  if (!r.at_end()) throw Error(ErrorKind::BadIndex, std::to_string(r.remaining()) + " trailing bytes");
  index.freeze();
  return index;
}

void save_index(const EmbeddingIndex& index, const std::filesystem::path& path) {
  write_file(path, serialize_index(index));
}

EmbeddingIndex load_index(const std::filesystem::path& path) { return deserialize_index(read_file(path)); }

}  // namespace layoutsearch
