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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "layoutsearch/corpus.hpp"
#include "layoutsearch/model.hpp"

namespace layoutsearch {

// sqrt(sum (a_i - b_i)^2), accumulated in double. Throws DimensionMismatch.
double euclidean(std::span<const float> a, std::span<const float> b);

struct Neighbor {
  std::string id;
  double distance = 0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Distances non-decreasing, ties by ascending id.
struct RankedResult {
  std::optional<std::string> query_id;
  std::vector<Neighbor> neighbors;
};

// id -> embedding store answering exact Euclidean top-K queries by linear
// scan. Entries keep insertion order; the index is read-only once frozen.
class EmbeddingIndex {
 public:
  explicit EmbeddingIndex(std::size_t dim);

  void add(std::string id, std::span<const float> vector);
  void freeze() noexcept { frozen_ = true; }
  bool frozen() const noexcept { return frozen_; }

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& id(std::size_t i) const { return ids_[i]; }
  std::span<const float> vector(std::size_t i) const;
  std::optional<std::size_t> find(std::string_view id) const;

  // Top-k by distance with ties broken by id; `exclude` is never returned.
  // Throws EmptyIndex, DimensionMismatch.
  RankedResult query(std::span<const float> z, std::size_t k,
                     std::optional<std::string_view> exclude = std::nullopt) const;

  friend bool operator==(const EmbeddingIndex& a, const EmbeddingIndex& b) {
    return a.dim_ == b.dim_ && a.ids_ == b.ids_ && a.data_ == b.data_ && a.frozen_ == b.frozen_;
  }

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> positions_;
  bool frozen_ = false;
};

// Embeds every layout in corpus order and freezes the result. Embedding
// failures are rethrown naming the offending id.
EmbeddingIndex build_index(const Corpus& corpus, const ModelWeights& model,
                           const EmbeddingScaling& scaling = {});

inline constexpr std::uint32_t kIndexFormatVersion = 1;

// Header: format_version u32, d u32, n u32; then n records of
// id length u32, id bytes, d float32 values. All little-endian.
std::string serialize_index(const EmbeddingIndex& index);
EmbeddingIndex deserialize_index(std::string_view bytes);

void save_index(const EmbeddingIndex& index, const std::filesystem::path& path);
EmbeddingIndex load_index(const std::filesystem::path& path);

}  // namespace layoutsearch
