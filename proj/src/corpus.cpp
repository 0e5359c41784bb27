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

#include "layoutsearch/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "layoutsearch/errors.hpp"
#include "layoutsearch/random.hpp"
#include "layoutsearch/voc.hpp"

namespace layoutsearch {

namespace fs = std::filesystem;

const AnnotatedLayout* Corpus::find(std::string_view id) const {
  for (const auto& layout : layouts) {
    if (layout.id == id) return &layout;
  }
  return nullptr;
}

std::map<std::string, std::string> Corpus::categories() const {
  std::map<std::string, std::string> out;
  for (const auto& layout : layouts) {
    if (layout.category) out.emplace(layout.id, *layout.category);
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string(), path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "read failed for " + path.string(), path.string());
  return buf.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string(), path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string(), path.string());
}

Corpus load_corpus(const fs::path& directory) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    throw Error(ErrorKind::Io, "not a directory: " + directory.string(), directory.string());
  }
  std::vector<fs::path> files;
  for (fs::directory_iterator it(directory, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".xml") files.push_back(it->path());
  }
  if (ec) throw Error(ErrorKind::Io, "cannot list " + directory.string() + ": " + ec.message());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

  Corpus corpus;
  corpus.provenance = directory.string();
  std::set<std::string> seen;
  for (const auto& file : files) {
    try {
      AnnotatedLayout layout = parse_voc(read_file(file));
      if (!seen.insert(layout.id).second) {
        corpus.failures.push_back({file, "duplicate id '" + layout.id + "'"});
        continue;
      }
      corpus.layouts.push_back(std::move(layout));
    } catch (const Error& e) {
      corpus.failures.push_back({file, e.what()});
    }
  }
  return corpus;
}

SplitSpec split_corpus(const Corpus& corpus, std::uint64_t seed) {
  if (corpus.layouts.empty()) throw Error(ErrorKind::EmptyCorpus, "cannot split an empty corpus");
  std::vector<std::string> ids;
  ids.reserve(corpus.layouts.size());
  for (const auto& layout : corpus.layouts) ids.push_back(layout.id);
  Rng rng(derive_seed(seed, 0x5EED5EEDULL));
  rng.shuffle(std::span<std::string>(ids));

  const std::size_t n = ids.size();
  const std::size_t n_val = n / 10;
  const std::size_t n_test = n / 10;
  const std::size_t n_train = n - n_val - n_test;

  SplitSpec split;
  split.seed = seed;
  split.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.val.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train),
                   ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  split.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), ids.end());
  return split;
}

std::map<std::string, std::string> read_categories(const fs::path& csv) {
  std::istringstream in(read_file(csv));
  std::string line;
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "id,category") {
        throw Error(ErrorKind::MissingField, csv.string() + ": expected header 'id,category'", "id,category");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::MissingField,
                  csv.string() + ":" + std::to_string(line_no) + ": expected 'id,category'");
    }
    out[line.substr(0, comma)] = line.substr(comma + 1);
  }
  if (line_no == 0) throw Error(ErrorKind::MissingField, csv.string() + ": empty file", "id,category");
  return out;
}

void write_categories(const Corpus& corpus, const fs::path& csv) {
  std::string text = "id,category\n";
  for (const auto& layout : corpus.layouts) {
    text += layout.id;
    text += ',';
    text += layout.category.value_or("");
    text += '\n';
  }
  write_file(csv, text);
}

void apply_categories(Corpus& corpus, const std::map<std::string, std::string>& categories) {
  for (auto& layout : corpus.layouts) {
    const auto it = categories.find(layout.id);
    if (it != categories.end() && !it->second.empty()) layout.category = it->second;
  }
}

}  // namespace layoutsearch
