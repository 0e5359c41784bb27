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
#include <map>
#include <string>
#include <vector>

#include "layoutsearch/layout.hpp"

namespace layoutsearch {

struct ParseFailure {
  std::filesystem::path file;
  std::string message;
};

struct Corpus {
  std::vector<AnnotatedLayout> layouts;
  std::string provenance;
  // Files skipped while loading.
  std::vector<ParseFailure> failures;

  const AnnotatedLayout* find(std::string_view id) const;
  std::map<std::string, std::string> categories() const;
};

// Parses every *.xml in `directory` in lexicographic filename order. Files
// that fail to parse (or repeat an earlier id) are recorded in
// Corpus::failures and skipped. Throws Io if the directory is unreadable.
Corpus load_corpus(const std::filesystem::path& directory);

struct SplitSpec {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
  std::uint64_t seed = 0;
};

// Seeded shuffle, then contiguous 80/10/10 partition: val and test get
// floor(n/10) each, train the remainder. Throws EmptyCorpus.
SplitSpec split_corpus(const Corpus& corpus, std::uint64_t seed);

// categories.csv: header "id,category", one row per layout, LF endings.
std::map<std::string, std::string> read_categories(const std::filesystem::path& csv);
void write_categories(const Corpus& corpus, const std::filesystem::path& csv);
// Sets AnnotatedLayout::category for every id present in `categories`.
void apply_categories(Corpus& corpus, const std::map<std::string, std::string>& categories);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace layoutsearch
