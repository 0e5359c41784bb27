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

#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>

#include "layoutsearch/errors.hpp"
#include "layoutsearch/layout.hpp"
#include "layoutsearch/tensor.hpp"

namespace layoutsearch::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("layoutsearch_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline LayoutElement element(ComponentClass cls, double x0, double y0, double x1, double y1) {
  return {cls, {x0, y0, x1, y1}, std::nullopt};
}

inline AnnotatedLayout make_layout(std::string id, int width, int height,
                                   std::initializer_list<LayoutElement> elements) {
  return {std::move(id), width, height, elements, std::nullopt};
}

inline Tensor tensor(std::vector<std::size_t> shape, std::initializer_list<double> values) {
  return Tensor(std::move(shape), std::vector<double>(values));
}

// Runs `fn` and returns the ErrorKind it threw; fails the test otherwise.
template <typename Fn>
ErrorKind error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected layoutsearch::Error";
  return ErrorKind::Io;
}

}  // namespace layoutsearch::testing
