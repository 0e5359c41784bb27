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

#include <stdexcept>
#include <string>

namespace layoutsearch {

enum class ErrorKind {
  EmptyCanvas,
  DegenerateBox,
  MalformedXml,
  MalformedJson,
  UnknownClass,
  MissingField,
  Io,
  EmptyCorpus,
  EmptyResolution,
  NonDivisibleResolution,
  ShapeMismatch,
  OddSpatialDim,
  ResolutionMismatch,
  InvalidConfig,
  EmptySplit,
  DivergedLoss,
  BadWeights,
  BadIndex,
  DimensionMismatch,
  EmptyIndex,
  UnknownId,
  MissingConfidence,
  NoGroundTruth,
  EmptyInput,
  EmptyTestSet,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library. `subject` carries the offending
// value where one exists (a class name, an element index, a field path).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string subject = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorKind kind_;
  std::string subject_;
};

}  // namespace layoutsearch
