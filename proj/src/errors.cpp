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

#include "layoutsearch/errors.hpp"

namespace layoutsearch {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyCanvas: return "EmptyCanvas";
    case ErrorKind::DegenerateBox: return "DegenerateBox";
    case ErrorKind::MalformedXml: return "MalformedXml";
    case ErrorKind::MalformedJson: return "MalformedJson";
    case ErrorKind::UnknownClass: return "UnknownClass";
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::EmptyResolution: return "EmptyResolution";
    case ErrorKind::NonDivisibleResolution: return "NonDivisibleResolution";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::OddSpatialDim: return "OddSpatialDim";
    case ErrorKind::ResolutionMismatch: return "ResolutionMismatch";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::EmptySplit: return "EmptySplit";
    case ErrorKind::DivergedLoss: return "DivergedLoss";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptyIndex: return "EmptyIndex";
    case ErrorKind::UnknownId: return "UnknownId";
    case ErrorKind::MissingConfidence: return "MissingConfidence";
    case ErrorKind::NoGroundTruth: return "NoGroundTruth";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::EmptyTestSet: return "EmptyTestSet";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::string subject)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      subject_(std::move(subject)) {}

}  // namespace layoutsearch
