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

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "layoutsearch/layout.hpp"
#include "layoutsearch/model.hpp"
#include "layoutsearch/retrieval.hpp"

namespace layoutsearch {

// ---- Detection ------------------------------------------------------------

inline constexpr double kDefaultIouThreshold = 0.5;

double iou(const BoundingBox& a, const BoundingBox& b);

enum class Verdict { TruePositive, FalsePositive };

struct PredictionVerdict {
  std::size_t prediction = 0;  // index into the input predictions
  double confidence = 0;
  Verdict verdict = Verdict::FalsePositive;
  std::optional<std::size_t> matched_ground_truth;
};

struct DetectionMatchReport {
  // In processing order: descending confidence, ties by input order.
  std::vector<PredictionVerdict> verdicts;
  std::size_t ground_truth_count = 0;
  std::size_t false_negatives = 0;

  std::size_t true_positives() const;
  std::size_t false_positives() const;
};

// Greedy one-to-one matching for a single class: each prediction takes the
// highest-IoU unmatched ground truth with IoU >= threshold.
// Throws MissingConfidence.
DetectionMatchReport match_detections(std::span<const LayoutElement> predictions,
                                      std::span<const LayoutElement> ground_truth,
                                      double iou_threshold = kDefaultIouThreshold);

struct PrPoint {
  double recall = 0;
  double precision = 0;
};

struct ApResult {
  double ap = 0;   // area under the monotone precision envelope (all points)
  double auc = 0;  // trapezoidal area under the raw PR points
  std::vector<PrPoint> curve;
};

// Pools the verdicts of every image for one class. Throws NoGroundTruth.
ApResult average_precision(std::span<const DetectionMatchReport> reports);

// Unweighted mean. Throws EmptyInput.
double mean_ap(const std::map<ComponentClass, double>& per_class);

struct ClassDetectionResult {
  ComponentClass cls;
  ApResult result;
};

struct DetectionReport {
  std::vector<ClassDetectionResult> classes;  // classes with ground truth, by code
  double map = 0;
  double mean_auc = 0;

  std::string to_csv() const;    // class,AP,AUC then a final mAP row
  std::string to_table() const;
};

struct ImagePair {
  AnnotatedLayout ground_truth;
  AnnotatedLayout predictions;
};

// Per-class AP/AUC over a test set plus mAP. Classes without ground truth
// are skipped. Throws EmptyInput if no class has ground truth.
DetectionReport evaluate_detections(std::span<const ImagePair> images,
                                    double iou_threshold = kDefaultIouThreshold);

// ---- Retrieval ------------------------------------------------------------

// Matches among the first min(k, available) neighbours, divided by that count.
// Throws UnknownId if a neighbour has no category.
double precision_at_k(const RankedResult& result, const std::map<std::string, std::string>& categories,
                      const std::string& query_category, std::size_t k);

inline constexpr std::array<std::size_t, 6> kReportedK = {1, 2, 4, 6, 8, 10};

struct RetrievalReport {
  std::vector<std::size_t> ks;
  std::vector<double> precision;  // parallel to ks
  std::size_t queries = 0;

  double at(std::size_t k) const;
  std::string to_csv() const;  // K,precision
  std::string to_table() const;
};

struct RetrievalEvalOptions {
  std::size_t k_max = 10;
  // Categories with fewer labelled index entries are not queried.
  std::size_t min_group_size = 10;
};

// Queries every test layout (self excluded) whose category is eligible and
// averages precision@K for each reported K <= k_max. `categories` labels the
// index entries. Throws EmptyTestSet.
RetrievalReport eval_retrieval(const EmbeddingIndex& index, const ModelWeights& model,
                               std::span<const AnnotatedLayout> test_layouts,
                               const std::map<std::string, std::string>& categories,
                               const RetrievalEvalOptions& options = {});

}  // namespace layoutsearch
