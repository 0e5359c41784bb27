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

#include "layoutsearch/metrics.hpp"

#include <algorithm>
#include <exception>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "layoutsearch/errors.hpp"

namespace layoutsearch {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

std::size_t DetectionMatchReport::true_positives() const {
  return static_cast<std::size_t>(std::count_if(verdicts.begin(), verdicts.end(), [](const auto& v) {
    return v.verdict == Verdict::TruePositive;
  }));
}

std::size_t DetectionMatchReport::false_positives() const { return verdicts.size() - true_positives(); }

DetectionMatchReport match_detections(std::span<const LayoutElement> predictions,
                                      std::span<const LayoutElement> ground_truth, double iou_threshold) {
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (!predictions[i].confidence) {
      throw Error(ErrorKind::MissingConfidence, "prediction " + std::to_string(i) + " has no confidence",
                  std::to_string(i));
    }
  }
  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return *predictions[a].confidence > *predictions[b].confidence;
  });

  DetectionMatchReport report;
  report.ground_truth_count = ground_truth.size();
  std::vector<bool> taken(ground_truth.size(), false);
  for (std::size_t p : order) {
    PredictionVerdict v;
    v.prediction = p;
    v.confidence = *predictions[p].confidence;
    double best = -1;
    std::optional<std::size_t> best_gt;
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      if (taken[g]) continue;
      const double o = iou(predictions[p].box, ground_truth[g].box);
      if (o >= iou_threshold && o > best) {
        best = o;
        best_gt = g;
      }
    }
    if (best_gt) {
      taken[*best_gt] = true;
      v.verdict = Verdict::TruePositive;
      v.matched_ground_truth = best_gt;
    }
    report.verdicts.push_back(v);
  }
  report.false_negatives = report.ground_truth_count - report.true_positives();
  return report;
}

ApResult average_precision(std::span<const DetectionMatchReport> reports) {
  std::size_t total_gt = 0;
  struct Pooled {
    double confidence;
    bool tp;
  };
  std::vector<Pooled> pooled;
  for (const auto& r : reports) {
    total_gt += r.ground_truth_count;
    for (const auto& v : r.verdicts) pooled.push_back({v.confidence, v.verdict == Verdict::TruePositive});
  }
  if (total_gt == 0) throw Error(ErrorKind::NoGroundTruth, "no ground-truth instances for this class");
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const Pooled& a, const Pooled& b) { return a.confidence > b.confidence; });

  ApResult out;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    if (pooled[i].tp) ++tp;
    out.curve.push_back({static_cast<double>(tp) / static_cast<double>(total_gt),
                         static_cast<double>(tp) / static_cast<double>(i + 1)});
  }
  if (out.curve.empty()) return out;

  // All-point interpolation over the precision envelope.
  std::vector<double> recall{0.0}, precision{0.0};
  for (const auto& p : out.curve) {
    recall.push_back(p.recall);
    precision.push_back(p.precision);
  }
  recall.push_back(1.0);
  precision.push_back(0.0);
  for (std::size_t i = precision.size() - 1; i-- > 0;) precision[i] = std::max(precision[i], precision[i + 1]);
  for (std::size_t i = 1; i < recall.size(); ++i) out.ap += (recall[i] - recall[i - 1]) * precision[i];

  // Trapezoids over the raw points, anchored at recall 0 with the first precision.
  PrPoint prev{0.0, out.curve.front().precision};
  for (const auto& p : out.curve) {
    out.auc += (p.recall - prev.recall) * (p.precision + prev.precision) / 2.0;
    prev = p;
  }
  return out;
}

double mean_ap(const std::map<ComponentClass, double>& per_class) {
  if (per_class.empty()) throw Error(ErrorKind::EmptyInput, "mean_ap of no classes");
  double sum = 0;
  for (const auto& [cls, ap] : per_class) sum += ap;
  return sum / static_cast<double>(per_class.size());
}

DetectionReport evaluate_detections(std::span<const ImagePair> images, double iou_threshold) {
  DetectionReport report;
  std::map<ComponentClass, double> aps;
  double auc_sum = 0;
  for (ComponentClass cls : all_classes()) {
    std::vector<DetectionMatchReport> per_image;
    std::size_t gt_count = 0;
    for (const auto& pair : images) {
      std::vector<LayoutElement> preds, gts;
      for (const auto& e : pair.predictions.elements) {
        if (e.cls == cls) preds.push_back(e);
      }
      for (const auto& e : pair.ground_truth.elements) {
        if (e.cls == cls) gts.push_back(e);
      }
      gt_count += gts.size();
      per_image.push_back(match_detections(preds, gts, iou_threshold));
    }
    if (gt_count == 0) continue;
    ApResult r = average_precision(per_image);
    aps[cls] = r.ap;
    auc_sum += r.auc;
    report.classes.push_back({cls, std::move(r)});
  }
  report.map = mean_ap(aps);
  report.mean_auc = auc_sum / static_cast<double>(report.classes.size());
  return report;
}

std::string DetectionReport::to_csv() const {
  std::ostringstream out;
  out << std::setprecision(6) << std::fixed;
  out << "class,AP,AUC\n";
  for (const auto& c : classes) out << class_name(c.cls) << ',' << c.result.ap << ',' << c.result.auc << '\n';
  out << "mAP," << map << ',' << mean_auc << '\n';
  return out.str();
}

std::string DetectionReport::to_table() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << std::left << std::setw(18) << "Class" << std::right << std::setw(10) << "AP (%)" << std::setw(10)
      << "AUC (%)" << '\n';
  for (const auto& c : classes) {
    out << std::left << std::setw(18) << class_name(c.cls) << std::right << std::setw(10) << 100 * c.result.ap
        << std::setw(10) << 100 * c.result.auc << '\n';
  }
  out << std::left << std::setw(18) << "mAP" << std::right << std::setw(10) << 100 * map << std::setw(10)
      << 100 * mean_auc << '\n';
  return out.str();
}

double precision_at_k(const RankedResult& result, const std::map<std::string, std::string>& categories,
                      const std::string& query_category, std::size_t k) {
  const std::size_t n = std::min(k, result.neighbors.size());
  if (n == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = categories.find(result.neighbors[i].id);
    if (it == categories.end()) {
      throw Error(ErrorKind::UnknownId, "no category for '" + result.neighbors[i].id + "'", result.neighbors[i].id);
    }
    if (it->second == query_category) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

double RetrievalReport::at(std::size_t k) const {
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] == k) return precision[i];
  }
  throw Error(ErrorKind::EmptyInput, "precision@" + std::to_string(k) + " not in report");
}

std::string RetrievalReport::to_csv() const {
  std::ostringstream out;
  out << std::setprecision(6) << std::fixed << "K,precision\n";
  for (std::size_t i = 0; i < ks.size(); ++i) out << ks[i] << ',' << precision[i] << '\n';
  return out.str();
}

std::string RetrievalReport::to_table() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << std::left << std::setw(8) << "K";
  for (std::size_t k : ks) out << std::right << std::setw(8) << k;
  out << '\n' << std::left << std::setw(8) << "P@K (%)";
  for (double p : precision) out << std::right << std::setw(8) << 100 * p;
  out << "\n(" << queries << " queries)\n";
  return out.str();
}

RetrievalReport eval_retrieval(const EmbeddingIndex& index, const ModelWeights& model,
                               std::span<const AnnotatedLayout> test_layouts,
                               const std::map<std::string, std::string>& categories,
                               const RetrievalEvalOptions& options) {
  std::map<std::string, std::size_t> group_size;
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto it = categories.find(index.id(i));
    if (it != categories.end()) ++group_size[it->second];
  }
  std::vector<const AnnotatedLayout*> queries;
  std::vector<std::string> query_category;
  for (const auto& layout : test_layouts) {
    std::optional<std::string> cat = layout.category;
    if (!cat) {
      const auto it = categories.find(layout.id);
      if (it != categories.end()) cat = it->second;
    }
    if (!cat || group_size[*cat] < options.min_group_size) continue;
    queries.push_back(&layout);
    query_category.push_back(*cat);
  }
  if (queries.empty()) throw Error(ErrorKind::EmptyTestSet, "no test layout belongs to an eligible category");

  RetrievalReport report;
  for (std::size_t k : kReportedK) {
    if (k <= options.k_max) report.ks.push_back(k);
  }
  const std::size_t k_needed = report.ks.empty() ? 0 : report.ks.back();
  std::vector<std::vector<double>> per_query(queries.size());
  std::vector<std::exception_ptr> errors(queries.size());
#pragma omp parallel for schedule(dynamic)
  for (long q = 0; q < static_cast<long>(queries.size()); ++q) {
    const auto i = static_cast<std::size_t>(q);
    try {
      const EmbeddingVector z = embed(model, *queries[i]);
      const RankedResult result = index.query(z, k_needed, queries[i]->id);
      for (std::size_t k : report.ks) per_query[i].push_back(precision_at_k(result, categories, query_category[i], k));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  report.precision.assign(report.ks.size(), 0.0);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    for (std::size_t j = 0; j < report.ks.size(); ++j) report.precision[j] += per_query[i][j];
  }
  for (double& p : report.precision) p /= static_cast<double>(queries.size());
  report.queries = queries.size();
  return report;
}

}  // namespace layoutsearch
