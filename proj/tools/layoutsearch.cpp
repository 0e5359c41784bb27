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

// layoutsearch: corpus generation, training, indexing, querying,
// evaluation and the HTTP query service.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "layoutsearch/corpus.hpp"
#include "layoutsearch/errors.hpp"
#include "layoutsearch/gradcheck.hpp"
#include "layoutsearch/metrics.hpp"
#include "layoutsearch/model.hpp"
#include "layoutsearch/raster.hpp"
#include "layoutsearch/retrieval.hpp"
#include "layoutsearch/service.hpp"
#include "layoutsearch/synth.hpp"
#include "layoutsearch/train.hpp"
#include "layoutsearch/voc.hpp"
#include "layoutsearch/weights_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace layoutsearch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// "256" or "HxW".
Resolution parse_resolution(const std::string& text) {
  const auto number = [&](const std::string& part) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(part, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != part.size() || v <= 0) {
      throw CLI::ValidationError("--resolution", "expected N or HxW, got '" + text + "'");
    }
    return v;
  };
  const auto x = text.find('x');
  if (x == std::string::npos) {
    const int n = number(text);
    return {n, n};
  }
  return {number(text.substr(0, x)), number(text.substr(x + 1))};
}

// Query layouts come as VOC XML (by extension) or layout JSON.
AnnotatedLayout read_layout(const fs::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".xml") return parse_voc(text);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedJson, e.what(), path.string());
  }
  AnnotatedLayout layout = layout_from_json(doc, ConfidencePolicy::Optional);
  validate_layout(layout);
  return layout;
}

Corpus load_labelled_corpus(const fs::path& dir) {
  Corpus corpus = load_corpus(dir);
  if (const fs::path csv = dir / "categories.csv"; fs::exists(csv)) apply_categories(corpus, read_categories(csv));
  return corpus;
}

void report_failures(const Corpus& corpus) {
  for (const ParseFailure& f : corpus.failures) {
    std::cerr << "skipped " << f.file.string() << ": " << f.message << '\n';
  }
}

void emit(const std::string& table, const std::string& csv, const std::string& format,
          const std::optional<fs::path>& csv_out) {
  std::cout << (format == "csv" ? csv : table);
  if (csv_out) write_file(*csv_out, csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layout similarity search over UI wireframes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "layoutsearch 1.0.0");

  // gen-corpus
  GeneratorConfig gen;
  fs::path gen_out;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Write a seeded synthetic corpus as VOC XML plus categories.csv");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--per-category", gen.per_category, "Layouts per category")->capture_default_str();
  gen_cmd->add_option("--width", gen.width, "Canvas width")->capture_default_str();
  gen_cmd->add_option("--height", gen.height, "Canvas height")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output directory")->required();

  // train
  AutoencoderConfig train_config;
  std::string train_resolution = "256";
  fs::path train_data, train_weights;
  std::optional<fs::path> train_log;
  std::optional<std::uint64_t> split_seed_opt;
  auto* train_cmd = app.add_subcommand("train", "Train both embedding networks on an 80/10/10 split");
  train_cmd->add_option("data_dir", train_data, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  train_cmd->add_option("--resolution", train_resolution, "N or HxW, multiple of 16")->capture_default_str();
  train_cmd->add_option("--m", train_config.attention_maps, "Attention-conditioned encoder blocks (0-4)")
      ->capture_default_str();
  train_cmd->add_option("--lr", train_config.learning_rate, "SGD learning rate")->capture_default_str();
  train_cmd->add_option("--batch", train_config.batch_size, "Mini-batch size")->capture_default_str();
  train_cmd->add_option("--epochs", train_config.epochs, "Maximum epochs")->capture_default_str();
  train_cmd->add_option("--patience", train_config.patience, "Early-stopping patience")->capture_default_str();
  train_cmd->add_option("--seed", train_config.seed, "Initialisation and shuffle seed")->capture_default_str();
  train_cmd->add_option("--split-seed", split_seed_opt, "Split seed (defaults to --seed)");
  train_cmd->add_option("--weights-out", train_weights, "Weights file to write")->required();
  train_cmd->add_option("--log", train_log, "Training log JSON (default: <weights-out>.log.json)");

  // index
  fs::path index_data, index_weights, index_out;
  auto* index_cmd = app.add_subcommand("index", "Embed a corpus and write the frozen index");
  index_cmd->add_option("data_dir", index_data, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  index_cmd->add_option("--weights", index_weights, "Weights file")->required();
  index_cmd->add_option("--out", index_out, "Index file to write")->required();

  // query
  fs::path query_index, query_weights, query_layout;
  std::size_t query_k = 10;
  bool query_json = false;
  std::optional<std::string> query_exclude;
  auto* query_cmd = app.add_subcommand("query", "Rank indexed layouts by similarity to a query layout");
  query_cmd->add_option("layout", query_layout, "Query layout (.xml VOC or JSON)")->required();
  query_cmd->add_option("--index", query_index, "Index file")->required();
  query_cmd->add_option("--weights", query_weights, "Weights file")->required();
  query_cmd->add_option("--k", query_k, "Results to return")->capture_default_str()->check(CLI::PositiveNumber);
  query_cmd->add_flag("--json", query_json, "Print JSON instead of id/distance lines");
  query_cmd->add_option("--exclude", query_exclude, "Id to leave out of the results");

  // eval-retrieval
  fs::path er_index, er_weights, er_data;
  std::optional<fs::path> er_categories, er_csv;
  std::uint64_t er_split_seed = 7;
  bool er_all = false;
  RetrievalEvalOptions er_options;
  std::string er_format = "table";
  auto* er_cmd = app.add_subcommand("eval-retrieval", "precision@K over the test split");
  er_cmd->add_option("data_dir", er_data, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  er_cmd->add_option("--index", er_index, "Index file")->required();
  er_cmd->add_option("--weights", er_weights, "Weights file")->required();
  er_cmd->add_option("--categories", er_categories, "categories.csv (default: <data_dir>/categories.csv)");
  er_cmd->add_option("--split-seed", er_split_seed, "Split seed used for training")->capture_default_str();
  er_cmd->add_flag("--all", er_all, "Query every corpus layout instead of the test split");
  er_cmd->add_option("--min-group", er_options.min_group_size, "Minimum labelled layouts per queried category")
      ->capture_default_str();
  er_cmd->add_option("--format", er_format, "stdout format")->check(CLI::IsMember({"table", "csv"}))
      ->capture_default_str();
  er_cmd->add_option("--csv", er_csv, "Also write the CSV table here");

  // eval-detection
  fs::path ed_gt, ed_pred;
  double ed_iou = kDefaultIouThreshold, ed_threshold = 0.0;
  std::optional<fs::path> ed_csv;
  std::string ed_format = "table";
  auto* ed_cmd = app.add_subcommand("eval-detection", "Per-class AP/AUC and mAP of detector output");
  ed_cmd->add_option("gt_dir", ed_gt, "Ground-truth VOC directory")->required()->check(CLI::ExistingDirectory);
  ed_cmd->add_option("pred_json", ed_pred, "JSON array of detection documents")->required()->check(
      CLI::ExistingFile);
  ed_cmd->add_option("--iou", ed_iou, "IoU threshold")->capture_default_str();
  ed_cmd->add_option("--threshold", ed_threshold, "Confidence threshold")->capture_default_str();
  ed_cmd->add_option("--format", ed_format, "stdout format")->check(CLI::IsMember({"table", "csv"}))
      ->capture_default_str();
  ed_cmd->add_option("--csv", ed_csv, "Also write the CSV table here");

  // gradcheck
  std::uint64_t gc_seed = 7;
  bool gc_corrupt = false;
  auto* gc_cmd = app.add_subcommand("gradcheck", "Finite-difference check of every backward pass");
  gc_cmd->add_option("--seed", gc_seed, "Seed for inputs and weights")->capture_default_str();
  gc_cmd->add_flag("--corrupt", gc_corrupt)->group("");

  // serve
  ServiceConfig sc;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP query service (LAYOUTSEARCH_* variables override flags)");
  serve_cmd->add_option("--host", sc.host, "LAYOUTSEARCH_HOST")->capture_default_str();
  serve_cmd->add_option("--port", sc.port, "LAYOUTSEARCH_PORT (0 picks a free port)")->capture_default_str();
  serve_cmd->add_option("--weights", sc.weights, "LAYOUTSEARCH_WEIGHTS");
  serve_cmd->add_option("--corpus", sc.corpus_dir, "LAYOUTSEARCH_CORPUS");
  serve_cmd->add_option("--index", sc.index, "LAYOUTSEARCH_INDEX");
  serve_cmd->add_option("--default-k", sc.default_k, "LAYOUTSEARCH_DEFAULT_K")->capture_default_str();
  serve_cmd->add_option("--max-k", sc.max_k, "LAYOUTSEARCH_MAX_K")->capture_default_str();
  serve_cmd->add_option("--cors", sc.cors_allow, "LAYOUTSEARCH_CORS (comma-separated)")->delimiter(',');

  // render
  fs::path render_layout, render_out;
  std::string render_resolution = "256";
  bool render_attention = false;
  auto* render_cmd = app.add_subcommand("render", "Write a layout's semantic image as PNG");
  render_cmd->add_option("layout", render_layout, "Layout (.xml VOC or JSON)")->required();
  render_cmd->add_option("--out", render_out, "PNG to write")->required();
  render_cmd->add_option("--resolution", render_resolution, "N or HxW")->capture_default_str();
  render_cmd->add_flag("--attention", render_attention, "Render the box attention map instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) {
      const Corpus corpus = generate(gen);
      export_corpus(corpus, gen_out);
      std::cout << "wrote " << corpus.layouts.size() << " layouts to " << gen_out.string() << '\n';
    } else if (*train_cmd) {
      train_config.resolution = parse_resolution(train_resolution);
      train_config.validate();
      const Corpus corpus = load_corpus(train_data);
      report_failures(corpus);
      const SplitSpec split = split_corpus(corpus, split_seed_opt.value_or(train_config.seed));
      std::cerr << json{{"event", "split"},
                        {"train", split.train.size()},
                        {"val", split.val.size()},
                        {"test", split.test.size()}}
                       .dump()
                << '\n';
      const TrainingResult result =
          train(corpus, split, train_config, [](std::string_view network, const EpochStats& stats) {
            json line = {{"event", "epoch"}, {"network", network}, {"epoch", stats.epoch},
                         {"train_loss", stats.train_loss}};
            if (stats.val_loss) line["val_loss"] = *stats.val_loss;
            std::cerr << line.dump() << '\n';
          });
      save_weights(result.weights, train_weights);
      json log = result.log.to_json();
      log["config"] = train_config.to_json();
      write_file(train_log.value_or(fs::path(train_weights.string() + ".log.json")), log.dump(2) + "\n");
      std::cout << "wrote " << train_weights.string() << '\n';
    } else if (*index_cmd) {
      const ModelWeights model = load_weights(index_weights);
      const Corpus corpus = load_corpus(index_data);
      report_failures(corpus);
      const EmbeddingIndex index = build_index(corpus, model);
      save_index(index, index_out);
      std::cout << "indexed " << index.size() << " layouts (d=" << index.dim() << ") to " << index_out.string()
                << '\n';
    } else if (*query_cmd) {
      const ModelWeights model = load_weights(query_weights);
      const EmbeddingIndex index = load_index(query_index);
      const AnnotatedLayout layout = read_layout(query_layout);
      std::optional<std::string_view> exclude;
      if (query_exclude) exclude = *query_exclude;
      const RankedResult result = index.query(embed(model, layout), query_k, exclude);
      if (query_json) {
        json results = json::array();
        for (const Neighbor& n : result.neighbors) results.push_back({{"id", n.id}, {"distance", n.distance}});
        std::cout << json{{"results", results}}.dump() << '\n';
      } else {
        for (const Neighbor& n : result.neighbors) {
          char distance[32];
          std::snprintf(distance, sizeof distance, "%.6f", n.distance);
          std::cout << n.id << '\t' << distance << '\n';
        }
      }
    } else if (*er_cmd) {
      const ModelWeights model = load_weights(er_weights);
      const EmbeddingIndex index = load_index(er_index);
      Corpus corpus = load_corpus(er_data);
      report_failures(corpus);
      const auto categories = read_categories(er_categories.value_or(er_data / "categories.csv"));
      apply_categories(corpus, categories);
      std::vector<AnnotatedLayout> queries;
      if (er_all) {
        queries = corpus.layouts;
      } else {
        for (const std::string& id : split_corpus(corpus, er_split_seed).test) queries.push_back(*corpus.find(id));
      }
      const RetrievalReport report = eval_retrieval(index, model, queries, categories, er_options);
      emit(report.to_table(), report.to_csv(), er_format, er_csv);
    } else if (*ed_cmd) {
      const Corpus gt = load_corpus(ed_gt);
      report_failures(gt);
      json docs;
      try {
        docs = json::parse(read_file(ed_pred));
      } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedJson, e.what(), ed_pred.string());
      }
      if (!docs.is_array()) throw Error(ErrorKind::MalformedJson, "expected a JSON array", ed_pred.string());
      std::map<std::string, AnnotatedLayout> predictions;
      for (const json& doc : docs) {
        AnnotatedLayout p = parse_detections(doc.dump(), ed_threshold);
        const std::string id = p.id;
        if (gt.find(id) == nullptr) throw Error(ErrorKind::UnknownId, "prediction for unknown image", id);
        predictions.insert_or_assign(id, std::move(p));
      }
      std::vector<ImagePair> pairs;
      for (const AnnotatedLayout& g : gt.layouts) {
        const auto it = predictions.find(g.id);
        AnnotatedLayout p = it != predictions.end() ? it->second : AnnotatedLayout{g.id, g.width, g.height, {}, {}};
        pairs.push_back({g, std::move(p)});
      }
      const DetectionReport report = evaluate_detections(pairs, ed_iou);
      emit(report.to_table(), report.to_csv(), ed_format, ed_csv);
    } else if (*gc_cmd) {
      bool ok = true;
      for (const GradCheckResult& r : run_gradient_suite(gc_seed, gc_corrupt)) {
        char line[160];
        std::snprintf(line, sizeof line, "%-22s %-4s max_rel_err=%.3e entries=%zu", r.name.c_str(),
                      r.passed ? "ok" : "FAIL", r.max_relative_error, r.entries_checked);
        std::cout << line << '\n';
        ok = ok && r.passed;
      }
      if (!ok) {
        std::cerr << "gradient check failed\n";
        return kExitInternal;
      }
    } else if (*serve_cmd) {
      sc = apply_environment(sc);
      if (!serve(sc)) return kExitData;
    } else if (*render_cmd) {
      const AnnotatedLayout layout = read_layout(render_layout);
      const Resolution resolution = parse_resolution(render_resolution);
      if (render_attention) {
        write_png(attention_map(layout, resolution), 0, render_out);
      } else {
        write_png(rasterize(layout, resolution), render_out);
      }
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what();
    if (!e.subject().empty()) std::cerr << " [" << e.subject() << "]";
    std::cerr << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
