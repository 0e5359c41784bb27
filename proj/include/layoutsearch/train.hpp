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

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "layoutsearch/corpus.hpp"
#include "layoutsearch/model.hpp"

namespace layoutsearch {

struct EpochStats {
  int epoch = 0;
  double train_loss = 0;
  std::optional<double> val_loss;
};

struct NetworkLog {
  // Loss of the initialised weights, before any update.
  double initial_train_loss = 0;
  std::optional<double> initial_val_loss;
  std::vector<EpochStats> epochs;
  // Epoch whose weights were kept (0 = the initial weights).
  int best_epoch = 0;
  // Best monitored loss: validation when a validation split exists, else train.
  double best_loss = 0;
  bool early_stopped = false;
};

struct TrainingLog {
  NetworkLog image;
  NetworkLog label;

  nlohmann::json to_json() const;
};

struct TrainingResult {
  ModelWeights weights;
  TrainingLog log;
};

using EpochCallback = std::function<void(std::string_view network, const EpochStats&)>;

// Trains the autoencoder (on ae_loss) and the label net (on MSE) separately
// with mini-batch SGD over seeded per-epoch shuffles. Each net stops early
// once its monitored loss has not improved for `patience` epochs and keeps
// its best weights. Per-sample gradients may be computed in parallel; they
// are summed in sample order so results are bit-identical for a given seed.
// Throws EmptySplit, UnknownId, DivergedLoss.
TrainingResult train(const Corpus& corpus, const SplitSpec& split, const AutoencoderConfig& config,
                     const EpochCallback& on_epoch = {});

}  // namespace layoutsearch
