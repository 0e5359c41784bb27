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

#include <gtest/gtest.h>

#include "layoutsearch/synth.hpp"
#include "layoutsearch/train.hpp"
#include "test_util.hpp"

using namespace layoutsearch;
using namespace layoutsearch::testing;

namespace {

Corpus small_corpus() {
  GeneratorConfig gen;
  gen.per_category = 2;
  return generate(gen);
}

AutoencoderConfig small_config(int epochs) {
  AutoencoderConfig c;
  c.resolution = {16, 16};
  c.attention_maps = 4;
  c.learning_rate = 0.05;
  c.batch_size = 4;
  c.epochs = epochs;
  c.patience = 3;
  return c;
}

std::vector<Tensor> values(const ModelWeights& m) {
  std::vector<Tensor> out;
  for (const Parameter* p : m.image.parameters()) out.push_back(p->value);
  for (const Parameter* p : m.label.parameters()) out.push_back(p->value);
  return out;
}

double mean_image_loss(const ModelWeights& m, const Corpus& corpus, const std::vector<std::string>& ids) {
  double sum = 0;
  const Resolution res = m.image.config().resolution;
  for (const auto& id : ids) {
    const AnnotatedLayout& l = *corpus.find(id);
    sum += m.image.loss(rasterize(l, res), attention_map(l, res));
  }
  return sum / static_cast<double>(ids.size());
}

}  // namespace

TEST(Train, ZeroEpochsReturnsInitialisedWeights) {
  const Corpus corpus = small_corpus();
  const AutoencoderConfig config = small_config(0);
  const TrainingResult r = train(corpus, split_corpus(corpus, 1), config);
  EXPECT_EQ(values(r.weights), values(initialize_model(config)));
  EXPECT_TRUE(r.log.image.epochs.empty());
  EXPECT_TRUE(r.log.label.epochs.empty());
  EXPECT_EQ(r.log.image.best_epoch, 0);
}

TEST(Train, DeterministicForFixedSeed) {
  const Corpus corpus = small_corpus();
  const SplitSpec split = split_corpus(corpus, 1);
  const TrainingResult a = train(corpus, split, small_config(3));
  const TrainingResult b = train(corpus, split, small_config(3));
  EXPECT_EQ(a.log.to_json(), b.log.to_json());
  EXPECT_EQ(values(a.weights), values(b.weights));
}

TEST(Train, LogsFiniteLossesAndKeepsBestWeights) {
  const Corpus corpus = small_corpus();
  const SplitSpec split = split_corpus(corpus, 2);
  std::vector<std::string> seen;
  const TrainingResult r =
      train(corpus, split, small_config(6), [&](std::string_view net, const EpochStats&) { seen.emplace_back(net); });
  ASSERT_FALSE(r.log.image.epochs.empty());
  EXPECT_EQ(seen.front(), "image");
  EXPECT_EQ(seen.back(), "label");
  for (const auto& log : {r.log.image, r.log.label}) {
    ASSERT_TRUE(log.initial_val_loss.has_value());
    double best = *log.initial_val_loss;
    for (const EpochStats& e : log.epochs) {
      EXPECT_TRUE(std::isfinite(e.train_loss));
      ASSERT_TRUE(e.val_loss.has_value());
      best = std::min(best, *e.val_loss);
    }
    EXPECT_EQ(log.best_loss, best);
  }
  // The returned autoencoder is the one that achieved the best validation loss.
  EXPECT_NEAR(mean_image_loss(r.weights, corpus, split.val), r.log.image.best_loss, 1e-12);
}

TEST(Train, MonitorsTrainLossWithoutValidationSplit) {
  const Corpus corpus = small_corpus();
  SplitSpec split;
  for (std::size_t i = 0; i < 4; ++i) split.train.push_back(corpus.layouts[i].id);
  const TrainingResult r = train(corpus, split, small_config(2));
  EXPECT_FALSE(r.log.image.initial_val_loss.has_value());
  EXPECT_LE(r.log.image.best_loss, r.log.image.initial_train_loss);
}

TEST(Train, StopsEarlyWhenLossStalls) {
  const Corpus corpus = small_corpus();
  AutoencoderConfig config = small_config(50);
  config.learning_rate = 1e-300;  // updates vanish below double precision
  config.patience = 2;
  const TrainingResult r = train(corpus, split_corpus(corpus, 1), config);
  EXPECT_TRUE(r.log.image.early_stopped);
  EXPECT_LT(r.log.image.epochs.size(), 50u);
}

TEST(Train, Errors) {
  const Corpus corpus = small_corpus();
  SplitSpec empty;
  EXPECT_EQ(error_kind([&] { train(corpus, empty, small_config(1)); }), ErrorKind::EmptySplit);
  SplitSpec unknown;
  unknown.train = {"nope"};
  EXPECT_EQ(error_kind([&] { train(corpus, unknown, small_config(1)); }), ErrorKind::UnknownId);
  AutoencoderConfig bad = small_config(1);
  bad.attention_maps = 7;
  EXPECT_EQ(error_kind([&] { train(corpus, split_corpus(corpus, 1), bad); }), ErrorKind::InvalidConfig);
  AutoencoderConfig huge = small_config(3);
  huge.learning_rate = 1e300;
  EXPECT_EQ(error_kind([&] { train(corpus, split_corpus(corpus, 1), huge); }), ErrorKind::DivergedLoss);
}

TEST(Train, LogJsonShape) {
  const Corpus corpus = small_corpus();
  const TrainingResult r = train(corpus, split_corpus(corpus, 1), small_config(1));
  const auto j = r.log.to_json();
  for (const char* net : {"image", "label"}) {
    EXPECT_TRUE(j.at(net).contains("initial_train_loss"));
    EXPECT_EQ(j.at(net).at("epochs").size(), 1u);
    EXPECT_TRUE(j.at(net).at("epochs")[0].contains("val_loss"));
  }
}
