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

#include "layoutsearch/train.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

#include "layoutsearch/errors.hpp"
#include "layoutsearch/optim.hpp"
#include "layoutsearch/random.hpp"

namespace layoutsearch {

namespace {

// Rasterized inputs are cached while they fit in this budget.
constexpr std::size_t kImageCacheBytes = std::size_t{512} << 20;

std::vector<const AnnotatedLayout*> resolve(const Corpus& corpus, const std::vector<std::string>& ids) {
  std::unordered_map<std::string_view, const AnnotatedLayout*> by_id;
  for (const auto& l : corpus.layouts) by_id.emplace(l.id, &l);
  std::vector<const AnnotatedLayout*> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw Error(ErrorKind::UnknownId, "split id '" + id + "' not in corpus", id);
    out.push_back(it->second);
  }
  return out;
}

struct ImageSample {
  SemanticImage image;
  AttentionMap attention;
};

class ImageSource {
 public:
  ImageSource(std::vector<const AnnotatedLayout*> layouts, Resolution res) : layouts_(std::move(layouts)), res_(res) {
    const std::size_t bytes = layouts_.size() * 6 * static_cast<std::size_t>(res.height * res.width) * sizeof(double);
    if (bytes <= kImageCacheBytes) {
      cache_.resize(layouts_.size());
#pragma omp parallel for schedule(static)
      for (long i = 0; i < static_cast<long>(layouts_.size()); ++i) {
        cache_[static_cast<std::size_t>(i)] = make(static_cast<std::size_t>(i));
      }
    }
  }

  std::size_t size() const { return layouts_.size(); }

  // Returns a reference into the cache, or builds into `scratch`.
  const ImageSample& get(std::size_t i, ImageSample& scratch) const {
    if (!cache_.empty()) return cache_[i];
    scratch = make(i);
    return scratch;
  }

 private:
  ImageSample make(std::size_t i) const {
    const AnnotatedLayout& l = *layouts_[i];
    return {rasterize(l, res_), attention_map(l, res_)};
  }

  std::vector<const AnnotatedLayout*> layouts_;
  Resolution res_;
  std::vector<ImageSample> cache_;
};

struct ImageTask {
  const ImageAutoencoder* net;
  const ImageSource* source;

  std::size_t size() const { return source->size(); }
  double loss(std::size_t i) const {
    ImageSample scratch;
    const auto& s = source->get(i, scratch);
    return net->loss(s.image, s.attention);
  }
  double loss_and_gradients(std::size_t i, std::vector<Tensor>& grads) const {
    ImageSample scratch;
    const auto& s = source->get(i, scratch);
    return net->loss_and_gradients(s.image, s.attention, grads);
  }
};

struct LabelTask {
  const LabelNet* net;
  const std::vector<LabelVector>* labels;

  std::size_t size() const { return labels->size(); }
  double loss(std::size_t i) const { return net->loss((*labels)[i]); }
  double loss_and_gradients(std::size_t i, std::vector<Tensor>& grads) const {
    return net->loss_and_gradients((*labels)[i], grads);
  }
};

template <typename Task>
double mean_loss(const Task& task) {
  const std::size_t n = task.size();
  std::vector<double> losses(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    losses[static_cast<std::size_t>(i)] = task.loss(static_cast<std::size_t>(i));
  }
  double sum = 0;
  for (double l : losses) sum += l;
  return n ? sum / static_cast<double>(n) : 0.0;
}

void require_finite(double loss, std::string_view network, int epoch) {
  if (!std::isfinite(loss)) {
    throw Error(ErrorKind::DivergedLoss,
                std::string(network) + " loss became non-finite at epoch " + std::to_string(epoch));
  }
}

// Generic mini-batch SGD loop with early stopping. `make_task` binds a net
// to a sample set.
template <typename Net, typename MakeTask>
NetworkLog fit(Net& net, const MakeTask& make_task, const AutoencoderConfig& config, std::uint64_t stream,
               std::string_view network, const EpochCallback& on_epoch) {
  const auto train_task = make_task(net, true);
  const auto val_task = make_task(net, false);
  const bool has_val = val_task.size() > 0;

  NetworkLog log;
  log.initial_train_loss = mean_loss(train_task);
  require_finite(log.initial_train_loss, network, 0);
  if (has_val) {
    log.initial_val_loss = mean_loss(val_task);
    require_finite(*log.initial_val_loss, network, 0);
  }
  log.best_loss = has_val ? *log.initial_val_loss : log.initial_train_loss;
  log.best_epoch = 0;

  Net best = net;
  int since_best = 0;
  Rng rng(derive_seed(config.seed, stream));
  std::vector<std::size_t> order(train_task.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const auto params = net.parameters();
  for (Parameter* p : params) p->zero_grad();
  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  std::vector<std::vector<Tensor>> sample_grads(batch_size);
  std::vector<double> sample_loss(batch_size);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t count = std::min(batch_size, order.size() - start);
#pragma omp parallel for schedule(dynamic)
      for (long s = 0; s < static_cast<long>(count); ++s) {
        const auto k = static_cast<std::size_t>(s);
        sample_loss[k] = train_task.loss_and_gradients(order[start + k], sample_grads[k]);
      }
      const double scale = 1.0 / static_cast<double>(count);
      for (std::size_t k = 0; k < count; ++k) {
        epoch_loss += sample_loss[k];
        for (std::size_t p = 0; p < params.size(); ++p) {
          auto dst = params[p]->grad.data();
          const auto src = sample_grads[k][p].data();
          for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i] * scale;
        }
      }
      sgd_step(params, config.learning_rate);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = epoch_loss / static_cast<double>(order.size());
    require_finite(stats.train_loss, network, epoch);
    if (has_val) {
      stats.val_loss = mean_loss(val_task);
      require_finite(*stats.val_loss, network, epoch);
    }
    log.epochs.push_back(stats);
    if (on_epoch) on_epoch(network, stats);

    const double monitored = has_val ? *stats.val_loss : stats.train_loss;
    if (monitored < log.best_loss) {
      log.best_loss = monitored;
      log.best_epoch = epoch;
      best = net;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      log.early_stopped = true;
      break;
    }
  }
  net = std::move(best);
  return log;
}

nlohmann::json network_log_json(const NetworkLog& log) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : log.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"val_loss", e.val_loss ? nlohmann::json(*e.val_loss) : nlohmann::json()}});
  }
  return {{"initial_train_loss", log.initial_train_loss},
          {"initial_val_loss", log.initial_val_loss ? nlohmann::json(*log.initial_val_loss) : nlohmann::json()},
          {"best_epoch", log.best_epoch},
          {"best_loss", log.best_loss},
          {"early_stopped", log.early_stopped},
          {"epochs", std::move(epochs)}};
}

}  // namespace

nlohmann::json TrainingLog::to_json() const {
  return {{"image", network_log_json(image)}, {"label", network_log_json(label)}};
}

TrainingResult train(const Corpus& corpus, const SplitSpec& split, const AutoencoderConfig& config,
                     const EpochCallback& on_epoch) {
  config.validate();
  if (split.train.empty()) throw Error(ErrorKind::EmptySplit, "training split is empty");
  const auto train_layouts = resolve(corpus, split.train);
  const auto val_layouts = resolve(corpus, split.val);

  ModelWeights model = initialize_model(config);
  TrainingLog log;

  {
    const ImageSource train_images(train_layouts, config.resolution);
    const ImageSource val_images(val_layouts, config.resolution);
    const auto make = [&](const ImageAutoencoder& net, bool is_train) {
      return ImageTask{&net, is_train ? &train_images : &val_images};
    };
    log.image = fit(model.image, make, config, 0xA11CEULL, "image", on_epoch);
  }
  {
    std::vector<LabelVector> train_labels, val_labels;
    for (const auto* l : train_layouts) train_labels.push_back(multi_hot(*l));
    for (const auto* l : val_layouts) val_labels.push_back(multi_hot(*l));
    const auto make = [&](const LabelNet& net, bool is_train) {
      return LabelTask{&net, is_train ? &train_labels : &val_labels};
    };
    log.label = fit(model.label, make, config, 0xB0BULL, "label", on_epoch);
  }
  return {std::move(model), std::move(log)};
}

}  // namespace layoutsearch
