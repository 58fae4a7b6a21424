#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "evar/common/rng.hpp"
#include "evar/edl/classifier.hpp"
#include "evar/edl/loss.hpp"
#include "evar/num/optim.hpp"

namespace evar::edl {

struct Dataset {
  std::vector<num::Vec> features;
  std::vector<int> labels;

  std::size_t size() const { return features.size(); }
};

struct TrainConfig {
  int epochs = 40;
  int batch_size = 64;
  double lr = 1e-2;
  double momentum = 0.9;
  double clip_norm = 5.0;
  int anneal_epochs = 10;  // epochs until lambda_kl reaches 1
  int hidden = 64;
  num::EvidenceActivation activation = num::EvidenceActivation::kClampedExp;
  std::uint64_t seed = 1;

  void validate() const {
    if (epochs < 1 || batch_size < 1 || anneal_epochs < 1 || hidden < 1)
      throw std::invalid_argument("TrainConfig: counts must be positive");
  }
};

struct EpochMetrics {
  int epoch = 0;
  double loss = 0.0;
  double lambda_kl = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;
  double mean_u_id = 0.0;
  double mean_u_ood = 0.0;
};

struct TrainResult {
  EvidentialClassifier model;
  std::vector<EpochMetrics> history;
  bool diverged = false;
  int diverged_epoch = -1;
};

inline double accuracy(const EvidentialClassifier& m, const Dataset& data) {
  if (data.size() == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (sl::argmax_class(m.opinion(data.features[i])) == data.labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

inline double mean_uncertainty(const EvidentialClassifier& m, const std::vector<num::Vec>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (const auto& x : xs) s += m.opinion(x).uncertainty;
  return s / static_cast<double>(xs.size());
}

// Single-observation training: mini-batch gradient descent on the annealed
// total loss. Deterministic given the seed. Divergence (non-finite loss)
// stops the run and is reported in the result, never swallowed.
inline TrainResult train_recognizer(const Dataset& train, const Dataset& val,
                                    const std::vector<num::Vec>& ood_inputs, int feature_dim,
                                    int class_count, const TrainConfig& cfg) {
  cfg.validate();
  if (train.size() == 0) throw std::invalid_argument("train_recognizer: empty dataset");
  for (int y : train.labels)
    if (y < 0 || y >= class_count) throw InvalidLabel("train_recognizer: label out of range");

  TrainResult result;
  result.model =
      EvidentialClassifier::create(feature_dim, class_count, cfg.hidden, cfg.activation, cfg.seed);
  EvidentialClassifier& model = result.model;

  num::SgdMomentum opt{cfg.lr, cfg.momentum, cfg.clip_norm, {}};
  Rng shuffle_rng = Rng::stream(cfg.seed, 0x5f1eULL);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lambda = anneal_lambda(epoch, cfg.anneal_epochs);
    // Fisher-Yates with the dedicated stream
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.uniform_int(static_cast<int>(i))]);
    }

    double epoch_loss = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      model.params.zero_grad();
      double batch_loss = 0.0;
      for (std::size_t i = start; i < stop; ++i) {
        const num::Vec& x = train.features[order[i]];
        const int y = train.labels[order[i]];
        EvidentialClassifier::Cache cache;
        num::Vec evidence = model.forward(x, &cache);
        num::Vec alpha = evidence;
        for (double& a : alpha) a += 1.0;
        batch_loss += total_loss(alpha, y, lambda);
        num::Vec g = total_loss_grad(alpha, y, lambda);
        const double inv = 1.0 / static_cast<double>(stop - start);
        for (double& v : g) v *= inv;
        model.backward(cache, g);
      }
      batch_loss /= static_cast<double>(stop - start);
      if (!std::isfinite(batch_loss)) {
        result.diverged = true;
        result.diverged_epoch = epoch;
        return result;
      }
      opt.step(model.params);
      epoch_loss += batch_loss * static_cast<double>(stop - start);
      seen += stop - start;
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.loss = epoch_loss / static_cast<double>(seen);
    m.lambda_kl = lambda;
    m.train_acc = accuracy(model, train);
    m.val_acc = accuracy(model, val);
    m.mean_u_id = mean_uncertainty(model, val.features);
    m.mean_u_ood = mean_uncertainty(model, ood_inputs);
    result.history.push_back(m);
  }
  return result;
}

}  // namespace evar::edl
