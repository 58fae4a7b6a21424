#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "evar/agent/rollout.hpp"
#include "evar/num/optim.hpp"

namespace evar::agent {

struct NonFiniteLoss final : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PpoConfig {
  double clip = 0.2;
  int epochs = 4;
  int minibatch = 64;  // transitions; episodes are grouped to at least this
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  bool normalize_advantages = true;
};

// Clipped-surrogate loss over whole episodes (the recurrent state is re-built
// from the stored per-step features at update time). Mean over transitions:
//   -min(r A, clip(r, 1 +- eps) A) + value_coef * 0.5 (v - ret)^2
//   - entropy_coef * H
// Gradients flow through the actor/critic heads and back through time.
inline double ppo_loss_and_backward(PolicyNet& policy,
                                    const std::vector<const EpisodeResult*>& episodes,
                                    const PpoConfig& cfg, bool do_backward) {
  std::size_t transitions = 0;
  for (const auto* ep : episodes) transitions += ep->steps.size();
  if (transitions == 0) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(transitions);

  double total_loss = 0.0;
  for (const auto* ep : episodes) {
    const int n = static_cast<int>(ep->steps.size());
    std::vector<PolicyNet::StepEval> evals(n);
    num::Vec h = policy.initial_state();
    for (int t = 0; t < n; ++t) {
      evals[t] = policy.eval_step(ep->steps[t].features, h, /*keep_cache=*/true);
      h = evals[t].h;
    }

    std::vector<num::Vec> gh(n, num::Vec(policy.hidden, 0.0));
    for (int t = 0; t < n; ++t) {
      const StepRecord& s = ep->steps[t];
      const num::Vec& logp = evals[t].logp;
      const double ratio = std::exp(logp[s.action] - s.logprob);
      const double adv = s.advantage;
      const double unclipped = ratio * adv;
      const double clipped = std::clamp(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip) * adv;
      const double pg = -std::min(unclipped, clipped);
      const double vdiff = evals[t].value - s.ret;
      const double vloss = cfg.value_coef * 0.5 * vdiff * vdiff;
      const double ent = num::entropy_from_logp(logp);
      total_loss += (pg + vloss - cfg.entropy_coef * ent) * inv_n;

      if (!do_backward) continue;

      // d pg / d logp[a]: -A r when the unclipped branch is active, else 0
      const bool unclipped_active = adv >= 0.0 ? ratio < 1.0 + cfg.clip : ratio > 1.0 - cfg.clip;
      num::Vec glp(logp.size(), 0.0);
      if (unclipped_active) glp[s.action] = -adv * ratio * inv_n;
      num::Vec glogits = num::log_softmax_backward(logp, glp);
      num::axpy(1.0, num::entropy_backward(logp, -cfg.entropy_coef * inv_n), glogits);

      num::axpy(1.0, policy.actor.backward(policy.params, evals[t].h, glogits), gh[t]);
      const num::Vec gvalue = {cfg.value_coef * vdiff * inv_n};
      num::axpy(1.0, policy.critic.backward(policy.params, evals[t].h, gvalue), gh[t]);
    }

    if (do_backward) {
      for (int t = n - 1; t >= 0; --t) {
        num::Vec gh_prev = policy.gru.backward(policy.params, evals[t].cache, gh[t]);
        if (t > 0) num::axpy(1.0, gh_prev, gh[t - 1]);
      }
    }
  }
  return total_loss;
}

struct PpoStats {
  double loss = 0.0;
  double mean_reward = 0.0;
  int minibatches = 0;
};

// One PPO update over a batch of freshly collected episodes. Minibatches are
// whole episodes totalling at least cfg.minibatch transitions.
inline PpoStats ppo_update(PolicyNet& policy, std::vector<EpisodeResult>& batch,
                           const PpoConfig& cfg, num::SgdMomentum& opt, Rng& rng,
                           std::uint64_t batch_seed) {
  for (auto& ep : batch) gae_advantages(ep, cfg.gamma, cfg.gae_lambda);

  if (cfg.normalize_advantages) {
    double mean = 0.0, count = 0.0;
    for (const auto& ep : batch)
      for (const auto& s : ep.steps) {
        mean += s.advantage;
        count += 1.0;
      }
    mean /= std::max(1.0, count);
    double var = 0.0;
    for (const auto& ep : batch)
      for (const auto& s : ep.steps) var += (s.advantage - mean) * (s.advantage - mean);
    const double stdev = std::sqrt(var / std::max(1.0, count)) + 1e-8;
    for (auto& ep : batch)
      for (auto& s : ep.steps) s.advantage = (s.advantage - mean) / stdev;
  }

  PpoStats stats;
  for (const auto& ep : batch) stats.mean_reward += ep.reward_sum;
  stats.mean_reward /= std::max<std::size_t>(1, batch.size());

  std::vector<int> order(batch.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.uniform_int(static_cast<int>(i))]);

    std::size_t idx = 0;
    while (idx < order.size()) {
      std::vector<const EpisodeResult*> minibatch;
      std::size_t transitions = 0;
      while (idx < order.size() &&
             (transitions < static_cast<std::size_t>(cfg.minibatch) || minibatch.empty())) {
        minibatch.push_back(&batch[order[idx]]);
        transitions += batch[order[idx]].steps.size();
        ++idx;
      }
      policy.params.zero_grad();
      const double loss = ppo_loss_and_backward(policy, minibatch, cfg, /*do_backward=*/true);
      if (!std::isfinite(loss))
        throw NonFiniteLoss("ppo_update: non-finite loss in batch seeded " +
                            std::to_string(batch_seed));
      opt.step(policy.params);
      stats.loss = loss;
      ++stats.minibatches;
    }
  }
  return stats;
}

}  // namespace evar::agent
