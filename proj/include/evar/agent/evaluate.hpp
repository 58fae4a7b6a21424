#pragma once

#include <thread>
#include <vector>

#include "evar/agent/fusion.hpp"
#include "evar/agent/rollout.hpp"
#include "evar/bench/test_set.hpp"

namespace evar::agent {

struct EvalConfig {
  int horizon = 10;
  double feature_noise_sigma = 0.0;  // units of the q=1 feature deviation
  std::uint64_t seed = 0;
  int jobs = 1;
  bool greedy_policy = true;  // learned agent acts by argmax at evaluation
};

struct LevelMetrics {
  int n = 0;
  int top1_hits = 0;
  int top3_hits = 0;

  double top1() const { return n > 0 ? static_cast<double>(top1_hits) / n : 0.0; }
  double top3() const { return n > 0 ? static_cast<double>(top3_hits) / n : 0.0; }
};

struct StepPoint {
  int step = 0;  // 1-based observation index
  double success = 0.0;
  double mean_u_prefuse = 0.0;
  double mean_u_fused = 0.0;
};

struct EvalResult {
  LevelMetrics by_level[3];
  LevelMetrics overall;
  std::vector<StepPoint> curve;  // fused-so-far prediction per step
  double mean_reward = 0.0;
};

namespace detail {

struct InstanceOutcome {
  bench::Level level;
  bool top1 = false;
  bool top3 = false;
  std::vector<bool> step_success;
  std::vector<double> u_prefuse;
  std::vector<double> u_fused;
  double reward_sum = 0.0;
};

template <Recognizer R>
inline InstanceOutcome evaluate_instance(const bench::EpisodeInstance& inst,
                                         const world::WorldConfig& wcfg, AgentKind kind,
                                         const PolicyNet* policy, const R& recognizer,
                                         FusionKind fusion, const EvalConfig& cfg,
                                         std::uint64_t stream_id) {
  const world::Scene scene = world::generate_scene(inst.scene_seed, wcfg);
  Rng rng = Rng::stream(cfg.seed, stream_id);
  RolloutOptions opt;
  opt.horizon = cfg.horizon;
  opt.feature_noise_sigma = cfg.feature_noise_sigma;
  opt.greedy_policy = cfg.greedy_policy;
  const EpisodeResult ep = rollout(scene, inst.start, kind, policy, recognizer, rng, opt);

  InstanceOutcome out;
  out.level = inst.record.level;
  out.reward_sum = ep.reward_sum;
  const int y = ep.true_class;
  const auto final_outcome = fuse_strategy(fusion, ep.opinions);
  out.top1 = final_outcome.prediction() == y;
  out.top3 = final_outcome.in_top(3, y);
  const std::size_t steps = ep.opinions.size();
  out.step_success.resize(steps);
  out.u_prefuse.resize(steps);
  out.u_fused.resize(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    const std::span<const sl::Opinion> prefix(ep.opinions.data(), t + 1);
    out.step_success[t] = fuse_strategy(fusion, prefix).prediction() == y;
    out.u_prefuse[t] = ep.opinions[t].uncertainty;
    out.u_fused[t] = ep.fused[t].uncertainty;
  }
  return out;
}

}  // namespace detail

// Deterministic given (test set, checkpoint, sigma, seed); worker count only
// changes scheduling, never results.
template <Recognizer R>
inline EvalResult evaluate(AgentKind kind, const PolicyNet* policy, const R& recognizer,
                           const bench::TestSet& test_set, FusionKind fusion,
                           const EvalConfig& cfg = {}) {
  const std::size_t n = test_set.instances.size();
  std::vector<detail::InstanceOutcome> outcomes(n);

  auto worker = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      outcomes[i] = detail::evaluate_instance(test_set.instances[i], test_set.world_config, kind,
                                              policy, recognizer, fusion, cfg, i);
  };
  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1 || n < 2) {
    worker(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
      const std::size_t lo = j * chunk;
      if (lo >= n) break;
      pool.emplace_back(worker, lo, std::min(n, lo + chunk));
    }
    for (auto& t : pool) t.join();
  }

  EvalResult result;
  const std::size_t steps = kind == AgentKind::kSingleView ? 1 : cfg.horizon;
  result.curve.assign(steps, {});
  for (std::size_t t = 0; t < steps; ++t) result.curve[t].step = static_cast<int>(t) + 1;
  for (const auto& out : outcomes) {
    auto& lm = result.by_level[static_cast<int>(out.level)];
    ++lm.n;
    ++result.overall.n;
    if (out.top1) {
      ++lm.top1_hits;
      ++result.overall.top1_hits;
    }
    if (out.top3) {
      ++lm.top3_hits;
      ++result.overall.top3_hits;
    }
    result.mean_reward += out.reward_sum;
    for (std::size_t t = 0; t < steps && t < out.step_success.size(); ++t) {
      result.curve[t].success += out.step_success[t] ? 1.0 : 0.0;
      result.curve[t].mean_u_prefuse += out.u_prefuse[t];
      result.curve[t].mean_u_fused += out.u_fused[t];
    }
  }
  if (!outcomes.empty()) {
    result.mean_reward /= static_cast<double>(outcomes.size());
    for (auto& p : result.curve) {
      p.success /= static_cast<double>(outcomes.size());
      p.mean_u_prefuse /= static_cast<double>(outcomes.size());
      p.mean_u_fused /= static_cast<double>(outcomes.size());
    }
  }
  return result;
}

inline EvalResult evaluate(AgentKind kind, const PolicyNet* policy,
                           const edl::EvidentialClassifier& model, const bench::TestSet& test_set,
                           FusionKind fusion, const EvalConfig& cfg = {}) {
  return evaluate(kind, policy, FeatureRecognizer{&model}, test_set, fusion, cfg);
}

}  // namespace evar::agent
