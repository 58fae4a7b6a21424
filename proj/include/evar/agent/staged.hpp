#pragma once

#include <vector>

#include "evar/agent/ppo.hpp"
#include "evar/bench/test_set.hpp"
#include "evar/edl/train.hpp"

// Staged training: the recognizer learns first from single observations
// gathered under the privileged fixation heuristic, then the policy trains
// against the frozen recognizer with the belief-in-true-class reward.

namespace evar::agent {

struct StagedConfig {
  world::WorldConfig world;
  std::uint64_t seed = 1;

  // stage 1: recognizer
  int stage1_instances = 600;
  int stage1_horizon = 10;
  double val_fraction = 0.2;
  edl::TrainConfig recognizer;
  double evidence_scale = 48.0;  // opinion calibration applied after training

  // stage 2: policy
  int updates = 750;
  int episodes_per_update = 64;
  int policy_hidden = 32;
  int horizon = 10;
  bool use_binary_reward = false;
  PpoConfig ppo;
  double policy_lr = 2e-2;
  double policy_momentum = 0.9;
  double policy_clip_norm = 5.0;
  bool anneal_lr = true;       // linear decay to zero across updates
  bool anneal_entropy = true;  // entropy bonus decays with the same schedule
};

struct TrainInstance {
  world::Scene scene;
  world::Pose start;
};

// Deterministic training-side instance sampler; the stream space is disjoint
// from test-set generation by construction (different mixing tags).
inline TrainInstance sample_train_instance(const world::WorldConfig& wcfg, std::uint64_t seed,
                                           std::uint64_t index) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    const std::uint64_t scene_seed =
        Rng::mix(seed ^ Rng::mix(0x7f2a1ULL + index * 131 + attempt));
    world::Scene scene;
    try {
      scene = world::generate_scene(scene_seed, wcfg);
    } catch (const world::GenerationFailed&) {
      continue;
    }
    Rng rng = Rng::stream(scene_seed, 0x57a27ULL);
    world::Pose start;
    if (!bench::sample_start(scene, rng, &start)) continue;
    return {std::move(scene), start};
  }
  throw world::GenerationFailed("sample_train_instance: no instance for index " +
                                std::to_string(index));
}

struct StageOneData {
  edl::Dataset train;
  edl::Dataset val;
  std::vector<num::Vec> ood;  // target-absent frames, metrics only
};

inline StageOneData collect_stage1_data(const StagedConfig& cfg) {
  StageOneData data;
  int sample_index = 0;
  for (int i = 0; i < cfg.stage1_instances; ++i) {
    TrainInstance inst = sample_train_instance(cfg.world, cfg.seed, i);
    Rng rng = Rng::stream(cfg.seed, 0xc0117ec7ULL + i);
    world::Pose pose = inst.start;
    for (int t = 0; t < cfg.stage1_horizon; ++t) {
      world::Observation obs = world::observe(inst.scene, pose, rng);
      if (obs.visible) {
        const bool to_val =
            (sample_index % std::max(2, static_cast<int>(1.0 / cfg.val_fraction))) == 0;
        auto& split = to_val ? data.val : data.train;
        split.features.push_back(std::move(obs.feature));
        split.labels.push_back(obs.true_class);
        ++sample_index;
      } else if (data.ood.size() < 2000) {
        data.ood.push_back(std::move(obs.feature));
      }
      if (t + 1 == cfg.stage1_horizon) break;
      pose = world::step(inst.scene, pose,
                         world::fixation_shortest_path_action(inst.scene, pose));
    }
  }
  return data;
}

inline edl::TrainResult train_stage1(const StagedConfig& cfg) {
  StageOneData data = collect_stage1_data(cfg);
  auto result = edl::train_recognizer(data.train, data.val, data.ood, cfg.world.feature_dim,
                                      cfg.world.class_count, cfg.recognizer);
  result.model.evidence_scale = cfg.evidence_scale;
  return result;
}

struct StageTwoResult {
  PolicyNet policy;
  std::vector<double> reward_curve;  // mean episodic reward per update
};

inline StageTwoResult train_stage2(const StagedConfig& cfg,
                                   const edl::EvidentialClassifier& recognizer) {
  StageTwoResult result;
  result.policy = PolicyNet::create(cfg.policy_hidden, Rng::mix(cfg.seed ^ 0x90110ULL));
  num::SgdMomentum opt{cfg.policy_lr, cfg.policy_momentum, cfg.policy_clip_norm, {}};
  Rng shuffle_rng = Rng::stream(cfg.seed, 0x5f7fULL);

  RolloutOptions opt_roll;
  opt_roll.horizon = cfg.horizon;
  opt_roll.use_binary_reward = cfg.use_binary_reward;

  PpoConfig ppo = cfg.ppo;
  for (int update = 0; update < cfg.updates; ++update) {
    const double frac = 1.0 - static_cast<double>(update) / cfg.updates;
    if (cfg.anneal_lr) opt.lr = cfg.policy_lr * frac;
    if (cfg.anneal_entropy) ppo.entropy_coef = cfg.ppo.entropy_coef * frac;
    std::vector<EpisodeResult> batch;
    batch.reserve(cfg.episodes_per_update);
    for (int e = 0; e < cfg.episodes_per_update; ++e) {
      const std::uint64_t episode_id =
          static_cast<std::uint64_t>(update) * cfg.episodes_per_update + e;
      TrainInstance inst = sample_train_instance(cfg.world, cfg.seed ^ 0xbea12ULL, episode_id);
      Rng rng = Rng::stream(cfg.seed, 0xe9150deULL + episode_id);
      batch.push_back(rollout(inst.scene, inst.start, AgentKind::kLearned, &result.policy,
                              recognizer, rng, opt_roll));
    }
    const PpoStats stats = ppo_update(result.policy, batch, ppo, opt, shuffle_rng, update);
    result.reward_curve.push_back(stats.mean_reward);
  }
  return result;
}

struct StagedResult {
  edl::TrainResult stage1;
  StageTwoResult stage2;
};

// Stage-1 failure surfaces before stage 2 begins; the recognizer passed to
// stage 2 is const and cannot be mutated by policy training.
inline StagedResult staged_train(const StagedConfig& cfg) {
  StagedResult result;
  result.stage1 = train_stage1(cfg);
  if (result.stage1.diverged)
    throw std::runtime_error("staged_train: recognizer diverged at epoch " +
                             std::to_string(result.stage1.diverged_epoch));
  result.stage2 = train_stage2(cfg, result.stage1.model);
  return result;
}

}  // namespace evar::agent
