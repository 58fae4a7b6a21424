#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "evar/agent/policy.hpp"
#include "evar/edl/classifier.hpp"
#include "evar/sl/opinion.hpp"
#include "evar/world/sensor.hpp"

namespace evar::agent {

enum class AgentKind { kLearned = 0, kRandom = 1, kFixation = 2, kSingleView = 3 };

inline const char* agent_name(AgentKind k) {
  switch (k) {
    case AgentKind::kLearned: return "ours";
    case AgentKind::kRandom: return "random";
    case AgentKind::kFixation: return "fixation";
    case AgentKind::kSingleView: return "single_view";
  }
  return "?";
}

inline AgentKind agent_from_name(const std::string& name) {
  if (name == "ours") return AgentKind::kLearned;
  if (name == "random") return AgentKind::kRandom;
  if (name == "fixation") return AgentKind::kFixation;
  if (name == "single_view") return AgentKind::kSingleView;
  throw std::invalid_argument("unknown agent kind: " + name);
}

// r^t = b^t_y: the per-step belief in the true class. Zero evidence (target
// absent) earns zero reward.
inline double compute_reward(const sl::Opinion& opinion, int true_class) {
  if (true_class < 0 || true_class >= opinion.class_count())
    throw std::invalid_argument("compute_reward: class out of range");
  return opinion.beliefs[true_class];
}

// ablation variant: 1 when the per-step argmax is correct, else 0
inline double binary_reward(const sl::Opinion& opinion, int true_class) {
  return sl::argmax_class(opinion) == true_class ? 1.0 : 0.0;
}

// Heuristic action sources: Random draws uniformly from the episode stream,
// Fixation delegates to the world heuristic, SingleView never acts.
inline std::optional<world::Action> baseline_action(AgentKind kind, const world::Scene& scene,
                                                    const world::Pose& pose, Rng& rng) {
  switch (kind) {
    case AgentKind::kRandom:
      return static_cast<world::Action>(rng.uniform_int(world::kActionCount));
    case AgentKind::kFixation:
      return world::fixation_shortest_path_action(scene, pose);
    case AgentKind::kSingleView:
      return std::nullopt;
    case AgentKind::kLearned:
      throw std::invalid_argument("baseline_action: learned agent is not a baseline");
  }
  return std::nullopt;
}

struct StepRecord {
  num::Vec features;   // policy input at this step
  int action = 0;
  double logprob = 0.0;
  double value = 0.0;
  double reward = 0.0;  // for the observation following the action
  double advantage = 0.0;
  double ret = 0.0;
};

struct EpisodeResult {
  std::vector<StepRecord> steps;      // horizon-1 transitions (empty for single view)
  std::vector<sl::Opinion> opinions;  // per-step opinions, one per observation
  std::vector<sl::Opinion> fused;     // evidential fold of opinions up to t
  int true_class = 0;
  double reward_sum = 0.0;
};

struct RolloutOptions {
  int horizon = 10;                  // T observations
  double feature_noise_sigma = 0.0;  // in units of sigma_min
  bool use_binary_reward = false;
  bool greedy_policy = false;  // argmax actions instead of sampling (evaluation)
};

// Anything mapping an observation to an opinion can drive an episode; the
// production path wraps the evidential classifier, tests may substitute an
// oracle.
template <typename R>
concept Recognizer = requires(const R& r, const world::Observation& obs) {
  { r.opinion_for(obs) } -> std::convertible_to<sl::Opinion>;
};

struct FeatureRecognizer {
  const edl::EvidentialClassifier* model = nullptr;
  sl::Opinion opinion_for(const world::Observation& obs) const {
    return model->opinion(obs.feature);
  }
};

// One episode: observe -> evidence -> opinion -> (act, reward) x (T-1).
// Everything is driven by the one supplied stream, so a (seed, instance)
// pair fully determines the trajectory.
template <Recognizer R>
inline EpisodeResult rollout(const world::Scene& scene, const world::Pose& start, AgentKind kind,
                             const PolicyNet* policy, const R& recognizer, Rng& rng,
                             const RolloutOptions& opt = {}) {
  if (kind == AgentKind::kLearned && policy == nullptr)
    throw std::invalid_argument("rollout: learned agent needs a policy");
  if (opt.horizon < 2 && kind != AgentKind::kSingleView)
    throw std::invalid_argument("rollout: horizon must be >= 2");

  EpisodeResult ep;
  ep.true_class = scene.target_class;
  world::Pose pose = start;
  num::Vec h = policy ? policy->initial_state() : num::Vec{};
  int prev_action = -1;

  const int total_obs = kind == AgentKind::kSingleView ? 1 : opt.horizon;
  for (int t = 0; t < total_obs; ++t) {
    world::Observation obs = world::observe(scene, pose, rng);
    if (opt.feature_noise_sigma > 0.0) {
      const double noise = opt.feature_noise_sigma * scene.config.sigma_min;
      for (double& v : obs.feature) v += noise * rng.normal();
    }
    const sl::Opinion opinion = recognizer.opinion_for(obs);
    ep.opinions.push_back(opinion);
    ep.fused.push_back(t == 0 ? opinion : sl::fuse_pair(ep.fused.back(), opinion));

    if (t > 0 && !ep.steps.empty()) {
      // reward for the action that produced this observation
      StepRecord& prev = ep.steps.back();
      prev.reward = opt.use_binary_reward ? binary_reward(opinion, ep.true_class)
                                          : compute_reward(opinion, ep.true_class);
      ep.reward_sum += prev.reward;
    }
    if (t == total_obs - 1) break;

    StepRecord rec;
    if (kind == AgentKind::kLearned) {
      rec.features = policy_features(obs, opinion, prev_action, scene.config.range_m,
                                     world::forward_clearance(scene, pose, kClearanceCells));
      auto eval = policy->eval_step(rec.features, h);
      h = eval.h;
      if (opt.greedy_policy) {
        rec.action = 0;
        for (int a = 1; a < static_cast<int>(eval.logp.size()); ++a)
          if (eval.logp[a] > eval.logp[rec.action]) rec.action = a;
      } else {
        rec.action = policy->sample_action(eval.logp, rng);
      }
      rec.logprob = eval.logp[rec.action];
      rec.value = eval.value;
    } else {
      rec.action = static_cast<int>(*baseline_action(kind, scene, pose, rng));
    }
    pose = world::step(scene, pose, static_cast<world::Action>(rec.action));
    prev_action = rec.action;
    ep.steps.push_back(std::move(rec));
  }
  return ep;
}

inline EpisodeResult rollout(const world::Scene& scene, const world::Pose& start, AgentKind kind,
                             const PolicyNet* policy, const edl::EvidentialClassifier& model,
                             Rng& rng, const RolloutOptions& opt = {}) {
  return rollout(scene, start, kind, policy, FeatureRecognizer{&model}, rng, opt);
}

// Generalized advantage estimation over one finite episode; the terminal
// value is zero. gamma = lambda = 1 reduces to Monte-Carlo minus value.
inline void gae_advantages(EpisodeResult& ep, double gamma, double lambda) {
  double next_adv = 0.0;
  double next_value = 0.0;
  for (int t = static_cast<int>(ep.steps.size()) - 1; t >= 0; --t) {
    StepRecord& s = ep.steps[t];
    const double delta = s.reward + gamma * next_value - s.value;
    next_adv = delta + gamma * lambda * next_adv;
    s.advantage = next_adv;
    s.ret = s.advantage + s.value;
    next_value = s.value;
  }
}

}  // namespace evar::agent
