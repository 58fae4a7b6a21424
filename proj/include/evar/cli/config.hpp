#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "evar/agent/evaluate.hpp"
#include "evar/agent/staged.hpp"
#include "evar/world/config_io.hpp"

namespace evar::cli {

inline constexpr int kConfigVersion = 1;

struct ConfigError final : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything one experiment needs: the world, dataset size, both training
// stages and the evaluation matrix. Serialized verbatim next to all outputs.
struct ExperimentConfig {
  std::uint64_t seed = 7;
  world::WorldConfig world;
  int bench_instances = 2000;
  agent::StagedConfig staged;  // world/seed mirrored in resolve()
  std::vector<std::string> eval_agents = {"ours", "fixation", "random", "single_view"};
  std::vector<std::string> eval_fusions = {"evidential"};
  std::vector<double> eval_sigmas = {0.0};
  int horizon = 10;
  int jobs = 1;

  void resolve() {
    staged.world = world;
    staged.seed = seed;
    staged.horizon = horizon;
    staged.recognizer.seed = Rng::mix(seed ^ 0x2ec0ULL);
  }

  void validate() const {
    world.validate();
    if (bench_instances < 1) throw ConfigError("config: bench_instances must be >= 1");
    if (horizon < 2) throw ConfigError("config: horizon must be >= 2");
    if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
    for (const auto& a : eval_agents) agent::agent_from_name(a);
    for (const auto& f : eval_fusions) agent::fusion_from_name(f);
    for (double s : eval_sigmas)
      if (s < 0.0) throw ConfigError("config: sigma must be >= 0");
  }
};

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{
      {"version", kConfigVersion},
      {"seed", c.seed},
      {"world", c.world},
      {"bench", {{"instances", c.bench_instances}}},
      {"recognizer",
       {{"epochs", c.staged.recognizer.epochs},
        {"batch_size", c.staged.recognizer.batch_size},
        {"lr", c.staged.recognizer.lr},
        {"momentum", c.staged.recognizer.momentum},
        {"clip_norm", c.staged.recognizer.clip_norm},
        {"anneal_epochs", c.staged.recognizer.anneal_epochs},
        {"hidden", c.staged.recognizer.hidden},
        {"activation",
         c.staged.recognizer.activation == num::EvidenceActivation::kClampedExp ? "exp" : "sigmoid"},
        {"stage1_instances", c.staged.stage1_instances},
        {"evidence_scale", c.staged.evidence_scale}}},
      {"policy",
       {{"updates", c.staged.updates},
        {"episodes_per_update", c.staged.episodes_per_update},
        {"hidden", c.staged.policy_hidden},
        {"lr", c.staged.policy_lr},
        {"momentum", c.staged.policy_momentum},
        {"clip_norm", c.staged.policy_clip_norm},
        {"anneal_lr", c.staged.anneal_lr},
        {"anneal_entropy", c.staged.anneal_entropy},
        {"binary_reward", c.staged.use_binary_reward},
        {"ppo",
         {{"clip", c.staged.ppo.clip},
          {"epochs", c.staged.ppo.epochs},
          {"minibatch", c.staged.ppo.minibatch},
          {"entropy_coef", c.staged.ppo.entropy_coef},
          {"value_coef", c.staged.ppo.value_coef},
          {"gamma", c.staged.ppo.gamma},
          {"gae_lambda", c.staged.ppo.gae_lambda}}}}},
      {"eval",
       {{"agents", c.eval_agents}, {"fusions", c.eval_fusions}, {"sigmas", c.eval_sigmas}}},
      {"horizon", c.horizon},
      {"jobs", c.jobs}};
}

inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  if (j.contains("version") && j["version"].get<int>() != kConfigVersion)
    throw ConfigError("config: unsupported version");
  ExperimentConfig defaults;
  c.seed = j.value("seed", defaults.seed);
  if (j.contains("world")) c.world = j["world"].get<world::WorldConfig>();
  if (j.contains("bench")) c.bench_instances = j["bench"].value("instances", defaults.bench_instances);
  if (j.contains("recognizer")) {
    const auto& r = j["recognizer"];
    c.staged.recognizer.epochs = r.value("epochs", defaults.staged.recognizer.epochs);
    c.staged.recognizer.batch_size = r.value("batch_size", defaults.staged.recognizer.batch_size);
    c.staged.recognizer.lr = r.value("lr", defaults.staged.recognizer.lr);
    c.staged.recognizer.momentum = r.value("momentum", defaults.staged.recognizer.momentum);
    c.staged.recognizer.clip_norm = r.value("clip_norm", defaults.staged.recognizer.clip_norm);
    c.staged.recognizer.anneal_epochs =
        r.value("anneal_epochs", defaults.staged.recognizer.anneal_epochs);
    c.staged.recognizer.hidden = r.value("hidden", defaults.staged.recognizer.hidden);
    const std::string act = r.value("activation", std::string("exp"));
    if (act == "exp") {
      c.staged.recognizer.activation = num::EvidenceActivation::kClampedExp;
    } else if (act == "sigmoid") {
      c.staged.recognizer.activation = num::EvidenceActivation::kSigmoid;
    } else {
      throw ConfigError("config: unknown activation " + act);
    }
    c.staged.stage1_instances = r.value("stage1_instances", defaults.staged.stage1_instances);
    c.staged.evidence_scale = r.value("evidence_scale", defaults.staged.evidence_scale);
  }
  if (j.contains("policy")) {
    const auto& p = j["policy"];
    c.staged.updates = p.value("updates", defaults.staged.updates);
    c.staged.episodes_per_update =
        p.value("episodes_per_update", defaults.staged.episodes_per_update);
    c.staged.policy_hidden = p.value("hidden", defaults.staged.policy_hidden);
    c.staged.policy_lr = p.value("lr", defaults.staged.policy_lr);
    c.staged.policy_momentum = p.value("momentum", defaults.staged.policy_momentum);
    c.staged.policy_clip_norm = p.value("clip_norm", defaults.staged.policy_clip_norm);
    c.staged.anneal_lr = p.value("anneal_lr", defaults.staged.anneal_lr);
    c.staged.anneal_entropy = p.value("anneal_entropy", defaults.staged.anneal_entropy);
    c.staged.use_binary_reward = p.value("binary_reward", defaults.staged.use_binary_reward);
    if (p.contains("ppo")) {
      const auto& q = p["ppo"];
      c.staged.ppo.clip = q.value("clip", defaults.staged.ppo.clip);
      c.staged.ppo.epochs = q.value("epochs", defaults.staged.ppo.epochs);
      c.staged.ppo.minibatch = q.value("minibatch", defaults.staged.ppo.minibatch);
      c.staged.ppo.entropy_coef = q.value("entropy_coef", defaults.staged.ppo.entropy_coef);
      c.staged.ppo.value_coef = q.value("value_coef", defaults.staged.ppo.value_coef);
      c.staged.ppo.gamma = q.value("gamma", defaults.staged.ppo.gamma);
      c.staged.ppo.gae_lambda = q.value("gae_lambda", defaults.staged.ppo.gae_lambda);
    }
  }
  if (j.contains("eval")) {
    const auto& e = j["eval"];
    c.eval_agents = e.value("agents", defaults.eval_agents);
    c.eval_fusions = e.value("fusions", defaults.eval_fusions);
    c.eval_sigmas = e.value("sigmas", defaults.eval_sigmas);
  }
  c.horizon = j.value("horizon", defaults.horizon);
  c.jobs = j.value("jobs", defaults.jobs);
  c.resolve();
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: malformed JSON in " + path + ": " + e.what());
  }
  ExperimentConfig c = j.get<ExperimentConfig>();
  c.validate();
  return c;
}

}  // namespace evar::cli
