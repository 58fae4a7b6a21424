#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "evar/cli/config.hpp"
#include "evar/num/checkpoint.hpp"

// Experiment orchestration behind the CLI. Commands are plain functions so
// the test suite can drive them in-process; exit codes follow the contract
// 0 = success, 1 = computation failure, 2 = usage or IO error.

namespace evar::cli {

inline constexpr int kCsvVersion = 1;

namespace detail {

inline void ensure_dir(const std::string& dir) {
  if (!dir.empty()) std::filesystem::create_directories(dir);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// resolved config plus a sidecar carrying the only timestamp we emit
inline void persist_config(const std::string& out_dir, const ExperimentConfig& cfg) {
  ensure_dir(out_dir);
  nlohmann::json j = cfg;
  write_text(out_dir + "/resolved_config.json", j.dump(2) + "\n");
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  nlohmann::json meta = {
      {"unix_time", std::chrono::duration_cast<std::chrono::seconds>(now).count()}};
  write_text(out_dir + "/run_info.json", meta.dump(2) + "\n");
}

inline std::string csv_header(const std::string& kind, const std::string& columns) {
  std::ostringstream os;
  os << "# evar-csv v" << kCsvVersion << " " << kind << "\n" << columns << "\n";
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// checkpoints
// ---------------------------------------------------------------------------

inline void save_recognizer(const std::string& path, const edl::EvidentialClassifier& model) {
  nlohmann::json meta = {
      {"kind", "recognizer"},
      {"feature_dim", model.feature_dim},
      {"class_count", model.class_count},
      {"hidden", model.hidden},
      {"activation", model.activation == num::EvidenceActivation::kClampedExp ? "exp" : "sigmoid"},
      {"evidence_scale", model.evidence_scale}};
  num::save_checkpoint(path, model.params, meta);
}

inline edl::EvidentialClassifier load_recognizer(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw num::CheckpointError("cannot open checkpoint: " + path);
  nlohmann::json j;
  probe >> j;
  const auto meta = j.value("meta", nlohmann::json::object());
  if (meta.value("kind", "") != "recognizer")
    throw num::CheckpointError("not a recognizer checkpoint: " + path);
  auto model = edl::EvidentialClassifier::create(
      meta.at("feature_dim").get<int>(), meta.at("class_count").get<int>(),
      meta.at("hidden").get<int>(),
      meta.value("activation", std::string("exp")) == "exp" ? num::EvidenceActivation::kClampedExp
                                                            : num::EvidenceActivation::kSigmoid,
      0);
  model.evidence_scale = meta.value("evidence_scale", 1.0);
  num::load_checkpoint(path, model.params);
  return model;
}

inline void save_policy(const std::string& path, const agent::PolicyNet& policy) {
  nlohmann::json meta = {{"kind", "policy"},
                         {"input_dim", policy.input_dim},
                         {"hidden", policy.hidden}};
  num::save_checkpoint(path, policy.params, meta);
}

inline agent::PolicyNet load_policy(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw num::CheckpointError("cannot open checkpoint: " + path);
  nlohmann::json j;
  probe >> j;
  const auto meta = j.value("meta", nlohmann::json::object());
  if (meta.value("kind", "") != "policy")
    throw num::CheckpointError("not a policy checkpoint: " + path);
  auto policy = agent::PolicyNet::create(meta.at("hidden").get<int>(), 0,
                                         meta.at("input_dim").get<int>());
  num::load_checkpoint(path, policy.params);
  return policy;
}

// ---------------------------------------------------------------------------
// gen-dataset
// ---------------------------------------------------------------------------

struct GenDatasetOptions {
  int n = 2000;
  std::uint64_t seed = 7;
  std::string out = "test_set.jsonl";
  std::string config_path;  // optional
};

inline int cmd_gen_dataset(const GenDatasetOptions& opt, std::ostream& log = std::cout) {
  ExperimentConfig cfg;
  try {
    if (!opt.config_path.empty()) cfg = load_config(opt.config_path);
  } catch (const std::exception& e) {
    std::cerr << "gen-dataset: " << e.what() << "\n";
    return 2;
  }
  try {
    auto ts = bench::generate_test_set(opt.n, opt.seed, cfg.world);
    bench::save_test_set(opt.out, ts);
    const auto dir = std::filesystem::path(opt.out).parent_path().string();
    cfg.seed = opt.seed;
    cfg.bench_instances = opt.n;
    cfg.resolve();
    detail::persist_config(dir.empty() ? "." : dir, cfg);
    log << bench::summary_csv(ts);
    log << "wrote " << ts.instances.size() << " instances to " << opt.out << "\n";
    return 0;
  } catch (const world::GenerationFailed& e) {
    std::cerr << "gen-dataset: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "gen-dataset: " << e.what() << "\n";
    return 2;
  }
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainOptions {
  std::string stage = "all";  // recognizer | policy | all
  std::string config_path;
  std::string out_dir = "train_out";
  bool resume = false;
};

inline std::string recognizer_metrics_csv(const edl::TrainResult& r) {
  std::ostringstream os;
  os << detail::csv_header("recognizer_metrics",
                           "epoch,loss,lambda_kl,train_acc,val_acc,mean_u_id,mean_u_ood");
  for (const auto& m : r.history)
    os << m.epoch << "," << m.loss << "," << m.lambda_kl << "," << m.train_acc << "," << m.val_acc
       << "," << m.mean_u_id << "," << m.mean_u_ood << "\n";
  return os.str();
}

inline std::string policy_metrics_csv(const agent::StageTwoResult& r) {
  std::ostringstream os;
  os << detail::csv_header("policy_metrics", "update,mean_episode_reward");
  for (std::size_t i = 0; i < r.reward_curve.size(); ++i)
    os << i << "," << r.reward_curve[i] << "\n";
  return os.str();
}

inline int cmd_train(const TrainOptions& opt, std::ostream& log = std::cout) {
  if (opt.stage != "recognizer" && opt.stage != "policy" && opt.stage != "all") {
    std::cerr << "train: unknown stage '" << opt.stage << "'\n";
    return 2;
  }
  ExperimentConfig cfg;
  try {
    if (!opt.config_path.empty()) cfg = load_config(opt.config_path);
    cfg.resolve();
    detail::ensure_dir(opt.out_dir);
    detail::persist_config(opt.out_dir, cfg);
  } catch (const std::exception& e) {
    std::cerr << "train: " << e.what() << "\n";
    return 2;
  }

  const std::string recognizer_path = opt.out_dir + "/recognizer.ckpt.json";
  const std::string policy_path = opt.out_dir + "/policy.ckpt.json";
  const bool want_recognizer = opt.stage == "recognizer" || opt.stage == "all";
  const bool want_policy = opt.stage == "policy" || opt.stage == "all";

  try {
    edl::EvidentialClassifier recognizer;
    bool have_recognizer = false;

    if (want_recognizer) {
      if (opt.resume && std::filesystem::exists(recognizer_path)) {
        log << "resume: recognizer checkpoint found, skipping stage 1\n";
        recognizer = load_recognizer(recognizer_path);
        have_recognizer = true;
      } else {
        auto result = agent::train_stage1(cfg.staged);
        if (result.diverged) {
          std::cerr << "train: recognizer diverged at epoch " << result.diverged_epoch
                    << " (seed " << cfg.staged.recognizer.seed << ")\n";
          return 1;
        }
        recognizer = result.model;
        have_recognizer = true;
        save_recognizer(recognizer_path, recognizer);
        detail::write_text(opt.out_dir + "/recognizer_metrics.csv",
                           recognizer_metrics_csv(result));
        const auto& last = result.history.back();
        log << "stage 1 done: val_acc=" << last.val_acc << " mean_u_id=" << last.mean_u_id
            << " mean_u_ood=" << last.mean_u_ood << "\n";
      }
    }

    if (want_policy) {
      if (!have_recognizer) {
        if (!std::filesystem::exists(recognizer_path)) {
          std::cerr << "train: stage 'policy' needs a recognizer checkpoint at "
                    << recognizer_path << " (run --stage recognizer first)\n";
          return 2;
        }
        recognizer = load_recognizer(recognizer_path);
      }
      if (opt.resume && std::filesystem::exists(policy_path)) {
        log << "resume: policy checkpoint found, nothing to do\n";
        return 0;
      }
      auto result = agent::train_stage2(cfg.staged, recognizer);
      save_policy(policy_path, result.policy);
      detail::write_text(opt.out_dir + "/policy_metrics.csv", policy_metrics_csv(result));
      log << "stage 2 done: mean reward " << result.reward_curve.front() << " -> "
          << result.reward_curve.back() << " over " << result.reward_curve.size() << " updates\n";
    }
    return 0;
  } catch (const agent::NonFiniteLoss& e) {
    std::cerr << "train: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "train: " << e.what() << "\n";
    return 1;
  }
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateOptions {
  std::vector<std::string> agents = {"ours"};
  std::vector<std::string> fusions = {"evidential"};
  std::vector<double> sigmas = {0.0};
  std::string testset_path;
  std::string recognizer_path;
  std::string policy_path;  // needed only for agent "ours"
  std::string out_dir = "eval_out";
  std::uint64_t seed = 99;
  int horizon = 10;
  int jobs = 1;
  int episode_log_limit = 0;  // > 0: log per-step opinions for that many episodes
};

inline nlohmann::json opinion_to_json(const sl::Opinion& op) {
  return nlohmann::json{
      {"k", op.class_count()}, {"beliefs", op.beliefs}, {"uncertainty", op.uncertainty}};
}

// JSONL episode log: one line per episode with the per-step opinion record
inline void write_episode_log(const std::string& path, const bench::TestSet& ts,
                              agent::AgentKind kind, const agent::PolicyNet* policy,
                              const edl::EvidentialClassifier& recognizer,
                              const agent::EvalConfig& cfg, int limit) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const std::size_t n = std::min<std::size_t>(limit, ts.instances.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& inst = ts.instances[i];
    const auto scene = world::generate_scene(inst.scene_seed, ts.world_config);
    Rng rng = Rng::stream(cfg.seed, i);
    agent::RolloutOptions ro;
    ro.horizon = cfg.horizon;
    ro.feature_noise_sigma = cfg.feature_noise_sigma;
    ro.greedy_policy = cfg.greedy_policy;
    const auto ep = agent::rollout(scene, inst.start, kind, policy, recognizer, rng, ro);
    nlohmann::json line = {{"v", kCsvVersion},
                           {"instance", i},
                           {"scene_seed", inst.scene_seed},
                           {"true_class", ep.true_class},
                           {"opinions", nlohmann::json::array()},
                           {"fused", opinion_to_json(ep.fused.back())},
                           {"prediction", sl::argmax_class(ep.fused.back())}};
    for (const auto& op : ep.opinions) line["opinions"].push_back(opinion_to_json(op));
    out << line.dump() << "\n";
  }
}

inline int cmd_evaluate(const EvaluateOptions& opt, std::ostream& log = std::cout) {
  bench::TestSet ts;
  edl::EvidentialClassifier recognizer;
  agent::PolicyNet policy;
  bool have_policy = false;
  try {
    ts = bench::load_test_set(opt.testset_path);
    recognizer = load_recognizer(opt.recognizer_path);
    for (const auto& name : opt.agents)
      if (agent::agent_from_name(name) == agent::AgentKind::kLearned) {
        policy = load_policy(opt.policy_path);
        have_policy = true;
      }
  } catch (const std::exception& e) {
    std::cerr << "evaluate: " << e.what() << "\n";
    return 2;
  }

  try {
    detail::ensure_dir(opt.out_dir);
    std::ostringstream eval_csv;
    eval_csv << detail::csv_header("evaluation", "agent,fusion,sigma,level,top1,top3,n");

    log << "agent        fusion      sigma  level     top1    top3      n   d(t1->tT)\n";
    for (const auto& agent_name : opt.agents) {
      const auto kind = agent::agent_from_name(agent_name);
      for (const auto& fusion_name : opt.fusions) {
        const auto fusion = agent::fusion_from_name(fusion_name);
        for (double sigma : opt.sigmas) {
          agent::EvalConfig ecfg;
          ecfg.horizon = opt.horizon;
          ecfg.feature_noise_sigma = sigma;
          ecfg.seed = opt.seed;
          ecfg.jobs = opt.jobs;
          const auto res = agent::evaluate(kind, have_policy ? &policy : nullptr, recognizer, ts,
                                           fusion, ecfg);

          auto emit = [&](const std::string& level, const agent::LevelMetrics& m) {
            eval_csv << agent_name << "," << fusion_name << "," << sigma << "," << level << ","
                     << m.top1() << "," << m.top3() << "," << m.n << "\n";
          };
          emit("easy", res.by_level[static_cast<int>(bench::Level::kEasy)]);
          emit("moderate", res.by_level[static_cast<int>(bench::Level::kModerate)]);
          emit("hard", res.by_level[static_cast<int>(bench::Level::kHard)]);
          emit("all", res.overall);

          std::ostringstream curve;
          curve << detail::csv_header("step_curve", "step,success,mean_u_prefuse,mean_u_fused");
          for (const auto& p : res.curve)
            curve << p.step << "," << p.success << "," << p.mean_u_prefuse << ","
                  << p.mean_u_fused << "\n";
          std::ostringstream sig;
          sig << sigma;
          detail::write_text(opt.out_dir + "/step_curve_" + agent_name + "_" + fusion_name + "_" +
                                 sig.str() + ".csv",
                             curve.str());

          if (opt.episode_log_limit > 0 && fusion == agent::FusionKind::kEvidential)
            write_episode_log(opt.out_dir + "/episodes_" + agent_name + "_" + sig.str() + ".jsonl",
                              ts, kind, have_policy ? &policy : nullptr, recognizer, ecfg,
                              opt.episode_log_limit);

          const double delta = res.curve.back().success - res.curve.front().success;
          char line[160];
          std::snprintf(line, sizeof(line),
                        "%-12s %-10s %5.1f  all     %6.3f  %6.3f  %5d   %+6.3f\n",
                        agent_name.c_str(), fusion_name.c_str(), sigma, res.overall.top1(),
                        res.overall.top3(), res.overall.n, delta);
          log << line;
          for (auto [name, lvl] : {std::pair{"easy", 2}, {"moderate", 1}, {"hard", 0}}) {
            std::snprintf(line, sizeof(line), "%-12s %-10s %5.1f  %-8s%6.3f  %6.3f  %5d\n", "",
                          "", sigma, name, res.by_level[lvl].top1(), res.by_level[lvl].top3(),
                          res.by_level[lvl].n);
            log << line;
          }
        }
      }
    }
    detail::write_text(opt.out_dir + "/evaluation.csv", eval_csv.str());
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "evaluate: " << e.what() << "\n";
    return 1;
  }
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportOptions {
  std::string in_dir = "eval_out";
  std::string out_path = "report.json";
};

inline int cmd_report(const ReportOptions& opt, std::ostream& log = std::cout) {
  namespace fs = std::filesystem;
  if (!fs::exists(opt.in_dir)) {
    std::cerr << "report: input directory does not exist: " << opt.in_dir << "\n";
    return 2;
  }
  nlohmann::json report;
  report["version"] = kCsvVersion;
  report["evaluations"] = nlohmann::json::array();
  report["step_curves"] = nlohmann::json::array();
  std::ostringstream dat;  // gnuplot-ready columns
  bool any = false;

  try {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(opt.in_dir))
      if (entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    for (const auto& path : files) {
      std::ifstream in(path);
      std::string header;
      std::getline(in, header);
      std::istringstream hs(header);
      std::string hash, tag, version_token, kind;
      hs >> hash >> tag >> version_token >> kind;
      if (hash != "#" || tag != "evar-csv") continue;  // not one of ours
      const int version =
          version_token.size() > 1 ? std::atoi(version_token.c_str() + 1) : -1;
      if (version != kCsvVersion)
        throw std::runtime_error("version mismatch in " + path.string() + ": " + version_token);
      std::string columns;
      std::getline(in, columns);
      any = true;

      if (kind == "evaluation") {
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          std::istringstream ls(line);
          std::string agent_name, fusion, level, field;
          double sigma, top1, top3;
          int n;
          std::getline(ls, agent_name, ',');
          std::getline(ls, fusion, ',');
          std::getline(ls, field, ',');
          sigma = std::atof(field.c_str());
          std::getline(ls, level, ',');
          std::getline(ls, field, ',');
          top1 = std::atof(field.c_str());
          std::getline(ls, field, ',');
          top3 = std::atof(field.c_str());
          std::getline(ls, field, ',');
          n = std::atoi(field.c_str());
          report["evaluations"].push_back({{"agent", agent_name},
                                           {"fusion", fusion},
                                           {"sigma", sigma},
                                           {"level", level},
                                           {"top1", top1},
                                           {"top3", top3},
                                           {"n", n}});
        }
      } else if (kind == "step_curve") {
        nlohmann::json curve = {{"file", path.filename().string()},
                                {"points", nlohmann::json::array()}};
        dat << "# " << path.filename().string() << "\n";
        dat << "# step success u_prefuse u_fused\n";
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          std::istringstream ls(line);
          std::string field;
          std::getline(ls, field, ',');
          const int step = std::atoi(field.c_str());
          std::getline(ls, field, ',');
          const double success = std::atof(field.c_str());
          std::getline(ls, field, ',');
          const double u_pre = std::atof(field.c_str());
          std::getline(ls, field, ',');
          const double u_fused = std::atof(field.c_str());
          curve["points"].push_back(
              {{"step", step}, {"success", success}, {"u_prefuse", u_pre}, {"u_fused", u_fused}});
          dat << step << " " << success << " " << u_pre << " " << u_fused << "\n";
        }
        dat << "\n\n";
        report["step_curves"].push_back(curve);
      }
    }

    if (!any) {
      log << "report: no versioned csv inputs found in " << opt.in_dir << ", writing empty report\n";
    }
    detail::write_text(opt.out_path, report.dump(2) + "\n");
    const std::string dat_path =
        (fs::path(opt.out_path).parent_path() / "report_step_curves.dat").string();
    detail::write_text(dat_path.empty() ? "report_step_curves.dat" : dat_path, dat.str());
    log << "wrote " << opt.out_path << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "report: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace evar::cli
