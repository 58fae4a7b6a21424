// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "evar/agent/evaluate.hpp"
#include "evar/agent/staged.hpp"
#include "evar/bench/test_set.hpp"
#include "evar/num/grad_check.hpp"
#include "evar/sl/hyper_mass.hpp"

using namespace evar;
using num::Vec;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail, double seconds) {
  std::printf("[%s] criterion %2d: %-28s %s  (%.1fs)\n", pass ? "PASS" : "FAIL", id, name,
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

sl::Opinion random_opinion(Rng& rng, int k) {
  sl::EvidenceVector ev;
  ev.evidence.resize(k);
  for (double& e : ev.evidence) e = rng.uniform(0.0, 20.0);
  return sl::opinion_from_evidence(ev);
}

double opinion_distance(const sl::Opinion& a, const sl::Opinion& b) {
  double d = std::abs(a.uncertainty - b.uncertainty);
  for (int i = 0; i < a.class_count(); ++i)
    d = std::max(d, std::abs(a.beliefs[i] - b.beliefs[i]));
  return d;
}

// ---------------------------------------------------------------------------
// criterion 1: fuse_pair vs exact Dempster enumeration
// ---------------------------------------------------------------------------
void criterion_1() {
  const double t0 = now_seconds();
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + rng.uniform_int(5);
    auto a = random_opinion(rng, k);
    auto b = random_opinion(rng, k);
    auto fast = sl::fuse_pair(a, b);
    auto slow = sl::opinion_from_hyper(
        sl::brute_force_dempster(sl::hyper_from_opinion(a), sl::hyper_from_opinion(b)));
    worst = std::max(worst, opinion_distance(fast, slow));
  }
  const double dt = now_seconds() - t0;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max component error %.2e (tol 1e-12)", worst);
  report(1, "fusion oracle equivalence", worst <= 1e-12 && dt < 5.0, buf, dt);
}

// ---------------------------------------------------------------------------
// criterion 2: subjective-logic invariant suite
// ---------------------------------------------------------------------------
void criterion_2() {
  const double t0 = now_seconds();
  Rng rng(17);
  bool ok = true;
  std::string detail = "normalization, commutativity, neutrality, contraction, permutation ok";
  for (int trial = 0; trial < 10000 && ok; ++trial) {
    const int k = 2 + rng.uniform_int(5);
    auto a = random_opinion(rng, k);
    auto b = random_opinion(rng, k);
    auto ab = sl::fuse_pair(a, b);
    if (std::abs(ab.belief_sum() + ab.uncertainty - 1.0) > 1e-12) {
      ok = false;
      detail = "normalization violated";
    }
    if (opinion_distance(ab, sl::fuse_pair(b, a)) != 0.0) {
      ok = false;
      detail = "commutativity violated";
    }
    if (ab.uncertainty > std::min(a.uncertainty, b.uncertainty) + 1e-12) {
      ok = false;
      detail = "uncertainty contraction violated";
    }
    auto vac = sl::Opinion::vacuous(k);
    if (opinion_distance(sl::fuse_pair(a, vac), a) > 1e-15 ||
        opinion_distance(sl::fuse_pair(vac, a), a) > 1e-15) {
      ok = false;
      detail = "vacuous neutrality violated";
    }
  }
  for (int trial = 0; trial < 100 && ok; ++trial) {
    const int k = 2 + rng.uniform_int(3);
    const int len = 2 + rng.uniform_int(9);
    std::vector<sl::Opinion> ops;
    for (int i = 0; i < len; ++i) ops.push_back(random_opinion(rng, k));
    auto ref = sl::fuse_sequence(ops);
    auto shuffled = ops;
    for (std::size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[rng.uniform_int(static_cast<int>(i))]);
    if (opinion_distance(sl::fuse_sequence(shuffled), ref) > 1e-9) {
      ok = false;
      detail = "permutation invariance violated";
    }
  }
  const double dt = now_seconds() - t0;
  report(2, "subjective-logic invariants", ok && dt < 10.0, detail, dt);
}

// ---------------------------------------------------------------------------
// criterion 3: losses and every analytic gradient vs finite differences
// ---------------------------------------------------------------------------
agent::EpisodeResult synthetic_ppo_episode(Rng& rng, int steps, const agent::PolicyNet& policy) {
  agent::EpisodeResult ep;
  Vec h = policy.initial_state();
  for (int t = 0; t < steps; ++t) {
    agent::StepRecord s;
    s.features.resize(agent::kStateFeatureDim);
    for (double& v : s.features) v = rng.uniform();
    auto eval = policy.eval_step(s.features, h);
    h = eval.h;
    s.action = rng.uniform_int(world::kActionCount);
    s.logprob = eval.logp[s.action];
    s.value = eval.value;
    s.reward = rng.uniform();
    ep.steps.push_back(std::move(s));
  }
  return ep;
}

void criterion_3() {
  const double t0 = now_seconds();
  bool ok = true;
  std::string detail;

  // frozen loss values
  const double edl_err = std::abs(edl::edl_loss(Vec{3.0, 2.0, 1.0}, 0) - 0.6931471805599453);
  const double kl_err = std::abs(edl::kl_regularizer(Vec{3.0, 2.0, 1.0}, 0) - 0.26527895533477636);
  if (edl_err > 1e-9 || kl_err > 1e-9) {
    ok = false;
    detail = "frozen loss values off";
  }

  double worst = 0.0;
  // loss gradients w.r.t. alpha
  {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      const int k = 3 + rng.uniform_int(4);
      Vec alpha(k);
      for (double& a : alpha) a = 1.05 + rng.uniform(0.0, 8.0);
      const int y = rng.uniform_int(k);
      const double lambda = rng.uniform();
      auto f = [&](const Vec& a) { return edl::total_loss(a, y, lambda); };
      worst = std::max(worst,
                       num::finite_diff_check(f, alpha, edl::total_loss_grad(alpha, y, lambda)));
    }
  }
  // classifier layer stack
  {
    for (int trial = 0; trial < 20; ++trial) {
      Rng rng(500 + trial);
      auto model = edl::EvidentialClassifier::create(
          6, 4, 8,
          trial % 2 ? num::EvidenceActivation::kSigmoid : num::EvidenceActivation::kClampedExp,
          900 + trial);
      Vec x(6);
      for (double& v : x) v = rng.normal();
      const int y = rng.uniform_int(4);
      const double lambda = rng.uniform();
      auto loss_at = [&](const Vec& flat) {
        auto tmp = model;
        tmp.params.unpack_values(flat);
        return edl::total_loss(tmp.alpha(x), y, lambda);
      };
      model.params.zero_grad();
      edl::EvidentialClassifier::Cache cache;
      Vec evidence = model.forward(x, &cache);
      Vec alpha = evidence;
      for (double& a : alpha) a += 1.0;
      model.backward(cache, edl::total_loss_grad(alpha, y, lambda));
      worst = std::max(worst, num::finite_diff_check(loss_at, model.params.pack_values(),
                                                     model.params.pack_grads()));
    }
  }
  // gru cell
  {
    for (int trial = 0; trial < 20; ++trial) {
      Rng rng(7000 + trial);
      num::ParamSet ps;
      auto cell = num::GruCell::create(ps, "gru", 5, 6);
      cell.init(ps, rng, 0.3);
      Vec x0(5), x1(5), target(6), h0(6);
      for (double& v : x0) v = 0.7 * rng.normal();
      for (double& v : x1) v = 0.7 * rng.normal();
      for (double& v : target) v = rng.normal();
      for (double& v : h0) v = 0.8 * rng.normal();
      auto loss_at = [&](const Vec& flat) {
        num::ParamSet tmp = ps;
        tmp.unpack_values(flat);
        Vec h1 = cell.forward(tmp, x0, h0);
        Vec h2 = cell.forward(tmp, x1, h1);
        double s = 0.0;
        for (int i = 0; i < 6; ++i) s += (h2[i] - target[i]) * (h2[i] - target[i]);
        return 0.5 * s;
      };
      ps.zero_grad();
      num::GruCell::Cache c1, c2;
      Vec h1 = cell.forward(ps, x0, h0, &c1);
      Vec h2 = cell.forward(ps, x1, h1, &c2);
      Vec gh2(6);
      for (int i = 0; i < 6; ++i) gh2[i] = h2[i] - target[i];
      Vec gh1 = cell.backward(ps, c2, gh2);
      cell.backward(ps, c1, gh1);
      worst = std::max(worst, num::finite_diff_check(loss_at, ps.pack_values(), ps.pack_grads()));
    }
  }
  // ppo surrogate
  {
    for (int trial = 0; trial < 20; ++trial) {
      auto policy = agent::PolicyNet::create(6, 100 + trial);
      Rng rng(300 + trial);
      for (auto& p : policy.params.params)
        for (double& v : p.value) v = 0.4 * rng.normal();
      auto ep = synthetic_ppo_episode(rng, 4, policy);
      for (auto& s : ep.steps) {
        s.advantage = rng.normal();
        s.ret = s.value + 0.3 * rng.normal();
      }
      for (auto& p : policy.params.params)
        for (double& v : p.value) v += 0.02 * rng.normal();
      agent::PpoConfig cfg;
      std::vector<const agent::EpisodeResult*> eps = {&ep};
      auto loss_at = [&](const Vec& flat) {
        auto tmp = policy;
        tmp.params.unpack_values(flat);
        return agent::ppo_loss_and_backward(tmp, eps, cfg, false);
      };
      policy.params.zero_grad();
      agent::ppo_loss_and_backward(policy, eps, cfg, true);
      worst = std::max(worst, num::finite_diff_check(loss_at, policy.params.pack_values(),
                                                     policy.params.pack_grads()));
    }
  }
  if (worst > 1e-5) ok = false;
  const double dt = now_seconds() - t0;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "ln2 err %.1e, KL err %.1e, worst grad rel err %.2e (tol 1e-5)",
                edl_err, kl_err, worst);
  report(3, "loss/gradient suite", ok && dt < 30.0, detail.empty() ? buf : detail, dt);
}

// ---------------------------------------------------------------------------
// criterion 4: recognizer training on the synthetic prototype task
// ---------------------------------------------------------------------------
void criterion_4() {
  const double t0 = now_seconds();
  Rng rng(42);
  const int d = 16, k = 8, n = 4000;
  std::vector<Vec> protos(k);
  for (auto& p : protos) {
    p.resize(d);
    double n2 = 0.0;
    for (double& v : p) {
      v = rng.normal();
      n2 += v * v;
    }
    for (double& v : p) v /= std::sqrt(n2);
  }
  edl::Dataset train, val;
  const int n_val = n / 5;
  for (int i = 0; i < n; ++i) {
    const int y = rng.uniform_int(k);
    Vec x = protos[y];
    for (double& v : x) v += 0.25 * rng.normal();
    auto& split = i < n - n_val ? train : val;
    split.features.push_back(std::move(x));
    split.labels.push_back(y);
  }
  std::vector<Vec> ood;
  for (int i = 0; i < 400; ++i) {
    Vec x(d);
    for (double& v : x) v = rng.normal();
    ood.push_back(std::move(x));
  }
  edl::TrainConfig cfg;
  cfg.epochs = 40;
  cfg.seed = 7;
  auto result = edl::train_recognizer(train, val, ood, d, k, cfg);
  const auto& last = result.history.back();
  const bool ok = !result.diverged && last.val_acc >= 0.95 &&
                  last.mean_u_ood >= last.mean_u_id + 0.2;
  const double dt = now_seconds() - t0;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "val_acc %.3f (>=0.95), u_ood %.3f >= u_id %.3f + 0.2",
                last.val_acc, last.mean_u_ood, last.mean_u_id);
  report(4, "recognizer training", ok && dt < 180.0, buf, dt);
}

// ---------------------------------------------------------------------------
// shared artifacts for criteria 5-9
// ---------------------------------------------------------------------------
struct SeedRun {
  edl::TrainResult stage1;
  agent::StageTwoResult ours;
  agent::StageTwoResult binary;
};

struct PipelineArtifacts {
  bench::TestSet test_set;
  std::vector<SeedRun> runs;  // one per seed
  agent::StagedConfig base_config;
};

PipelineArtifacts build_pipeline(int seeds) {
  PipelineArtifacts art;
  art.base_config = agent::StagedConfig{};
  art.base_config.recognizer.epochs = 40;
  art.test_set = bench::generate_test_set(2000, 424242, art.base_config.world);
  for (int s = 1; s <= seeds; ++s) {
    agent::StagedConfig cfg = art.base_config;
    cfg.seed = s;
    cfg.recognizer.seed = s * 31 + 5;
    SeedRun run;
    run.stage1 = agent::train_stage1(cfg);
    if (run.stage1.diverged) throw std::runtime_error("stage 1 diverged");
    run.ours = agent::train_stage2(cfg, run.stage1.model);
    agent::StagedConfig bin = cfg;
    bin.use_binary_reward = true;
    run.binary = agent::train_stage2(bin, run.stage1.model);
    std::printf("  .. seed %d trained (%zu updates)\n", s, run.ours.reward_curve.size());
    art.runs.push_back(std::move(run));
    std::fflush(stdout);
  }
  return art;
}

agent::EvalResult eval_run(const PipelineArtifacts& art, const SeedRun& run, agent::AgentKind kind,
                           agent::FusionKind fusion, double sigma, bool binary_policy = false) {
  agent::EvalConfig cfg;
  cfg.seed = 99;
  cfg.feature_noise_sigma = sigma;
  const agent::PolicyNet* policy = nullptr;
  if (kind == agent::AgentKind::kLearned)
    policy = binary_policy ? &run.binary.policy : &run.ours.policy;
  return agent::evaluate(kind, policy, run.stage1.model, art.test_set, fusion, cfg);
}

void criterion_5(const PipelineArtifacts& art, std::vector<agent::EvalResult>& ours_results) {
  const double t0 = now_seconds();
  double ours = 0, fixation = 0, random_pol = 0, single = 0, hard_delta = 0;
  const double n = art.runs.size();
  for (const auto& run : art.runs) {
    auto r_ours = eval_run(art, run, agent::AgentKind::kLearned, agent::FusionKind::kEvidential, 0);
    auto r_fix = eval_run(art, run, agent::AgentKind::kFixation, agent::FusionKind::kEvidential, 0);
    auto r_rnd = eval_run(art, run, agent::AgentKind::kRandom, agent::FusionKind::kEvidential, 0);
    auto r_sv =
        eval_run(art, run, agent::AgentKind::kSingleView, agent::FusionKind::kEvidential, 0);
    ours += r_ours.overall.top1() / n;
    fixation += r_fix.overall.top1() / n;
    random_pol += r_rnd.overall.top1() / n;
    single += r_sv.overall.top1() / n;

    // hard-level success at t=1 vs t=10 (fused-so-far, hard instances only)
    double h1 = 0, h10 = 0;
    int nh = 0;
    for (std::size_t i = 0; i < art.test_set.instances.size(); ++i) {
      const auto& inst = art.test_set.instances[i];
      if (inst.record.level != bench::Level::kHard) continue;
      auto scene = world::generate_scene(inst.scene_seed, art.test_set.world_config);
      Rng rng = Rng::stream(99, i);
      agent::RolloutOptions ro;
      ro.greedy_policy = true;
      auto ep = agent::rollout(scene, inst.start, agent::AgentKind::kLearned, &run.ours.policy,
                               run.stage1.model, rng, ro);
      ++nh;
      if (sl::argmax_class(ep.fused.front()) == ep.true_class) h1 += 1;
      if (sl::argmax_class(ep.fused.back()) == ep.true_class) h10 += 1;
    }
    hard_delta += (h10 - h1) / std::max(1, nh) / n;
    ours_results.push_back(std::move(r_ours));
  }
  const bool ok = ours >= fixation + 0.02 && ours >= random_pol + 0.05 && ours >= single &&
                  hard_delta > 0.0;
  const double dt = now_seconds() - t0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "ours %.3f vs fixation %.3f (+%.1fpt), random %.3f (+%.1fpt), single %.3f; hard "
                "d(t1->t10) %+.3f",
                ours, fixation, 100 * (ours - fixation), random_pol, 100 * (ours - random_pol),
                single, hard_delta);
  report(5, "policy ordering", ok && dt < 1200.0, buf, dt);
}

void criterion_6(const PipelineArtifacts& art, const std::vector<agent::EvalResult>& ours_results) {
  const double t0 = now_seconds();
  bool monotone_success = true, monotone_u = true;
  // seed-averaged smoothed success curve, 1pt tolerance
  const std::size_t steps = ours_results.front().curve.size();
  std::vector<double> success(steps, 0.0), fused_u(steps, 0.0);
  for (const auto& r : ours_results)
    for (std::size_t t = 0; t < steps; ++t) {
      success[t] += r.curve[t].success / ours_results.size();
      fused_u[t] += r.curve[t].mean_u_fused / ours_results.size();
    }
  auto smooth = [&](const std::vector<double>& v, std::size_t t) {
    const std::size_t lo = t > 0 ? t - 1 : 0;
    const std::size_t hi = std::min(steps - 1, t + 1);
    double s = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) s += v[i];
    return s / static_cast<double>(hi - lo + 1);
  };
  for (std::size_t t = 1; t < steps; ++t) {
    if (smooth(success, t) < smooth(success, t - 1) - 0.01) monotone_success = false;
    if (fused_u[t] > fused_u[t - 1] + 1e-12) monotone_u = false;
  }
  // per-episode exact non-increase on a sample of episodes
  const auto& run = art.runs.front();
  for (std::size_t i = 0; i < 200 && monotone_u; ++i) {
    const auto& inst = art.test_set.instances[i];
    auto scene = world::generate_scene(inst.scene_seed, art.test_set.world_config);
    Rng rng = Rng::stream(99, i);
    agent::RolloutOptions ro;
    ro.greedy_policy = true;
    auto ep = agent::rollout(scene, inst.start, agent::AgentKind::kLearned, &run.ours.policy,
                             run.stage1.model, rng, ro);
    for (std::size_t t = 1; t < ep.fused.size(); ++t)
      if (ep.fused[t].uncertainty > ep.fused[t - 1].uncertainty + 1e-12) monotone_u = false;
  }
  const double dt = now_seconds() - t0;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "success %.3f->%.3f smoothed-monotone %s, fused u monotone %s",
                success.front(), success.back(), monotone_success ? "yes" : "NO",
                monotone_u ? "yes" : "NO");
  report(6, "step-curve property", monotone_success && monotone_u, buf, dt);
}

void criterion_7(const PipelineArtifacts& art) {
  const double t0 = now_seconds();
  double usum[3] = {0, 0, 0};
  int count[3] = {0, 0, 0};
  for (const auto& run : art.runs) {
    for (std::size_t i = 0; i < art.test_set.instances.size(); ++i) {
      const auto& inst = art.test_set.instances[i];
      auto scene = world::generate_scene(inst.scene_seed, art.test_set.world_config);
      Rng rng = Rng::stream(99, i);
      agent::RolloutOptions ro;
      ro.greedy_policy = true;
      auto ep = agent::rollout(scene, inst.start, agent::AgentKind::kLearned, &run.ours.policy,
                               run.stage1.model, rng, ro);
      double u = 0.0;
      for (const auto& op : ep.opinions) u += op.uncertainty;
      const int lvl = static_cast<int>(inst.record.level);
      usum[lvl] += u / ep.opinions.size();
      ++count[lvl];
    }
  }
  const double u_easy = usum[2] / count[2];
  const double u_mod = usum[1] / count[1];
  const double u_hard = usum[0] / count[0];
  const bool ok = u_mod >= u_easy + 0.02 && u_hard >= u_mod + 0.02;
  const double dt = now_seconds() - t0;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "mean u easy %.3f < moderate %.3f < hard %.3f (margins >= 0.02)",
                u_easy, u_mod, u_hard);
  report(7, "uncertainty vs difficulty", ok, buf, dt);
}

void criterion_8(const PipelineArtifacts& art) {
  const double t0 = now_seconds();
  const agent::FusionKind alternatives[] = {agent::FusionKind::kAverage, agent::FusionKind::kVote,
                                            agent::FusionKind::kLastStep,
                                            agent::FusionKind::kMaxPrediction};
  double evid[2] = {0, 0};
  double alts[2][4] = {{0, 0, 0, 0}, {0, 0, 0, 0}};
  const double n = art.runs.size();
  const double sigmas[2] = {0.0, 7.0};
  for (const auto& run : art.runs) {
    for (int si = 0; si < 2; ++si) {
      evid[si] += eval_run(art, run, agent::AgentKind::kLearned, agent::FusionKind::kEvidential,
                           sigmas[si])
                      .overall.top1() /
                  n;
      for (int a = 0; a < 4; ++a)
        alts[si][a] +=
            eval_run(art, run, agent::AgentKind::kLearned, alternatives[a], sigmas[si])
                .overall.top1() /
            n;
    }
  }
  bool ok = true;
  for (int si = 0; si < 2; ++si)
    for (int a = 0; a < 4; ++a)
      if (evid[si] < alts[si][a] - 0.005) ok = false;
  for (int a = 0; a < 4; ++a)
    if (!(evid[1] > alts[1][a])) ok = false;  // strictly greater at the top noise level
  const double dt = now_seconds() - t0;
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "s0: evid %.3f vs avg %.3f vote %.3f last %.3f max %.3f | s7: evid %.3f vs avg "
                "%.3f vote %.3f last %.3f max %.3f",
                evid[0], alts[0][0], alts[0][1], alts[0][2], alts[0][3], evid[1], alts[1][0],
                alts[1][1], alts[1][2], alts[1][3]);
  report(8, "fusion ablation", ok, buf, dt);
}

void criterion_9(const PipelineArtifacts& art) {
  const double t0 = now_seconds();
  double uaware[2] = {0, 0}, binary[2] = {0, 0}, average[2] = {0, 0};
  const double n = art.runs.size();
  const double sigmas[2] = {6.0, 7.0};
  for (const auto& run : art.runs) {
    for (int si = 0; si < 2; ++si) {
      uaware[si] += eval_run(art, run, agent::AgentKind::kLearned,
                             agent::FusionKind::kEvidential, sigmas[si])
                        .overall.top1() /
                    n;
      binary[si] += eval_run(art, run, agent::AgentKind::kLearned,
                             agent::FusionKind::kEvidential, sigmas[si], /*binary=*/true)
                        .overall.top1() /
                    n;
      average[si] += eval_run(art, run, agent::AgentKind::kLearned, agent::FusionKind::kAverage,
                              sigmas[si])
                         .overall.top1() /
                     n;
    }
  }
  const bool reward_ok = uaware[0] > binary[0] && uaware[1] > binary[1];
  const bool fusion_ok = uaware[0] > average[0] && uaware[1] > average[1];
  const double dt = now_seconds() - t0;
  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "s6: u-aware %.3f vs binary %.3f, avg %.3f | s7: u-aware %.3f vs binary %.3f, avg "
                "%.3f",
                uaware[0], binary[0], average[0], uaware[1], binary[1], average[1]);
  report(9, "noise robustness", reward_ok && fusion_ok, buf, dt);
}

// ---------------------------------------------------------------------------
// criterion 10: difficulty mechanics
// ---------------------------------------------------------------------------
void criterion_10() {
  const double t0 = now_seconds();
  bool ok = true;
  std::string detail = "golden table exact, generation byte-reproducible";

  struct Row {
    double v, d;
    int c;
    double score;
    bench::Level level;
  };
  using L = bench::Level;
  const Row rows[50] = {
      {0.00, 6.0, 0, 0.000, L::kHard},     {1.00, 3.0, 40, 1.000, L::kEasy},
      {0.50, 6.0, 4, 0.160, L::kHard},     {1.00, 3.0, 0, 0.400, L::kModerate},
      {0.00, 3.0, 0, 0.200, L::kHard},     {1.00, 6.0, 0, 0.200, L::kHard},
      {0.00, 3.0, 40, 0.800, L::kEasy},    {0.00, 6.0, 40, 0.600, L::kModerate},
      {1.00, 6.0, 40, 0.800, L::kEasy},    {0.50, 4.5, 20, 0.500, L::kModerate},
      {0.25, 3.0, 10, 0.400, L::kModerate},{0.75, 3.0, 30, 0.800, L::kEasy},
      {1.00, 4.5, 10, 0.450, L::kModerate},{0.10, 5.7, 2, 0.070, L::kHard},
      {0.20, 5.4, 4, 0.140, L::kHard},     {0.30, 5.1, 6, 0.210, L::kHard},
      {0.40, 4.8, 8, 0.280, L::kHard},     {0.50, 4.5, 10, 0.350, L::kModerate},
      {0.60, 4.2, 12, 0.420, L::kModerate},{0.70, 3.9, 14, 0.490, L::kModerate},
      {0.80, 3.6, 16, 0.560, L::kModerate},{0.90, 3.3, 18, 0.630, L::kModerate},
      {1.00, 3.0, 20, 0.700, L::kEasy},    {1.00, 3.0, 80, 1.000, L::kEasy},
      {0.00, 4.5, 0, 0.100, L::kHard},     {1.00, 3.6, 40, 0.960, L::kEasy},
      {0.50, 3.0, 40, 0.900, L::kEasy},    {0.50, 6.0, 40, 0.700, L::kEasy},
      {0.05, 5.85, 1, 0.035, L::kHard},    {0.95, 3.15, 38, 0.950, L::kEasy},
      {0.65, 3.0, 0, 0.330, L::kModerate}, {0.00, 3.0, 31, 0.665, L::kEasy},
      {0.10, 3.0, 24, 0.580, L::kModerate},{0.15, 3.6, 2, 0.220, L::kHard},
      {0.35, 4.2, 5, 0.265, L::kHard},     {0.45, 3.9, 7, 0.335, L::kModerate},
      {0.55, 4.8, 9, 0.325, L::kHard},     {0.85, 5.7, 11, 0.355, L::kModerate},
      {0.25, 5.4, 13, 0.285, L::kHard},    {0.05, 4.95, 15, 0.305, L::kHard},
      {1.00, 5.4, 17, 0.495, L::kModerate},{0.60, 3.3, 19, 0.585, L::kModerate},
      {0.40, 3.6, 21, 0.555, L::kModerate},{0.30, 4.5, 23, 0.505, L::kModerate},
      {0.20, 5.1, 25, 0.475, L::kModerate},{0.90, 3.9, 27, 0.725, L::kEasy},
      {0.70, 4.2, 29, 0.695, L::kEasy},    {0.10, 4.8, 33, 0.595, L::kModerate},
      {0.50, 3.3, 35, 0.805, L::kEasy},    {1.00, 3.0, 39, 0.985, L::kEasy},
  };
  for (const auto& r : rows) {
    const double s = bench::difficulty_score(r.v, r.d, r.c, 40);
    if (std::abs(s - r.score) > 1e-12 || bench::difficulty_level(s) != r.level) {
      ok = false;
      detail = "golden table mismatch";
    }
  }

  // byte reproducibility
  {
    world::WorldConfig cfg;
    auto a = bench::generate_test_set(120, 7, cfg);
    auto b = bench::generate_test_set(120, 7, cfg);
    const std::string pa = "/tmp/evar_accept_a.jsonl", pb = "/tmp/evar_accept_b.jsonl";
    bench::save_test_set(pa, a);
    bench::save_test_set(pb, b);
    std::ifstream fa(pa), fb(pb);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    if (sa.str() != sb.str() || sa.str().empty()) {
      ok = false;
      detail = "generation not byte-reproducible";
    }
    std::remove(pa.c_str());
    std::remove(pb.c_str());
  }
  report(10, "difficulty mechanics", ok, detail, now_seconds() - t0);
}

}  // namespace

int main() {
  std::printf("== acceptance suite ==\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_10();

  std::printf("building staged pipelines (5 seeds) ..\n");
  std::fflush(stdout);
  const double t0 = now_seconds();
  auto art = build_pipeline(5);
  std::printf("pipelines ready (%.0fs)\n", now_seconds() - t0);

  std::vector<agent::EvalResult> ours_results;
  criterion_5(art, ours_results);
  criterion_6(art, ours_results);
  criterion_7(art);
  criterion_8(art);
  criterion_9(art);

  std::printf("== %d criterion(s) failed ==\n", g_failures);
  return g_failures;
}
