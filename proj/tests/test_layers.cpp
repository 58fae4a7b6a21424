#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "evar/common/rng.hpp"
#include "evar/num/grad_check.hpp"
#include "evar/num/layers.hpp"
#include "evar/num/optim.hpp"

using namespace evar;
using num::Vec;

namespace {
Vec random_vec(Rng& rng, int n, double scale = 1.0) {
  Vec v(n);
  for (double& x : v) x = scale * rng.normal();
  return v;
}
}  // namespace

TEST_CASE("finite_diff_check on a quadratic is tight") {
  Vec x = {1.0, 2.0};
  auto f = [](const Vec& p) { return p[0] * p[0] + p[1] * p[1]; };
  Vec analytic = {2.0, 4.0};
  CHECK(num::finite_diff_check(f, x, analytic) <= 1e-8);
}

TEST_CASE("finite_diff_check on a constant returns zero error") {
  Vec x = {0.3, -0.7, 2.0};
  auto f = [](const Vec&) { return 42.0; };
  Vec analytic(3, 0.0);
  CHECK(num::finite_diff_check(f, x, analytic) == 0.0);
}

TEST_CASE("affine with identity weights and zero bias is the identity") {
  num::ParamSet ps;
  auto layer = num::Affine::create(ps, "id", 3, 3);
  for (int i = 0; i < 3; ++i) ps[layer.w].at(i, i) = 1.0;
  Vec x = {0.5, -1.0, 2.0};
  Vec y = layer.forward(ps, x);
  for (int i = 0; i < 3; ++i) CHECK(y[i] == doctest::Approx(x[i]));
}

TEST_CASE("evidence activation at zero gives evidence one (exp choice)") {
  Vec z = {0.0, 0.0};
  Vec e = num::evidence_forward(z, num::EvidenceActivation::kClampedExp);
  CHECK(e[0] == doctest::Approx(1.0));
  CHECK(e[1] == doctest::Approx(1.0));
}

TEST_CASE("evidence activation clamps and is non-negative for both choices") {
  Vec z = {-50.0, -3.0, 0.0, 3.0, 50.0};
  for (auto act : {num::EvidenceActivation::kClampedExp, num::EvidenceActivation::kSigmoid}) {
    Vec e = num::evidence_forward(z, act);
    for (double v : e) {
      CHECK(v >= 0.0);
      CHECK(std::isfinite(v));
    }
  }
  Vec e = num::evidence_forward(z, num::EvidenceActivation::kClampedExp);
  CHECK(e[4] == doctest::Approx(std::exp(10.0)));
  CHECK(e[0] == doctest::Approx(std::exp(-10.0)));
}

TEST_CASE("affine+activation gradients match finite differences on 20 seeded configs") {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(1000 + trial);
    const int in = 8, out = 4;
    num::ParamSet ps;
    auto layer = num::Affine::create(ps, "fc", in, out);
    layer.init(ps, rng, 0.25);
    Vec x = random_vec(rng, in, 0.8);
    Vec target = random_vec(rng, out);
    const auto act = (trial % 2 == 0) ? num::EvidenceActivation::kClampedExp
                                      : num::EvidenceActivation::kSigmoid;

    // scalar loss: squared distance between activation output and a target
    auto loss_at = [&](const Vec& flat) {
      num::ParamSet tmp = ps;
      tmp.unpack_values(flat);
      Vec z = layer.forward(tmp, x);
      Vec e = num::evidence_forward(z, act);
      double s = 0.0;
      for (int i = 0; i < out; ++i) s += (e[i] - target[i]) * (e[i] - target[i]);
      return 0.5 * s;
    };

    ps.zero_grad();
    Vec z = layer.forward(ps, x);
    Vec e = num::evidence_forward(z, act);
    Vec ge(out);
    for (int i = 0; i < out; ++i) ge[i] = e[i] - target[i];
    Vec gz = num::evidence_backward(z, ge, act);
    layer.backward(ps, x, gz);

    CHECK(num::finite_diff_check(loss_at, ps.pack_values(), ps.pack_grads()) <= 1e-5);
  }
}

TEST_CASE("gru cell gradients match finite differences on 20 seeded configs") {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(7000 + trial);
    const int in = 5, hidden = 6;
    num::ParamSet ps;
    auto cell = num::GruCell::create(ps, "gru", in, hidden);
    cell.init(ps, rng, 0.3);
    Vec x0 = random_vec(rng, in, 0.7);
    Vec x1 = random_vec(rng, in, 0.7);
    Vec target = random_vec(rng, hidden);

    // nonzero initial state keeps the reset-gate gradients well conditioned
    Vec h0 = random_vec(rng, hidden, 0.8);

    // two-step unroll so the recurrent path is exercised
    auto loss_at = [&](const Vec& flat) {
      num::ParamSet tmp = ps;
      tmp.unpack_values(flat);
      Vec h1 = cell.forward(tmp, x0, h0);
      Vec h2 = cell.forward(tmp, x1, h1);
      double s = 0.0;
      for (int i = 0; i < hidden; ++i) s += (h2[i] - target[i]) * (h2[i] - target[i]);
      return 0.5 * s;
    };

    ps.zero_grad();
    num::GruCell::Cache c1, c2;
    Vec h1 = cell.forward(ps, x0, h0, &c1);
    Vec h2 = cell.forward(ps, x1, h1, &c2);
    Vec gh2(hidden);
    for (int i = 0; i < hidden; ++i) gh2[i] = h2[i] - target[i];
    Vec gh1 = cell.backward(ps, c2, gh2);
    cell.backward(ps, c1, gh1);

    CHECK(num::finite_diff_check(loss_at, ps.pack_values(), ps.pack_grads()) <= 1e-5);
  }
}

TEST_CASE("log_softmax is a normalized log distribution") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    Vec z = random_vec(rng, 6, 3.0);
    Vec lp = num::log_softmax(z);
    double sum = 0.0;
    for (double v : lp) {
      CHECK(v <= 0.0);
      sum += std::exp(v);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("log_softmax and entropy gradients match finite differences") {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(31 + trial);
    Vec z = random_vec(rng, 5, 2.0);
    const int pick = trial % 5;

    auto score = [&](const Vec& v) {
      Vec lp = num::log_softmax(v);
      return 3.0 * lp[pick] + 0.5 * num::entropy_from_logp(lp);
    };

    Vec lp = num::log_softmax(z);
    Vec glp(5, 0.0);
    glp[pick] = 3.0;
    Vec gz = num::log_softmax_backward(lp, glp);
    num::axpy(1.0, num::entropy_backward(lp, 0.5), gz);

    CHECK(num::finite_diff_check(score, z, gz) <= 1e-5);
  }
}

TEST_CASE("sgd momentum with clipping reduces a quadratic objective") {
  num::ParamSet ps;
  ps.add("x", {4});
  for (int i = 0; i < 4; ++i) ps[0].value[i] = 5.0 + i;
  num::SgdMomentum opt{0.05, 0.9, 1.0, {}};
  double first = 0.0;
  for (int it = 0; it < 200; ++it) {
    ps.zero_grad();
    double loss = 0.0;
    for (int i = 0; i < 4; ++i) {
      loss += 0.5 * ps[0].value[i] * ps[0].value[i];
      ps[0].grad[i] = ps[0].value[i];
    }
    if (it == 0) first = loss;
    opt.step(ps);
  }
  for (int i = 0; i < 4; ++i) CHECK(std::abs(ps[0].value[i]) < 0.5);
  double final_loss = 0.0;
  for (int i = 0; i < 4; ++i) final_loss += 0.5 * ps[0].value[i] * ps[0].value[i];
  CHECK(final_loss < 1e-4 * first);
}

TEST_CASE("shape mismatches are rejected") {
  num::ParamSet ps;
  auto layer = num::Affine::create(ps, "fc", 3, 2);
  Vec bad = {1.0, 2.0};
  CHECK_THROWS_AS(layer.forward(ps, bad), num::ShapeMismatch);
  CHECK_THROWS_AS(num::dot(Vec{1.0}, Vec{1.0, 2.0}), num::ShapeMismatch);
}
