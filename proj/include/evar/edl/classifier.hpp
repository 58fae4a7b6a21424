#pragma once

#include <string>

#include "evar/common/rng.hpp"
#include "evar/num/layers.hpp"
#include "evar/num/tensor.hpp"
#include "evar/sl/opinion.hpp"

namespace evar::edl {

// Evidential head: feature -> unit-norm -> affine -> tanh -> affine ->
// non-negative evidence activation. The input is reduced to its direction:
// under an exponential activation, evidence would otherwise grow with raw
// input magnitude and out-of-distribution inputs would look confident.
struct EvidentialClassifier {
  int feature_dim = 0;
  int class_count = 0;
  int hidden = 64;
  num::EvidenceActivation activation = num::EvidenceActivation::kClampedExp;
  // calibration of evidence units applied when forming opinions; training
  // losses always see the unscaled head output
  double evidence_scale = 1.0;

  num::ParamSet params;
  num::Affine fc1, fc2;

  struct Cache {
    num::Vec x;
    num::Vec h;  // tanh output
    num::Vec z;  // evidence pre-activation
  };

  static EvidentialClassifier create(int feature_dim, int class_count, int hidden,
                                     num::EvidenceActivation act, std::uint64_t seed) {
    EvidentialClassifier m;
    m.feature_dim = feature_dim;
    m.class_count = class_count;
    m.hidden = hidden;
    m.activation = act;
    m.fc1 = num::Affine::create(m.params, "fc1", feature_dim, hidden);
    m.fc2 = num::Affine::create(m.params, "fc2", hidden, class_count);
    Rng rng(seed);
    m.fc1.init(m.params, rng, 1.0 / std::sqrt(static_cast<double>(feature_dim)));
    m.fc2.init(m.params, rng, 1.0 / std::sqrt(static_cast<double>(hidden)));
    return m;
  }

  static num::Vec unit_direction(const num::Vec& x) {
    num::Vec xn = x;
    const double n = num::norm2(xn);
    if (n > 1e-12)
      for (double& v : xn) v /= n;
    return xn;
  }

  num::Vec forward(const num::Vec& x, Cache* cache = nullptr) const {
    num::Vec xn = unit_direction(x);
    num::Vec h = num::tanh_forward(fc1.forward(params, xn));
    num::Vec z = fc2.forward(params, h);
    num::Vec e = num::evidence_forward(z, activation);
    if (cache) *cache = Cache{std::move(xn), std::move(h), std::move(z)};
    return e;
  }

  // accumulates parameter gradients from d loss / d evidence
  void backward(const Cache& c, const num::Vec& g_evidence) {
    num::Vec gz = num::evidence_backward(c.z, g_evidence, activation);
    num::Vec gh = fc2.backward(params, c.h, gz);
    num::Vec gpre = num::tanh_backward(c.h, gh);
    fc1.backward(params, c.x, gpre);
  }

  num::Vec alpha(const num::Vec& x) const {
    num::Vec a = forward(x);
    for (double& v : a) v += 1.0;
    return a;
  }

  sl::Opinion opinion(const num::Vec& x) const {
    num::Vec e = forward(x);
    if (evidence_scale != 1.0)
      for (double& v : e) v *= evidence_scale;
    return sl::opinion_from_evidence(sl::EvidenceVector{std::move(e)});
  }
};

}  // namespace evar::edl
