#pragma once

#include <cmath>

#include "evar/common/rng.hpp"
#include "evar/num/layers.hpp"
#include "evar/sl/opinion.hpp"
#include "evar/world/sensor.hpp"

namespace evar::agent {

// Recurrent policy state input, built from cue statistics rather than raw
// features so the recognizer and the policy stay decoupled:
// [u, top belief, visible, visibility, distance_norm, bearing sin/cos,
//  forward clearance, previous action one-hot]. The clearance scalar stands
// in for the obstacle layout an image-based policy would see directly.
inline constexpr int kStateFeatureDim = 8 + world::kActionCount;
inline constexpr int kClearanceCells = 8;

inline num::Vec policy_features(const world::Observation& obs, const sl::Opinion& opinion,
                                int prev_action, double range_m, int clearance_cells) {
  num::Vec f(kStateFeatureDim, 0.0);
  f[0] = opinion.uncertainty;
  f[1] = opinion.beliefs[sl::argmax_class(opinion)];
  f[2] = obs.visible ? 1.0 : 0.0;
  f[3] = obs.visibility;
  f[4] = std::clamp(obs.distance_m / range_m, 0.0, 1.0);
  if (obs.visible) {
    const double rad = obs.bearing_deg * std::numbers::pi / 180.0;
    f[5] = std::sin(rad);
    f[6] = std::cos(rad);
  }
  f[7] = static_cast<double>(clearance_cells) / kClearanceCells;
  if (prev_action >= 0 && prev_action < world::kActionCount) f[8 + prev_action] = 1.0;
  return f;
}

// Gated-recurrent aggregator with linear actor and critic heads on top.
struct PolicyNet {
  int input_dim = kStateFeatureDim;
  int hidden = 32;
  num::ParamSet params;
  num::GruCell gru;
  num::Affine actor;   // hidden -> 3 action logits
  num::Affine critic;  // hidden -> 1 value

  static PolicyNet create(int hidden, std::uint64_t seed, int input_dim = kStateFeatureDim) {
    PolicyNet p;
    p.input_dim = input_dim;
    p.hidden = hidden;
    p.gru = num::GruCell::create(p.params, "gru", input_dim, hidden);
    p.actor = num::Affine::create(p.params, "actor", hidden, world::kActionCount);
    p.critic = num::Affine::create(p.params, "critic", hidden, 1);
    Rng rng(seed);
    p.gru.init(p.params, rng, 1.0 / std::sqrt(static_cast<double>(input_dim + hidden)));
    p.actor.init(p.params, rng, 0.01);
    p.critic.init(p.params, rng, 0.1);
    return p;
  }

  num::Vec initial_state() const { return num::Vec(hidden, 0.0); }

  struct StepEval {
    num::Vec h;
    num::Vec logp;  // log pi(. | s)
    double value = 0.0;
    num::GruCell::Cache cache;
  };

  StepEval eval_step(const num::Vec& x, const num::Vec& h_prev, bool keep_cache = false) const {
    StepEval out;
    if (keep_cache) {
      out.h = gru.forward(params, x, h_prev, &out.cache);
    } else {
      out.h = gru.forward(params, x, h_prev);
    }
    out.logp = num::log_softmax(actor.forward(params, out.h));
    out.value = critic.forward(params, out.h)[0];
    return out;
  }

  int sample_action(const num::Vec& logp, Rng& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    for (int a = 0; a < static_cast<int>(logp.size()); ++a) {
      acc += std::exp(logp[a]);
      if (u < acc) return a;
    }
    return static_cast<int>(logp.size()) - 1;
  }
};

}  // namespace evar::agent
