#pragma once

#include <algorithm>
#include <cmath>

#include "evar/common/rng.hpp"
#include "evar/world/geometry.hpp"
#include "evar/world/scene.hpp"

namespace evar::world {

struct Observation {
  num::Vec feature;        // synthetic sensor output, dimension D
  bool visible = false;    // any target cell observed
  double visibility = 0.0;
  double distance_m = 0.0;
  int observed_cells = 0;
  double bearing_deg = 0.0;  // relative bearing to target center; 0 when invisible
  int true_class = 0;        // ground truth, hidden from the policy
  double quality = 0.0;      // sensing quality q in [0,1]
};

// Sensing quality: 0.2 * visibility + 0.2 * proximity + 0.6 * observed-cell
// fraction. An unseen target yields q = 0 regardless of proximity, so the
// feature degenerates to pure noise.
inline double sensing_quality(const ViewStats& st, const WorldConfig& cfg) {
  if (st.observed_cells == 0) return 0.0;
  const double proximity = std::clamp(1.0 - (st.distance_m - 3.0) / 3.0, 0.0, 1.0);
  const double pix = std::min(1.0, static_cast<double>(st.observed_cells) / cfg.cap_cells);
  return std::clamp(0.2 * st.visibility + 0.2 * proximity + 0.6 * pix, 0.0, 1.0);
}

// feature = q * prototype + w 4q^2(1-q) * distractor prototype
//           + (sigma0 (1 - q) + sigma_min) * noise
// The distractor term models partial views picking up another object in the
// scene; it is strongest for middling views and fades for clean views, poor
// views and absent targets.
inline Observation observe(const Scene& s, const Pose& p, Rng& rng) {
  Observation obs;
  const ViewStats st = visibility_stats(s, p);
  obs.visible = st.observed_cells > 0;
  obs.visibility = st.visibility;
  obs.distance_m = st.distance_m;
  obs.observed_cells = st.observed_cells;
  obs.true_class = s.target_class;
  obs.quality = sensing_quality(st, s.config);
  if (obs.visible) {
    const double ax = s.cell_center_x(p.x), ay = s.cell_center_y(p.y);
    obs.bearing_deg = wrap_deg(bearing_deg(ax, ay, s.target_cx_m, s.target_cy_m) - p.heading_deg);
  }

  const auto& proto = s.prototypes[s.target_class];
  const auto& distractor = s.prototypes[s.distractor_class];
  const double q = obs.quality;
  const double mix = s.config.distractor_weight * 4.0 * q * q * (1.0 - q);
  const double sigma = s.config.sigma0 * (1.0 - q) + s.config.sigma_min;
  obs.feature.resize(s.config.feature_dim);
  for (int i = 0; i < s.config.feature_dim; ++i)
    obs.feature[i] = q * proto[i] + mix * distractor[i] + sigma * rng.normal();
  return obs;
}

// Privileged heuristic: turn until the target center is within 5 degrees,
// approach along a clear ray while farther than 1.5 m, then hold by small
// alternating turns.
inline Action fixation_shortest_path_action(const Scene& s, const Pose& p) {
  const double ax = s.cell_center_x(p.x), ay = s.cell_center_y(p.y);
  const double err = wrap_deg(bearing_deg(ax, ay, s.target_cx_m, s.target_cy_m) - p.heading_deg);
  if (std::abs(err) > 5.0) return err > 0.0 ? Action::kTurnLeft : Action::kTurnRight;
  const double dist = std::hypot(s.target_cx_m - ax, s.target_cy_m - ay);
  if (dist > 1.5 && !forward_blocked(s, p)) return Action::kMoveForward;
  if (std::abs(err) > 0.5) return err > 0.0 ? Action::kTurnLeft : Action::kTurnRight;
  return (p.heading_deg / 10) % 2 == 0 ? Action::kTurnLeft : Action::kTurnRight;
}

}  // namespace evar::world
