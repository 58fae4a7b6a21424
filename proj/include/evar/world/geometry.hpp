#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "evar/world/scene.hpp"

namespace evar::world {

// wrap an angle difference into (-180, 180]; exactly-behind maps to +180
inline double wrap_deg(double deg) {
  double e = std::fmod(deg, 360.0);
  if (e < 0.0) e += 360.0;
  if (e > 180.0) e -= 360.0;
  return e;
}

inline double bearing_deg(double from_x, double from_y, double to_x, double to_y) {
  return std::atan2(to_y - from_y, to_x - from_x) * 180.0 / std::numbers::pi;
}

// heading snapped to the nearest of the 8 axis/diagonal rays
inline GridPos forward_delta(int heading_deg) {
  static constexpr GridPos kDirs[8] = {{1, 0}, {1, 1},  {0, 1},  {-1, 1},
                                       {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
  return kDirs[((heading_deg + 22) / 45) % 8];
}

inline bool forward_blocked(const Scene& s, const Pose& p) {
  const GridPos d = forward_delta(p.heading_deg);
  return !s.walkable(p.x + d.x, p.y + d.y);
}

// One simulator step: forward moves one cell along the snapped ray, blocked
// moves are a silent no-op, turns are +-10 degrees.
inline Pose step(const Scene& s, const Pose& p, Action a) {
  Pose out = p;
  switch (a) {
    case Action::kMoveForward: {
      if (!forward_blocked(s, p)) {
        const GridPos d = forward_delta(p.heading_deg);
        out.x += d.x;
        out.y += d.y;
      }
      break;
    }
    case Action::kTurnLeft:
      out.heading_deg = (p.heading_deg + 10) % 360;
      break;
    case Action::kTurnRight:
      out.heading_deg = (p.heading_deg + 350) % 360;
      break;
  }
  return out;
}

// Grid traversal from the agent's cell center to a destination cell center;
// true when no wall cell lies strictly between them. Target cells do not
// occlude, only walls do.
inline bool ray_clear(const Scene& s, const Pose& from, int to_x, int to_y) {
  const double x0 = s.cell_center_x(from.x), y0 = s.cell_center_y(from.y);
  const double x1 = s.cell_center_x(to_x), y1 = s.cell_center_y(to_y);
  const double dx = x1 - x0, dy = y1 - y0;

  int cx = from.x, cy = from.y;
  const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);

  const double cell = s.config.cell_m;
  const double inv_dx = dx != 0.0 ? 1.0 / std::abs(dx) : 0.0;
  const double inv_dy = dy != 0.0 ? 1.0 / std::abs(dy) : 0.0;
  // parametric distance to the first x/y cell boundary, then per-cell strides
  double t_max_x = dx != 0.0 ? ((step_x > 0 ? (cx + 1) * cell - x0 : x0 - cx * cell) * inv_dx)
                             : std::numeric_limits<double>::infinity();
  double t_max_y = dy != 0.0 ? ((step_y > 0 ? (cy + 1) * cell - y0 : y0 - cy * cell) * inv_dy)
                             : std::numeric_limits<double>::infinity();
  const double t_delta_x = dx != 0.0 ? cell * inv_dx : 0.0;
  const double t_delta_y = dy != 0.0 ? cell * inv_dy : 0.0;

  while (cx != to_x || cy != to_y) {
    if (t_max_x <= t_max_y) {
      cx += step_x;
      t_max_x += t_delta_x;
    } else {
      cy += step_y;
      t_max_y += t_delta_y;
    }
    if (cx == to_x && cy == to_y) break;
    if (!s.in_bounds(cx, cy) || s.wall(cx, cy)) return false;
  }
  return true;
}

// free cells along the snapped heading ray before the first obstacle
inline int forward_clearance(const Scene& s, const Pose& p, int max_cells = 8) {
  const GridPos d = forward_delta(p.heading_deg);
  for (int k = 1; k <= max_cells; ++k) {
    const int x = p.x + k * d.x, y = p.y + k * d.y;
    if (!s.walkable(x, y)) return k - 1;
  }
  return max_cells;
}

struct ViewStats {
  double visibility = 0.0;  // visible target-cell fraction
  double distance_m = 0.0;  // agent to target center
  int observed_cells = 0;
};

// A target cell counts as visible when it is inside the FOV cone, within
// sensing range and its ray from the agent is unobstructed.
inline ViewStats visibility_stats(const Scene& s, const Pose& p) {
  ViewStats st;
  const double ax = s.cell_center_x(p.x), ay = s.cell_center_y(p.y);
  const double half_fov = s.config.fov_deg * 0.5 + 1e-9;
  int visible = 0;
  for (const auto& c : s.target_cells) {
    const double cx = s.cell_center_x(c.x), cy = s.cell_center_y(c.y);
    const double d = std::hypot(cx - ax, cy - ay);
    if (d > s.config.range_m + 1e-9) continue;
    if (d > 1e-12) {
      const double rel = wrap_deg(bearing_deg(ax, ay, cx, cy) - p.heading_deg);
      if (std::abs(rel) > half_fov) continue;
    }
    if (!ray_clear(s, p, c.x, c.y)) continue;
    ++visible;
  }
  st.observed_cells = visible;
  st.visibility = static_cast<double>(visible) / static_cast<double>(s.target_cells.size());
  st.distance_m = std::hypot(s.target_cx_m - ax, s.target_cy_m - ay);
  return st;
}

}  // namespace evar::world
