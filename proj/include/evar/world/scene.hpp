#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "evar/common/rng.hpp"
#include "evar/num/tensor.hpp"

// Deterministic 2-D occluded gridworld. Cells are 0.25 m squares; walls
// occlude rays and block movement; one contiguous rectangular target with a
// class label and a per-class prototype feature.

namespace evar::world {

struct GenerationFailed final : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Action { kMoveForward = 0, kTurnLeft = 1, kTurnRight = 2 };
inline constexpr int kActionCount = 3;

struct WorldConfig {
  int grid_w = 32;
  int grid_h = 32;
  double cell_m = 0.25;
  double fov_deg = 90.0;
  double range_m = 8.0;
  int class_count = 8;
  int feature_dim = 16;
  double wall_density = 0.10;
  int target_min_edge = 2;
  int target_max_edge = 7;
  int cap_cells = 40;       // observed-cell normalization cap
  double sigma0 = 0.7;      // noise scale at quality 0
  double sigma_min = 0.05;  // noise floor at quality 1
  // classes come in look-alike pairs: the second of each pair is the first
  // nudged by this much before renormalizing (0 = independent prototypes).
  // Look-alikes give ambiguous views real cost, as in cluttered scenes.
  double proto_pair_delta = 0.0;
  // partial views pick up another object in the scene: the feature mixes in
  // the scene's distractor prototype with weight w * 4q^2(1-q), which fades
  // for clean views (q=1), poor views (q->0) and absent targets (q=0)
  double distractor_weight = 0.8;
  // fraction of scenes whose target sits behind a shield wall covering most
  // of one face, so some views stay partially occluded whatever the agent does
  double shield_probability = 0.35;
  std::uint64_t proto_seed = 1234;

  void validate() const {
    if (grid_w < 8 || grid_h < 8 || class_count < 2 || feature_dim < 2)
      throw std::invalid_argument("WorldConfig: sizes too small");
    if (target_min_edge < 1 || target_max_edge < target_min_edge ||
        target_max_edge >= std::min(grid_w, grid_h) / 2)
      throw std::invalid_argument("WorldConfig: bad target size range");
    if (wall_density < 0.0 || wall_density > 0.5)
      throw std::invalid_argument("WorldConfig: wall density outside [0, 0.5]");
    if (cap_cells < 1) throw std::invalid_argument("WorldConfig: cap_cells < 1");
  }
};

struct Pose {
  int x = 0;
  int y = 0;
  int heading_deg = 0;  // multiple of 10 in [0, 360)

  bool operator==(const Pose&) const = default;
};

struct GridPos {
  int x = 0;
  int y = 0;
  bool operator==(const GridPos&) const = default;
};

// K unit prototype vectors fixed by the global prototype seed. With a pair
// delta, odd classes are nudged copies of the preceding even class, so every
// class has one look-alike; regenerated with a bumped seed in the unlikely
// event two land too close.
inline std::vector<num::Vec> make_prototypes(int class_count, int feature_dim,
                                             std::uint64_t proto_seed,
                                             double pair_delta = 0.0) {
  auto normalize = [](num::Vec& v) {
    const double n = num::norm2(v);
    for (double& x : v) x /= n;
  };
  for (int attempt = 0; attempt < 32; ++attempt) {
    Rng rng = Rng::stream(proto_seed, 0x9070u + attempt);
    std::vector<num::Vec> protos(class_count);
    for (int k = 0; k < class_count; ++k) {
      auto& p = protos[k];
      p.resize(feature_dim);
      if (pair_delta > 0.0 && k % 2 == 1) {
        p = protos[k - 1];
        for (double& v : p) v += pair_delta * rng.normal() / std::sqrt(double(feature_dim));
      } else {
        for (double& v : p) v = rng.normal();
      }
      normalize(p);
    }
    double min_dist = 2.0;
    for (int i = 0; i < class_count; ++i)
      for (int j = i + 1; j < class_count; ++j) {
        double d2 = 0.0;
        for (int t = 0; t < feature_dim; ++t) {
          const double d = protos[i][t] - protos[j][t];
          d2 += d * d;
        }
        min_dist = std::min(min_dist, std::sqrt(d2));
      }
    const double required = pair_delta > 0.0 ? 0.4 * pair_delta : 0.5;
    if (min_dist > required) return protos;
  }
  throw GenerationFailed("make_prototypes: could not separate prototypes");
}

struct Scene {
  WorldConfig config;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> walls;  // grid_w * grid_h occupancy
  std::vector<GridPos> target_cells;
  int target_class = 0;
  int distractor_class = 1;  // another object the scene's bad views pick up
  double target_cx_m = 0.0;  // target center, meters
  double target_cy_m = 0.0;
  std::vector<num::Vec> prototypes;

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < config.grid_w && y >= 0 && y < config.grid_h;
  }
  bool wall(int x, int y) const {
    return walls[static_cast<std::size_t>(y) * config.grid_w + x] != 0;
  }
  bool target_cell(int x, int y) const {
    for (const auto& c : target_cells)
      if (c.x == x && c.y == y) return true;
    return false;
  }
  // cells an agent may occupy: inside the grid, not wall, not furniture
  bool walkable(int x, int y) const {
    return in_bounds(x, y) && !wall(x, y) && !target_cell(x, y);
  }
  double cell_center_x(int x) const { return (x + 0.5) * config.cell_m; }
  double cell_center_y(int y) const { return (y + 0.5) * config.cell_m; }
};

namespace detail {

inline void stamp_wall_segment(Scene& s, Rng& rng) {
  const bool horizontal = rng.uniform_int(2) == 0;
  const int len = 3 + rng.uniform_int(6);
  const int x0 = rng.uniform_int(s.config.grid_w);
  const int y0 = rng.uniform_int(s.config.grid_h);
  for (int i = 0; i < len; ++i) {
    const int x = x0 + (horizontal ? i : 0);
    const int y = y0 + (horizontal ? 0 : i);
    if (s.in_bounds(x, y)) s.walls[static_cast<std::size_t>(y) * s.config.grid_w + x] = 1;
  }
}

inline bool place_target(Scene& s, Rng& rng) {
  const auto& cfg = s.config;
  for (int attempt = 0; attempt < 200; ++attempt) {
    const int w = cfg.target_min_edge + rng.uniform_int(cfg.target_max_edge - cfg.target_min_edge + 1);
    const int h = cfg.target_min_edge + rng.uniform_int(cfg.target_max_edge - cfg.target_min_edge + 1);
    const int x0 = rng.uniform_int(cfg.grid_w - w);
    const int y0 = rng.uniform_int(cfg.grid_h - h);
    bool free = true;
    for (int y = y0; y < y0 + h && free; ++y)
      for (int x = x0; x < x0 + w && free; ++x)
        if (s.wall(x, y)) free = false;
    if (!free) continue;
    s.target_cells.clear();
    double cx = 0.0, cy = 0.0;
    for (int y = y0; y < y0 + h; ++y)
      for (int x = x0; x < x0 + w; ++x) {
        s.target_cells.push_back({x, y});
        cx += s.cell_center_x(x);
        cy += s.cell_center_y(y);
      }
    s.target_cx_m = cx / static_cast<double>(s.target_cells.size());
    s.target_cy_m = cy / static_cast<double>(s.target_cells.size());

    // occasionally shield most of one target face behind a hugging wall, so
    // views from that side stay partially occluded no matter how close
    if (rng.uniform() < cfg.shield_probability) {
      const bool along_x = rng.uniform_int(2) == 0;       // shield runs parallel to x?
      const bool near_side = rng.uniform_int(2) == 0;     // low-coordinate side
      const int face = along_x ? w : h;
      const int cover = std::max(1, (face * 3) / 4);
      const int offset = rng.uniform_int(face - cover + 1);
      for (int i = 0; i < cover; ++i) {
        const int x = along_x ? x0 + offset + i : (near_side ? x0 - 2 : x0 + w + 1);
        const int y = along_x ? (near_side ? y0 - 2 : y0 + h + 1) : y0 + offset + i;
        if (s.in_bounds(x, y))
          s.walls[static_cast<std::size_t>(y) * s.config.grid_w + x] = 1;
      }
    }
    return true;
  }
  return false;
}

inline bool has_start_candidate(const Scene& s, double min_m, double max_m) {
  for (int y = 0; y < s.config.grid_h; ++y)
    for (int x = 0; x < s.config.grid_w; ++x) {
      if (!s.walkable(x, y)) continue;
      const double dx = s.cell_center_x(x) - s.target_cx_m;
      const double dy = s.cell_center_y(y) - s.target_cy_m;
      const double d = std::sqrt(dx * dx + dy * dy);
      if (d >= min_m && d <= max_m) return true;
    }
  return false;
}

}  // namespace detail

inline Scene generate_scene(std::uint64_t seed, const WorldConfig& config) {
  config.validate();
  for (int attempt = 0; attempt < 20; ++attempt) {
    Rng rng = Rng::stream(seed, 0x5ce4eULL + attempt);
    Scene s;
    s.config = config;
    s.seed = seed;
    s.walls.assign(static_cast<std::size_t>(config.grid_w) * config.grid_h, 0);
    s.prototypes = make_prototypes(config.class_count, config.feature_dim, config.proto_seed,
                                   config.proto_pair_delta);

    const int wall_budget =
        static_cast<int>(config.wall_density * config.grid_w * config.grid_h);
    int guard = 0;
    auto wall_count = [&s]() {
      int n = 0;
      for (auto w : s.walls) n += w;
      return n;
    };
    while (wall_count() < wall_budget && guard++ < 400) detail::stamp_wall_segment(s, rng);

    if (!detail::place_target(s, rng)) continue;
    s.target_class = rng.uniform_int(config.class_count);
    s.distractor_class =
        (s.target_class + 1 + rng.uniform_int(config.class_count - 1)) % config.class_count;
    if (!detail::has_start_candidate(s, 3.0, 6.0)) continue;
    return s;
  }
  throw GenerationFailed("generate_scene: no valid scene for seed " + std::to_string(seed));
}

// Debug rendering: walls '#', target 'T', agent glyph by heading.
inline std::string ascii_dump(const Scene& s, const Pose* pose = nullptr) {
  std::string out;
  for (int y = s.config.grid_h - 1; y >= 0; --y) {
    for (int x = 0; x < s.config.grid_w; ++x) {
      char c = '.';
      if (s.wall(x, y)) c = '#';
      if (s.target_cell(x, y)) c = 'T';
      if (pose && pose->x == x && pose->y == y) {
        static constexpr char kGlyph[8] = {'>', '/', '^', '\\', '<', '/', 'v', '\\'};
        c = kGlyph[((pose->heading_deg + 22) / 45) % 8];
      }
      out += c;
    }
    out += '\n';
  }
  return out;
}

}  // namespace evar::world
