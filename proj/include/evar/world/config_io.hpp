#pragma once

#include <json.hpp>

#include "evar/world/scene.hpp"

namespace evar::world {

inline void to_json(nlohmann::json& j, const WorldConfig& c) {
  j = nlohmann::json{{"grid_w", c.grid_w},
                     {"grid_h", c.grid_h},
                     {"cell_m", c.cell_m},
                     {"fov_deg", c.fov_deg},
                     {"range_m", c.range_m},
                     {"class_count", c.class_count},
                     {"feature_dim", c.feature_dim},
                     {"wall_density", c.wall_density},
                     {"target_min_edge", c.target_min_edge},
                     {"target_max_edge", c.target_max_edge},
                     {"cap_cells", c.cap_cells},
                     {"sigma0", c.sigma0},
                     {"sigma_min", c.sigma_min},
                     {"proto_pair_delta", c.proto_pair_delta},
                     {"distractor_weight", c.distractor_weight},
                     {"shield_probability", c.shield_probability},
                     {"proto_seed", c.proto_seed}};
}

inline void from_json(const nlohmann::json& j, WorldConfig& c) {
  WorldConfig defaults;
  c.grid_w = j.value("grid_w", defaults.grid_w);
  c.grid_h = j.value("grid_h", defaults.grid_h);
  c.cell_m = j.value("cell_m", defaults.cell_m);
  c.fov_deg = j.value("fov_deg", defaults.fov_deg);
  c.range_m = j.value("range_m", defaults.range_m);
  c.class_count = j.value("class_count", defaults.class_count);
  c.feature_dim = j.value("feature_dim", defaults.feature_dim);
  c.wall_density = j.value("wall_density", defaults.wall_density);
  c.target_min_edge = j.value("target_min_edge", defaults.target_min_edge);
  c.target_max_edge = j.value("target_max_edge", defaults.target_max_edge);
  c.cap_cells = j.value("cap_cells", defaults.cap_cells);
  c.sigma0 = j.value("sigma0", defaults.sigma0);
  c.sigma_min = j.value("sigma_min", defaults.sigma_min);
  c.proto_pair_delta = j.value("proto_pair_delta", defaults.proto_pair_delta);
  c.distractor_weight = j.value("distractor_weight", defaults.distractor_weight);
  c.shield_probability = j.value("shield_probability", defaults.shield_probability);
  c.proto_seed = j.value("proto_seed", defaults.proto_seed);
}

}  // namespace evar::world
