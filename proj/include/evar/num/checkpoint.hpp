#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "evar/num/tensor.hpp"

// Parameter checkpoints: versioned JSON record of named arrays with shapes.
// Doubles survive the round trip exactly (shortest round-trip serialization).

namespace evar::num {

inline constexpr int kCheckpointVersion = 1;

struct CheckpointError final : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline nlohmann::json checkpoint_to_json(const ParamSet& ps, const nlohmann::json& meta = {}) {
  nlohmann::json arrays = nlohmann::json::object();
  for (const auto& p : ps.params) {
    arrays[p.name] = {{"shape", p.shape}, {"data", p.value}};
  }
  nlohmann::json j = {{"version", kCheckpointVersion}, {"arrays", arrays}};
  if (!meta.is_null() && !meta.empty()) j["meta"] = meta;
  return j;
}

inline void save_checkpoint(const std::string& path, const ParamSet& ps,
                            const nlohmann::json& meta = {}) {
  std::ofstream out(path);
  if (!out) throw CheckpointError("cannot open checkpoint for writing: " + path);
  out << checkpoint_to_json(ps, meta).dump() << "\n";
}

// Fills an already-constructed ParamSet (shapes must match). Returns meta.
inline nlohmann::json load_checkpoint(const std::string& path, ParamSet& ps) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("malformed checkpoint " + path + ": " + e.what());
  }
  if (!j.contains("version") || j["version"].get<int>() != kCheckpointVersion)
    throw CheckpointError("checkpoint version mismatch: " + path);
  const auto& arrays = j.at("arrays");
  for (auto& p : ps.params) {
    if (!arrays.contains(p.name)) throw CheckpointError("checkpoint missing array: " + p.name);
    const auto& entry = arrays.at(p.name);
    const auto shape = entry.at("shape").get<std::vector<int>>();
    if (shape != p.shape) throw CheckpointError("checkpoint shape mismatch for: " + p.name);
    const auto data = entry.at("data").get<Vec>();
    if (data.size() != p.size()) throw CheckpointError("checkpoint size mismatch for: " + p.name);
    p.value = data;
  }
  return j.value("meta", nlohmann::json::object());
}

}  // namespace evar::num
