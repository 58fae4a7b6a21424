#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "evar/world/geometry.hpp"

// Per-instance recognition difficulty from the initial view: weighted sum of
// visibility, inverse relative distance over [3, 6] m and capped observed
// cells, with weights 0.2 / 0.2 / 0.6 and level thresholds 0.33 / 0.66.

namespace evar::bench {

struct RangeError final : std::out_of_range {
  using std::out_of_range::out_of_range;
};

enum class Level { kHard = 0, kModerate = 1, kEasy = 2 };

inline const char* level_name(Level level) {
  switch (level) {
    case Level::kHard: return "hard";
    case Level::kModerate: return "moderate";
    case Level::kEasy: return "easy";
  }
  return "?";
}

inline Level level_from_name(const std::string& name) {
  if (name == "hard") return Level::kHard;
  if (name == "moderate") return Level::kModerate;
  if (name == "easy") return Level::kEasy;
  throw std::invalid_argument("unknown difficulty level: " + name);
}

inline constexpr double kVisibilityWeight = 0.2;
inline constexpr double kDistanceWeight = 0.2;
inline constexpr double kPixelWeight = 0.6;
inline constexpr double kHardThreshold = 0.33;
inline constexpr double kEasyThreshold = 0.66;
inline constexpr double kMinStartDistanceM = 3.0;
inline constexpr double kMaxStartDistanceM = 6.0;

inline double difficulty_score(double visibility, double distance_m, int observed_cells,
                               int cap_cells) {
  if (visibility < 0.0 || visibility > 1.0)
    throw RangeError("difficulty_score: visibility outside [0,1]");
  if (distance_m < kMinStartDistanceM - 1e-9 || distance_m > kMaxStartDistanceM + 1e-9)
    throw RangeError("difficulty_score: distance outside [3,6] m");
  if (observed_cells < 0) throw RangeError("difficulty_score: negative observed cells");
  const double rel_dist = 1.0 - (distance_m - kMinStartDistanceM) /
                                    (kMaxStartDistanceM - kMinStartDistanceM);
  const double pixels_norm =
      std::min(1.0, static_cast<double>(observed_cells) / static_cast<double>(cap_cells));
  const double score = kVisibilityWeight * visibility + kDistanceWeight * rel_dist +
                       kPixelWeight * pixels_norm;
  return std::clamp(score, 0.0, 1.0);
}

inline double difficulty_score(const world::ViewStats& st, int cap_cells) {
  return difficulty_score(st.visibility, st.distance_m, st.observed_cells, cap_cells);
}

// boundary convention: 0.33 -> moderate, 0.66 -> easy
inline Level difficulty_level(double score) {
  if (score < 0.0 || score > 1.0) throw RangeError("difficulty_level: score outside [0,1]");
  if (score < kHardThreshold) return Level::kHard;
  if (score < kEasyThreshold) return Level::kModerate;
  return Level::kEasy;
}

struct DifficultyRecord {
  double visibility = 0.0;
  double distance_m = 0.0;
  int observed_cells = 0;
  double score = 0.0;
  Level level = Level::kHard;

  static DifficultyRecord from_stats(const world::ViewStats& st, int cap_cells) {
    DifficultyRecord r;
    r.visibility = st.visibility;
    r.distance_m = st.distance_m;
    r.observed_cells = st.observed_cells;
    r.score = difficulty_score(st, cap_cells);
    r.level = difficulty_level(r.score);
    return r;
  }

  // a stored record must re-score to itself
  bool consistent(int cap_cells, double tol = 1e-12) const {
    const double expect = difficulty_score(visibility, distance_m, observed_cells, cap_cells);
    return std::abs(expect - score) <= tol && difficulty_level(score) == level;
  }
};

}  // namespace evar::bench
