#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "evar/sl/opinion.hpp"

namespace evar::agent {

enum class FusionKind { kEvidential = 0, kMaxPrediction = 1, kLastStep = 2, kAverage = 3, kVote = 4 };

inline const char* fusion_name(FusionKind k) {
  switch (k) {
    case FusionKind::kEvidential: return "evidential";
    case FusionKind::kMaxPrediction: return "max";
    case FusionKind::kLastStep: return "last";
    case FusionKind::kAverage: return "average";
    case FusionKind::kVote: return "vote";
  }
  return "?";
}

inline FusionKind fusion_from_name(const std::string& name) {
  if (name == "evidential") return FusionKind::kEvidential;
  if (name == "max") return FusionKind::kMaxPrediction;
  if (name == "last") return FusionKind::kLastStep;
  if (name == "average") return FusionKind::kAverage;
  if (name == "vote") return FusionKind::kVote;
  throw std::invalid_argument("unknown fusion strategy: " + name);
}

struct FusionOutcome {
  std::vector<int> ranking;  // all classes, best first
  sl::Opinion fused;         // populated when the strategy defines one
  bool has_fused = false;

  int prediction() const { return ranking.front(); }
  bool in_top(int k, int cls) const {
    for (int i = 0; i < k && i < static_cast<int>(ranking.size()); ++i)
      if (ranking[i] == cls) return true;
    return false;
  }
};

namespace detail {

inline std::vector<int> rank_by_score(const std::vector<double>& score) {
  std::vector<int> idx(score.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    if (score[i] != score[j]) return score[i] > score[j];
    return i < j;
  });
  return idx;
}

}  // namespace detail

// Late-fusion alternatives over a sequence of per-step opinions. All five
// agree on length-1 sequences.
inline FusionOutcome fuse_strategy(FusionKind kind, std::span<const sl::Opinion> opinions) {
  if (opinions.empty()) throw sl::EmptySequence("fuse_strategy: empty opinion sequence");
  const int k = opinions.front().class_count();
  FusionOutcome out;

  switch (kind) {
    case FusionKind::kEvidential: {
      out.fused = sl::fuse_sequence(opinions);
      out.has_fused = true;
      out.ranking = sl::predict(out.fused, k);
      break;
    }
    case FusionKind::kMaxPrediction: {
      std::vector<double> score(k, 0.0);
      for (const auto& op : opinions)
        for (int c = 0; c < k; ++c) score[c] = std::max(score[c], op.beliefs[c]);
      out.ranking = detail::rank_by_score(score);
      break;
    }
    case FusionKind::kLastStep: {
      out.fused = opinions.back();
      out.has_fused = true;
      out.ranking = sl::predict(out.fused, k);
      break;
    }
    case FusionKind::kAverage: {
      std::vector<double> score(k, 0.0);
      for (const auto& op : opinions)
        for (int c = 0; c < k; ++c) score[c] += op.beliefs[c] / static_cast<double>(opinions.size());
      out.ranking = detail::rank_by_score(score);
      break;
    }
    case FusionKind::kVote: {
      std::vector<int> votes(k, 0);
      std::vector<int> first_vote(k, std::numeric_limits<int>::max());
      for (std::size_t t = 0; t < opinions.size(); ++t) {
        const int c = sl::argmax_class(opinions[t]);
        ++votes[c];
        first_vote[c] = std::min(first_vote[c], static_cast<int>(t));
      }
      std::vector<int> idx(k);
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        if (votes[i] != votes[j]) return votes[i] > votes[j];
        if (first_vote[i] != first_vote[j]) return first_vote[i] < first_vote[j];
        return i < j;
      });
      out.ranking = idx;
      break;
    }
  }
  return out;
}

inline FusionOutcome fuse_strategy(FusionKind kind, const std::vector<sl::Opinion>& opinions) {
  return fuse_strategy(kind, std::span<const sl::Opinion>(opinions));
}

}  // namespace evar::agent
