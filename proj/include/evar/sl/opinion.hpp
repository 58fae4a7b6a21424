#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

// Subjective-logic opinions over K exclusive classes: K singleton belief
// masses plus one uncertainty mass, summing to 1. Evidence e_k maps to an
// opinion through Dirichlet parameters alpha_k = e_k + 1 with strength
// S = sum(alpha): b_k = e_k / S, u = K / S.

namespace evar::sl {

struct DimensionMismatch final : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct TotalConflict final : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroUncertainty final : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptySequence final : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidEvidence final : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Opinion {
  std::vector<double> beliefs;
  double uncertainty = 1.0;

  int class_count() const { return static_cast<int>(beliefs.size()); }

  double belief_sum() const { return std::accumulate(beliefs.begin(), beliefs.end(), 0.0); }

  bool is_valid(double tol = 1e-12) const {
    if (class_count() < 2) return false;
    if (!(uncertainty >= -tol && uncertainty <= 1.0 + tol)) return false;
    for (double b : beliefs)
      if (!(b >= -tol && b <= 1.0 + tol) || !std::isfinite(b)) return false;
    return std::abs(belief_sum() + uncertainty - 1.0) <= tol;
  }

  static Opinion vacuous(int class_count) {
    return Opinion{std::vector<double>(class_count, 0.0), 1.0};
  }
};

struct EvidenceVector {
  std::vector<double> evidence;

  int class_count() const { return static_cast<int>(evidence.size()); }
  double alpha(int k) const { return evidence[k] + 1.0; }
  double strength() const {
    double s = 0.0;
    for (double e : evidence) s += e + 1.0;
    return s;
  }
};

inline Opinion opinion_from_evidence(const EvidenceVector& ev) {
  const int k = ev.class_count();
  if (k < 2) throw DimensionMismatch("opinion_from_evidence: need K >= 2");
  for (double e : ev.evidence)
    if (!(e >= 0.0) || !std::isfinite(e))
      throw InvalidEvidence("opinion_from_evidence: evidence must be finite and >= 0");
  const double s = ev.strength();
  Opinion op;
  op.beliefs.resize(k);
  for (int i = 0; i < k; ++i) op.beliefs[i] = ev.evidence[i] / s;
  op.uncertainty = static_cast<double>(k) / s;
  return op;
}

// Algebraic inverse: e_k = K b_k / u. Undefined for dogmatic opinions.
inline EvidenceVector evidence_from_opinion(const Opinion& op) {
  if (op.uncertainty <= 1e-15)
    throw ZeroUncertainty("evidence_from_opinion: uncertainty too small");
  const int k = op.class_count();
  EvidenceVector ev;
  ev.evidence.resize(k);
  for (int i = 0; i < k; ++i) ev.evidence[i] = static_cast<double>(k) * op.beliefs[i] / op.uncertainty;
  return ev;
}

// Reduced Dempster combination on the singleton + Theta mass class:
//   b_k = (b_k^a b_k^b + b_k^a u^b + b_k^b u^a) / (1 - C)
//   u   = u^a u^b / (1 - C)
// The pairwise conflict C is computed via the complement
// C = (sum b^a)(sum b^b) - sum_k b^a_k b^b_k to limit cancellation.
inline Opinion fuse_pair(const Opinion& a, const Opinion& b) {
  const int k = a.class_count();
  if (k != b.class_count()) throw DimensionMismatch("fuse_pair: class count mismatch");

  double sa = 0.0, sb = 0.0, agree = 0.0;
  for (int i = 0; i < k; ++i) {
    sa += a.beliefs[i];
    sb += b.beliefs[i];
    agree += a.beliefs[i] * b.beliefs[i];
  }
  const double conflict = sa * sb - agree;
  const double norm = 1.0 - conflict;
  if (norm < 1e-12) throw TotalConflict("fuse_pair: total conflict");

  Opinion out;
  out.beliefs.resize(k);
  for (int i = 0; i < k; ++i) {
    // symmetric summation order keeps fuse_pair(a,b) == fuse_pair(b,a) exact
    const double s = a.beliefs[i] * b.uncertainty;
    const double t = b.beliefs[i] * a.uncertainty;
    out.beliefs[i] = (a.beliefs[i] * b.beliefs[i] + (std::min(s, t) + std::max(s, t))) / norm;
  }
  out.uncertainty = a.uncertainty * b.uncertainty / norm;
  return out;
}

inline Opinion fuse_sequence(std::span<const Opinion> ops) {
  if (ops.empty()) throw EmptySequence("fuse_sequence: empty input");
  Opinion acc = ops[0];
  for (std::size_t i = 1; i < ops.size(); ++i) acc = fuse_pair(acc, ops[i]);
  return acc;
}

inline Opinion fuse_sequence(const std::vector<Opinion>& ops) {
  return fuse_sequence(std::span<const Opinion>(ops));
}

// Class indices ordered by belief descending, ties by ascending index.
inline std::vector<int> predict(const Opinion& op, int top_k) {
  const int k = op.class_count();
  if (top_k < 1 || top_k > k) throw DimensionMismatch("predict: rank out of range");
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    if (op.beliefs[i] != op.beliefs[j]) return op.beliefs[i] > op.beliefs[j];
    return i < j;
  });
  idx.resize(top_k);
  return idx;
}

inline int argmax_class(const Opinion& op) { return predict(op, 1)[0]; }

}  // namespace evar::sl
