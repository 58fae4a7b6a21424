#pragma once

#include <cstdint>
#include <vector>

#include "evar/sl/opinion.hpp"

// Full Dempster-Shafer mass functions over 2^Theta, used as the brute-force
// oracle for the reduced singleton+Theta combination. Subsets are bitmasks
// over class indices; K is capped at 12 to keep exact enumeration cheap.

namespace evar::sl {

struct FrameTooLarge final : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct HyperMass {
  int class_count = 0;
  std::vector<double> mass;  // indexed by subset bitmask; mass[0] (empty set) stays 0

  static HyperMass zero(int k) {
    if (k < 2) throw DimensionMismatch("HyperMass: need K >= 2");
    if (k > 12) throw FrameTooLarge("HyperMass: K > 12");
    return HyperMass{k, std::vector<double>(std::size_t(1) << k, 0.0)};
  }

  std::uint32_t theta() const { return (std::uint32_t(1) << class_count) - 1; }

  double total() const {
    double s = 0.0;
    for (double m : mass) s += m;
    return s;
  }

  bool is_valid(double tol = 1e-12) const {
    if (mass[0] != 0.0) return false;
    for (double m : mass)
      if (m < -tol) return false;
    return std::abs(total() - 1.0) <= tol;
  }
};

inline HyperMass hyper_from_opinion(const Opinion& op) {
  HyperMass h = HyperMass::zero(op.class_count());
  for (int k = 0; k < op.class_count(); ++k) h.mass[std::uint32_t(1) << k] = op.beliefs[k];
  h.mass[h.theta()] = op.uncertainty;
  return h;
}

// Reduction of a hyper-opinion: singleton masses become beliefs, all
// non-singleton mass is aggregated into the uncertainty term.
inline Opinion opinion_from_hyper(const HyperMass& h) {
  Opinion op;
  op.beliefs.assign(h.class_count, 0.0);
  op.uncertainty = 0.0;
  for (std::uint32_t s = 1; s < h.mass.size(); ++s) {
    if ((s & (s - 1)) == 0) {
      int k = 0;
      while ((s >> k) != 1u) ++k;
      op.beliefs[k] = h.mass[s];
    } else {
      op.uncertainty += h.mass[s];
    }
  }
  return op;
}

// Exact Dempster rule over all focal-element pairs:
//   m(P) = (1/N) sum_{P1 cap P2 = P, P nonempty} m_a(P1) m_b(P2)
// with N the total mass landing on non-empty intersections.
inline HyperMass brute_force_dempster(const HyperMass& a, const HyperMass& b) {
  if (a.class_count != b.class_count)
    throw DimensionMismatch("brute_force_dempster: frame mismatch");
  if (a.class_count > 12) throw FrameTooLarge("brute_force_dempster: K > 12");

  HyperMass out = HyperMass::zero(a.class_count);
  double valid = 0.0;
  for (std::uint32_t s = 1; s < a.mass.size(); ++s) {
    if (a.mass[s] == 0.0) continue;
    for (std::uint32_t t = 1; t < b.mass.size(); ++t) {
      if (b.mass[t] == 0.0) continue;
      const std::uint32_t inter = s & t;
      if (inter == 0) continue;
      const double m = a.mass[s] * b.mass[t];
      out.mass[inter] += m;
      valid += m;
    }
  }
  if (valid < 1e-12) throw TotalConflict("brute_force_dempster: total conflict");
  for (double& m : out.mass) m /= valid;
  return out;
}

}  // namespace evar::sl
