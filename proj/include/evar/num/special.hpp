#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

// Log-gamma, digamma and trigamma good to ~1e-12 absolute on [1e-3, 1e3],
// dependency-free. Needed by the Dirichlet KL term and its gradient.

namespace evar::num {

struct DomainError final : std::domain_error {
  using std::domain_error::domain_error;
};

// Lanczos approximation, g = 7, 9 coefficients.
inline double lgamma(double x) {
  if (!(x > 0.0)) throw DomainError("lgamma: requires x > 0");
  static constexpr double kCoef[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,    12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection: lgamma(x) = log(pi / sin(pi x)) - lgamma(1 - x)
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - lgamma(1.0 - x);
  }
  const double z = x - 1.0;
  double series = kCoef[0];
  for (int i = 1; i < 9; ++i) series += kCoef[i] / (z + i);
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

// Recurrence lift to x >= 6, then the asymptotic series through x^-14.
inline double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma: requires x > 0");
  double acc = 0.0;
  while (x < 6.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // psi(x) ~ ln x - 1/(2x) - sum B_2n / (2n x^2n)
  double series = std::log(x) - 0.5 * inv;
  series -= inv2 * (1.0 / 12.0 -
             inv2 * (1.0 / 120.0 -
             inv2 * (1.0 / 252.0 -
             inv2 * (1.0 / 240.0 -
             inv2 * (1.0 / 132.0 -
             inv2 * (691.0 / 32760.0 -
             inv2 * (1.0 / 12.0)))))));
  return acc + series;
}

// psi'(x); same lift, series through x^-13.
inline double trigamma(double x) {
  if (!(x > 0.0)) throw DomainError("trigamma: requires x > 0");
  double acc = 0.0;
  while (x < 6.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = inv + 0.5 * inv2;
  series += inv * inv2 * (1.0 / 6.0 -
             inv2 * (1.0 / 30.0 -
             inv2 * (1.0 / 42.0 -
             inv2 * (1.0 / 30.0 -
             inv2 * (5.0 / 66.0 -
             inv2 * (691.0 / 2730.0 -
             inv2 * (7.0 / 6.0)))))));
  return acc + series;
}

}  // namespace evar::num
