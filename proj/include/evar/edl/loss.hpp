#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "evar/num/special.hpp"
#include "evar/num/tensor.hpp"

// Evidential losses on Dirichlet parameters alpha = evidence + 1:
//   L_edl = sum_i y_i [log(sum_j alpha_j) - log(alpha_i)]
//   L_kl  = KL( Dir(alpha~) || Dir(1,...,1) ),  alpha~ = y + (1-y) .* alpha
//   L     = L_edl + lambda_kl * L_kl
// with lambda_kl annealed linearly from 0 to 1.

namespace evar::edl {

struct InvalidLabel final : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline void check_alpha(const num::Vec& alpha) {
  if (alpha.size() < 2) throw std::invalid_argument("alpha: need K >= 2");
  for (double a : alpha)
    if (!(a >= 1.0) || !std::isfinite(a))
      throw std::invalid_argument("alpha: components must be finite and >= 1");
}

inline int label_from_one_hot(const num::Vec& y) {
  int c = -1;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 1.0) {
      if (c >= 0) throw InvalidLabel("label: more than one hot component");
      c = static_cast<int>(i);
    } else if (y[i] != 0.0) {
      throw InvalidLabel("label: components must be exactly 0 or 1");
    }
  }
  if (c < 0) throw InvalidLabel("label: no hot component");
  return c;
}

namespace detail {

// accumulate in sorted order so the result is exactly permutation-invariant
inline double sum_canonical(num::Vec v) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace detail

inline double edl_loss(const num::Vec& alpha, int true_class) {
  check_alpha(alpha);
  if (true_class < 0 || true_class >= static_cast<int>(alpha.size()))
    throw InvalidLabel("edl_loss: class out of range");
  const double s = detail::sum_canonical(alpha);
  return std::log(s) - std::log(alpha[true_class]);
}

inline double edl_loss(const num::Vec& alpha, const num::Vec& y) {
  if (alpha.size() != y.size()) throw InvalidLabel("edl_loss: label size mismatch");
  return edl_loss(alpha, label_from_one_hot(y));
}

// d L_edl / d alpha_k = 1/S - [k == c]/alpha_c
inline num::Vec edl_loss_grad(const num::Vec& alpha, int true_class) {
  double s = 0.0;
  for (double a : alpha) s += a;
  num::Vec g(alpha.size(), 1.0 / s);
  g[true_class] -= 1.0 / alpha[true_class];
  return g;
}

namespace detail {

// KL( Dir(a) || Dir(1,...,1) ) in closed form, permutation-exact.
inline double kl_to_uniform(num::Vec a) {
  const int k = static_cast<int>(a.size());
  std::sort(a.begin(), a.end());
  double s = 0.0;
  for (double v : a) s += v;
  double out = num::lgamma(s) - num::lgamma(static_cast<double>(k));
  const double psi_s = num::digamma(s);
  for (double v : a) out += -num::lgamma(v) + (v - 1.0) * (num::digamma(v) - psi_s);
  return out;
}

// d/d a_k of kl_to_uniform
inline num::Vec kl_to_uniform_grad(const num::Vec& a) {
  const int k = static_cast<int>(a.size());
  double s = 0.0;
  for (double v : a) s += v;
  const double tail = (s - static_cast<double>(k)) * num::trigamma(s);
  num::Vec g(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) g[i] = (a[i] - 1.0) * num::trigamma(a[i]) - tail;
  return g;
}

inline num::Vec misleading_alpha(const num::Vec& alpha, int true_class) {
  num::Vec at = alpha;
  at[true_class] = 1.0;
  return at;
}

}  // namespace detail

inline double kl_regularizer(const num::Vec& alpha, int true_class) {
  check_alpha(alpha);
  if (true_class < 0 || true_class >= static_cast<int>(alpha.size()))
    throw InvalidLabel("kl_regularizer: class out of range");
  return detail::kl_to_uniform(detail::misleading_alpha(alpha, true_class));
}

inline double kl_regularizer(const num::Vec& alpha, const num::Vec& y) {
  if (alpha.size() != y.size()) throw InvalidLabel("kl_regularizer: label size mismatch");
  return kl_regularizer(alpha, label_from_one_hot(y));
}

// gradient w.r.t. alpha; the true-class slot is frozen by the substitution
inline num::Vec kl_regularizer_grad(const num::Vec& alpha, int true_class) {
  num::Vec g = detail::kl_to_uniform_grad(detail::misleading_alpha(alpha, true_class));
  g[true_class] = 0.0;
  return g;
}

inline double total_loss(const num::Vec& alpha, int true_class, double lambda_kl) {
  if (lambda_kl < 0.0 || lambda_kl > 1.0)
    throw std::invalid_argument("total_loss: lambda_kl outside [0,1]");
  double loss = edl_loss(alpha, true_class);
  if (lambda_kl > 0.0) loss += lambda_kl * kl_regularizer(alpha, true_class);
  return loss;
}

// gradient w.r.t. evidence (alpha = e + 1, so d/de = d/dalpha)
inline num::Vec total_loss_grad(const num::Vec& alpha, int true_class, double lambda_kl) {
  num::Vec g = edl_loss_grad(alpha, true_class);
  if (lambda_kl > 0.0) num::axpy(lambda_kl, kl_regularizer_grad(alpha, true_class), g);
  return g;
}

// linear ramp: min(1, epoch / horizon)
inline double anneal_lambda(int epoch, int horizon) {
  if (epoch < 0 || horizon < 1) throw std::invalid_argument("anneal_lambda: bad arguments");
  return std::min(1.0, static_cast<double>(epoch) / static_cast<double>(horizon));
}

}  // namespace evar::edl
