#pragma once

#include <functional>

#include "evar/num/tensor.hpp"

namespace evar::num {

// Central finite differences at step h against a supplied analytic gradient.
// Returns max over parameters of |analytic - numeric| / max(1e-8, |numeric|).
inline double finite_diff_check(const std::function<double(const Vec&)>& f, const Vec& params,
                                const Vec& analytic_grad, double h = 1e-4) {
  if (params.size() != analytic_grad.size())
    throw ShapeMismatch("finite_diff_check: grad size mismatch");
  Vec p = params;
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double orig = p[i];
    p[i] = orig + h;
    const double fp = f(p);
    p[i] = orig - h;
    const double fm = f(p);
    p[i] = orig;
    const double numeric = (fp - fm) / (2.0 * h);
    const double err = std::abs(analytic_grad[i] - numeric) / std::max(1e-8, std::abs(numeric));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace evar::num
