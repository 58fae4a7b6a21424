#pragma once

#include "evar/num/tensor.hpp"

namespace evar::num {

// Gradient descent with momentum and global gradient-norm clipping.
struct SgdMomentum {
  double lr = 1e-2;
  double momentum = 0.9;
  double clip_norm = 5.0;
  Vec velocity;

  void step(ParamSet& ps) {
    if (velocity.size() != ps.total_size()) velocity.assign(ps.total_size(), 0.0);
    double scale = 1.0;
    if (clip_norm > 0.0) {
      const double gn = ps.grad_norm();
      if (gn > clip_norm) scale = clip_norm / gn;
    }
    std::size_t off = 0;
    for (auto& p : ps.params) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        double& v = velocity[off + i];
        v = momentum * v + scale * p.grad[i];
        p.value[i] -= lr * v;
      }
      off += p.size();
    }
  }

  void reset() { velocity.clear(); }
};

}  // namespace evar::num
