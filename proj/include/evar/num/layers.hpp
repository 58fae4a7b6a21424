#pragma once

#include <cmath>
#include <cstddef>

#include "evar/common/rng.hpp"
#include "evar/num/tensor.hpp"

// Micro layer kit with hand-written backward passes. Layers are stateless:
// forward caches travel through explicit arguments so a parameter set can be
// shared by concurrent readers.

namespace evar::num {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// ---------------------------------------------------------------------------
// affine: y = W x + b
// ---------------------------------------------------------------------------

struct Affine {
  int w = -1;  // index of weight param {out, in} in the owning ParamSet
  int b = -1;  // index of bias param {out}

  static Affine create(ParamSet& ps, const std::string& name, int in, int out) {
    Affine layer;
    layer.w = static_cast<int>(ps.params.size());
    ps.add(name + ".w", {out, in});
    layer.b = static_cast<int>(ps.params.size());
    ps.add(name + ".b", {out});
    return layer;
  }

  void init(ParamSet& ps, Rng& rng, double scale) const {
    for (double& v : ps[w].value) v = scale * rng.normal();
    for (double& v : ps[b].value) v = 0.0;
  }

  Vec forward(const ParamSet& ps, const Vec& x) const {
    const Param& pw = ps[w];
    const Param& pb = ps[b];
    const int out = pw.rows(), in = pw.cols();
    if (static_cast<int>(x.size()) != in) throw ShapeMismatch("affine: input size");
    Vec y(pb.value);
    for (int r = 0; r < out; ++r) {
      double s = 0.0;
      for (int c = 0; c < in; ++c) s += pw.at(r, c) * x[c];
      y[r] += s;
    }
    return y;
  }

  // accumulates parameter grads; returns gradient w.r.t. x
  Vec backward(ParamSet& ps, const Vec& x, const Vec& gy) const {
    Param& pw = ps[w];
    Param& pb = ps[b];
    const int out = pw.rows(), in = pw.cols();
    if (static_cast<int>(gy.size()) != out) throw ShapeMismatch("affine: grad size");
    Vec gx(in, 0.0);
    for (int r = 0; r < out; ++r) {
      pb.grad[r] += gy[r];
      for (int c = 0; c < in; ++c) {
        pw.gat(r, c) += gy[r] * x[c];
        gx[c] += pw.at(r, c) * gy[r];
      }
    }
    return gx;
  }
};

// ---------------------------------------------------------------------------
// non-negative evidence activation
// ---------------------------------------------------------------------------

enum class EvidenceActivation { kClampedExp, kSigmoid };

inline constexpr double kEvidenceClamp = 10.0;

inline Vec evidence_forward(const Vec& z, EvidenceActivation act) {
  Vec e(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (act == EvidenceActivation::kClampedExp) {
      const double c = std::clamp(z[i], -kEvidenceClamp, kEvidenceClamp);
      e[i] = std::exp(c);
    } else {
      e[i] = sigmoid(z[i]);
    }
  }
  return e;
}

inline Vec evidence_backward(const Vec& z, const Vec& ge, EvidenceActivation act) {
  if (z.size() != ge.size()) throw ShapeMismatch("evidence_backward: size mismatch");
  Vec gz(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (act == EvidenceActivation::kClampedExp) {
      const bool inside = z[i] > -kEvidenceClamp && z[i] < kEvidenceClamp;
      gz[i] = inside ? ge[i] * std::exp(z[i]) : 0.0;
    } else {
      const double s = sigmoid(z[i]);
      gz[i] = ge[i] * s * (1.0 - s);
    }
  }
  return gz;
}

// ---------------------------------------------------------------------------
// tanh
// ---------------------------------------------------------------------------

inline Vec tanh_forward(const Vec& z) {
  Vec y(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) y[i] = std::tanh(z[i]);
  return y;
}

// takes the forward output, not the pre-activation
inline Vec tanh_backward(const Vec& y, const Vec& gy) {
  Vec gz(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) gz[i] = gy[i] * (1.0 - y[i] * y[i]);
  return gz;
}

// ---------------------------------------------------------------------------
// gated recurrent cell
//   r = sig(Wr x + Ur h + br)
//   z = sig(Wz x + Uz h + bz)
//   n = tanh(Wn x + bn + r .* (Un h))
//   h' = (1 - z) .* n + z .* h
// ---------------------------------------------------------------------------

struct GruCell {
  int in = 0;
  int hidden = 0;
  Affine wx_r, wh_r, wx_z, wh_z, wx_n, wh_n;  // wh_* carry the recurrent biases at zero

  struct Cache {
    Vec x, h_prev;
    Vec r, z, n;
    Vec un_h;  // Un h term, needed for the reset-gate gradient
  };

  static GruCell create(ParamSet& ps, const std::string& name, int in, int hidden) {
    GruCell cell;
    cell.in = in;
    cell.hidden = hidden;
    cell.wx_r = Affine::create(ps, name + ".xr", in, hidden);
    cell.wh_r = Affine::create(ps, name + ".hr", hidden, hidden);
    cell.wx_z = Affine::create(ps, name + ".xz", in, hidden);
    cell.wh_z = Affine::create(ps, name + ".hz", hidden, hidden);
    cell.wx_n = Affine::create(ps, name + ".xn", in, hidden);
    cell.wh_n = Affine::create(ps, name + ".hn", hidden, hidden);
    return cell;
  }

  void init(ParamSet& ps, Rng& rng, double scale) const {
    for (const Affine* a : {&wx_r, &wh_r, &wx_z, &wh_z, &wx_n, &wh_n}) a->init(ps, rng, scale);
  }

  Vec forward(const ParamSet& ps, const Vec& x, const Vec& h_prev, Cache* cache = nullptr) const {
    Vec r = wx_r.forward(ps, x);
    axpy(1.0, wh_r.forward(ps, h_prev), r);
    for (double& v : r) v = sigmoid(v);

    Vec z = wx_z.forward(ps, x);
    axpy(1.0, wh_z.forward(ps, h_prev), z);
    for (double& v : z) v = sigmoid(v);

    Vec un_h = wh_n.forward(ps, h_prev);
    Vec n = wx_n.forward(ps, x);
    for (int i = 0; i < hidden; ++i) n[i] = std::tanh(n[i] + r[i] * un_h[i]);

    Vec h(hidden);
    for (int i = 0; i < hidden; ++i) h[i] = (1.0 - z[i]) * n[i] + z[i] * h_prev[i];

    if (cache) *cache = Cache{x, h_prev, std::move(r), std::move(z), std::move(n), std::move(un_h)};
    return h;
  }

  // returns gradient w.r.t. h_prev; optionally fills gx
  Vec backward(ParamSet& ps, const Cache& c, const Vec& gh, Vec* gx_out = nullptr) const {
    Vec gh_prev(hidden, 0.0);
    Vec gx(in, 0.0);

    Vec gn(hidden), gz_pre(hidden), gn_pre(hidden), gr_pre(hidden), g_unh(hidden);
    for (int i = 0; i < hidden; ++i) {
      const double gzi = gh[i] * (c.h_prev[i] - c.n[i]);
      gn[i] = gh[i] * (1.0 - c.z[i]);
      gh_prev[i] += gh[i] * c.z[i];
      gz_pre[i] = gzi * c.z[i] * (1.0 - c.z[i]);
      gn_pre[i] = gn[i] * (1.0 - c.n[i] * c.n[i]);
      const double gri = gn_pre[i] * c.un_h[i];
      g_unh[i] = gn_pre[i] * c.r[i];
      gr_pre[i] = gri * c.r[i] * (1.0 - c.r[i]);
    }

    axpy(1.0, wx_n.backward(ps, c.x, gn_pre), gx);
    axpy(1.0, wh_n.backward(ps, c.h_prev, g_unh), gh_prev);
    axpy(1.0, wx_z.backward(ps, c.x, gz_pre), gx);
    axpy(1.0, wh_z.backward(ps, c.h_prev, gz_pre), gh_prev);
    axpy(1.0, wx_r.backward(ps, c.x, gr_pre), gx);
    axpy(1.0, wh_r.backward(ps, c.h_prev, gr_pre), gh_prev);

    if (gx_out) *gx_out = std::move(gx);
    return gh_prev;
  }
};

// ---------------------------------------------------------------------------
// softmax log-probabilities
// ---------------------------------------------------------------------------

inline Vec log_softmax(const Vec& z) {
  double m = z[0];
  for (double v : z) m = std::max(m, v);
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - m);
  const double lse = m + std::log(sum);
  Vec lp(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) lp[i] = z[i] - lse;
  return lp;
}

// vector-Jacobian product: given dL/dlogp, return dL/dz
inline Vec log_softmax_backward(const Vec& logp, const Vec& glp) {
  if (logp.size() != glp.size()) throw ShapeMismatch("log_softmax_backward: size mismatch");
  double gsum = 0.0;
  for (double g : glp) gsum += g;
  Vec gz(logp.size());
  for (std::size_t i = 0; i < logp.size(); ++i) gz[i] = glp[i] - std::exp(logp[i]) * gsum;
  return gz;
}

inline double entropy_from_logp(const Vec& logp) {
  double h = 0.0;
  for (double lp : logp) h -= std::exp(lp) * lp;
  return h;
}

// dH/dz_j = -p_j (logp_j + H)
inline Vec entropy_backward(const Vec& logp, double gh) {
  const double h = entropy_from_logp(logp);
  Vec gz(logp.size());
  for (std::size_t i = 0; i < logp.size(); ++i)
    gz[i] = -gh * std::exp(logp[i]) * (logp[i] + h);
  return gz;
}

}  // namespace evar::num
