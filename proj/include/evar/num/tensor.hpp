#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace evar::num {

struct ShapeMismatch final : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using Vec = std::vector<double>;

struct Mat {
  int rows = 0;
  int cols = 0;
  Vec a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

inline double dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw ShapeMismatch("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline void axpy(double a, const Vec& x, Vec& y) {
  if (x.size() != y.size()) throw ShapeMismatch("axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline bool all_finite(const Vec& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

// A named parameter tensor with a gradient accumulator of the same shape.
struct Param {
  std::string name;
  std::vector<int> shape;
  Vec value;
  Vec grad;

  std::size_t size() const { return value.size(); }
  int rows() const { return shape.at(0); }
  int cols() const { return shape.size() > 1 ? shape[1] : 1; }
  double& at(int r, int c) { return value[static_cast<std::size_t>(r) * cols() + c]; }
  double at(int r, int c) const { return value[static_cast<std::size_t>(r) * cols() + c]; }
  double& gat(int r, int c) { return grad[static_cast<std::size_t>(r) * cols() + c]; }
};

// Owning collection of parameters; models refer to entries by index so the
// set stays trivially serializable and flattenable for optimizers and
// finite-difference checks.
struct ParamSet {
  std::vector<Param> params;

  Param& add(std::string name, std::vector<int> shape) {
    std::size_t n = 1;
    for (int d : shape) n *= static_cast<std::size_t>(d);
    params.push_back(Param{std::move(name), std::move(shape), Vec(n, 0.0), Vec(n, 0.0)});
    return params.back();
  }

  Param& operator[](std::size_t i) { return params[i]; }
  const Param& operator[](std::size_t i) const { return params[i]; }

  Param* find(const std::string& name) {
    for (auto& p : params)
      if (p.name == name) return &p;
    return nullptr;
  }

  void zero_grad() {
    for (auto& p : params) std::fill(p.grad.begin(), p.grad.end(), 0.0);
  }

  std::size_t total_size() const {
    std::size_t n = 0;
    for (const auto& p : params) n += p.size();
    return n;
  }

  Vec pack_values() const {
    Vec out;
    out.reserve(total_size());
    for (const auto& p : params) out.insert(out.end(), p.value.begin(), p.value.end());
    return out;
  }

  void unpack_values(const Vec& flat) {
    if (flat.size() != total_size()) throw ShapeMismatch("unpack_values: size mismatch");
    std::size_t off = 0;
    for (auto& p : params) {
      std::copy(flat.begin() + off, flat.begin() + off + p.size(), p.value.begin());
      off += p.size();
    }
  }

  Vec pack_grads() const {
    Vec out;
    out.reserve(total_size());
    for (const auto& p : params) out.insert(out.end(), p.grad.begin(), p.grad.end());
    return out;
  }

  double grad_norm() const {
    double s = 0.0;
    for (const auto& p : params)
      for (double g : p.grad) s += g * g;
    return std::sqrt(s);
  }

  // FNV-1a over the raw parameter bytes; used by the frozen-recognizer checks.
  std::uint64_t checksum() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& p : params)
      for (double v : p.value) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
          h ^= (bits >> (8 * i)) & 0xffULL;
          h *= 1099511628211ULL;
        }
      }
    return h;
  }
};

}  // namespace evar::num
