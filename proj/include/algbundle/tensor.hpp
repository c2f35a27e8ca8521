#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "algbundle/errors.hpp"

namespace algbundle {

/// Dense n x n x n real tensor stored row-major as [i][j][k] (0-based).
///
/// The tag parameter keeps structure constants and bilinear cochains apart at
/// the type level even though they share a layout: entry (i, j, k) is the
/// coefficient of x_k in the image of the basis pair (x_i, x_j).
template <class Tag>
class CubeTensor {
 public:
  CubeTensor() = default;

  explicit CubeTensor(int n) : n_(checked_dim(n)), data_(cube(n_), 0.0) {}

  CubeTensor(int n, std::vector<double> values) : n_(checked_dim(n)), data_(std::move(values)) {
    if (data_.size() != cube(n_)) {
      throw InputError("tensor of dimension " + std::to_string(n_) + " needs " +
                       std::to_string(cube(n_)) + " entries, got " + std::to_string(data_.size()));
    }
    for (double x : data_) {
      if (!std::isfinite(x)) throw InputError("tensor entries must be finite");
    }
  }

  template <class Fn>
  static CubeTensor from_function(int n, Fn&& fn) {
    CubeTensor t(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) t(i, j, k) = fn(i, j, k);
    return t;
  }

  int dim() const { return n_; }
  bool empty() const { return n_ == 0; }

  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }
  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }

  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

  double frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  CubeTensor& operator+=(const CubeTensor& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  CubeTensor& operator-=(const CubeTensor& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  CubeTensor& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }

  friend CubeTensor operator+(CubeTensor a, const CubeTensor& b) { return a += b; }
  friend CubeTensor operator-(CubeTensor a, const CubeTensor& b) { return a -= b; }
  friend CubeTensor operator*(double s, CubeTensor a) { return a *= s; }
  friend CubeTensor operator*(CubeTensor a, double s) { return a *= s; }
  friend bool operator==(const CubeTensor&, const CubeTensor&) = default;

 private:
  static int checked_dim(int n) {
    if (n < 1) throw InputError("dimension must be >= 1, got " + std::to_string(n));
    return n;
  }
  static std::size_t cube(int n) { return static_cast<std::size_t>(n) * n * n; }

  void require_same(const CubeTensor& o) const {
    if (o.n_ != n_) throw InputError("tensor dimension mismatch");
  }

  int n_ = 0;
  std::vector<double> data_;
};

struct AlgebraTag;
struct CochainTag;

/// Structure constants alpha_ij^k of one algebra point: x_i x_j = sum_k alpha_ij^k x_k.
using StructureConstants = CubeTensor<AlgebraTag>;

/// A bilinear map A x A -> A in coordinates. Serves both as a tangent vector
/// v_ij^k to the associator variety and as the 2-cochain f_v it defines.
using BilinearMapTensor = CubeTensor<CochainTag>;

template <class To, class From>
CubeTensor<To> retag(const CubeTensor<From>& t) {
  return CubeTensor<To>(t.dim(), std::vector<double>(t.values().begin(), t.values().end()));
}

inline BilinearMapTensor as_cochain(const StructureConstants& a) { return retag<CochainTag>(a); }
inline StructureConstants as_structure(const BilinearMapTensor& f) { return retag<AlgebraTag>(f); }

}  // namespace algbundle
