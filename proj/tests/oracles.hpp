#pragma once

// Test-only reference computations. Everything here is written from the
// defining formulas with plain loops and arrays and deliberately avoids the
// library's code paths (no multiply, no tangent_operator, no SVD).

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "algbundle/tensor.hpp"

namespace oracle {

using algbundle::StructureConstants;

inline StructureConstants make(int n, std::initializer_list<std::tuple<int, int, int, double>> ones_based) {
  StructureConstants a(n);
  for (auto [i, j, k, v] : ones_based) a(i - 1, j - 1, k - 1) = v;
  return a;
}

// R + R: x1 x1 = x1, x2 x2 = x2.
inline StructureConstants direct_sum_rr() { return make(2, {{1, 1, 1, 1.0}, {2, 2, 2, 1.0}}); }

// R[x]/(x^2 - t) in basis {1, x}: x1 unit, x2 x2 = t x1.
inline StructureConstants quadratic(double t) {
  return make(2, {{1, 1, 1, 1.0}, {1, 2, 2, 1.0}, {2, 1, 2, 1.0}, {2, 2, 1, t}});
}
inline StructureConstants dual_numbers() { return quadratic(0.0); }
inline StructureConstants complex_numbers() { return quadratic(-1.0); }
inline StructureConstants split_complex() { return quadratic(1.0); }

// Upper triangular 2x2 matrices, basis e11, e12, e22.
inline StructureConstants upper_triangular() {
  return make(3, {{1, 1, 1, 1.0}, {1, 2, 2, 1.0}, {2, 3, 2, 1.0}, {3, 3, 3, 1.0}});
}

inline std::vector<double> basis_product(const StructureConstants& a, int i, int j) {
  std::vector<double> w(a.dim(), 0.0);
  for (int k = 0; k < a.dim(); ++k) w[k] = a(i, j, k);
  return w;
}

inline std::vector<double> product(const StructureConstants& a, const std::vector<double>& u,
                                   const std::vector<double>& v) {
  const int n = a.dim();
  std::vector<double> w(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) w[k] += u[i] * v[j] * a(i, j, k);
  return w;
}

// (x_i x_j) x_k - x_i (x_j x_k), component m, evaluated by explicit products.
inline double associator(const StructureConstants& a, int i, int j, int k, int m) {
  const int n = a.dim();
  std::vector<double> xi(n, 0.0), xk(n, 0.0);
  xi[i] = 1.0;
  xk[k] = 1.0;
  const auto left = product(a, basis_product(a, i, j), xk);
  const auto right = product(a, xi, basis_product(a, j, k));
  return left[m] - right[m];
}

inline double associator_max_abs(const StructureConstants& a) {
  const int n = a.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) worst = std::max(worst, std::abs(associator(a, i, j, k, m)));
  return worst;
}

inline std::vector<double> associator_vector(const StructureConstants& a) {
  const int n = a.dim();
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) out.push_back(associator(a, i, j, k, m));
  return out;
}

// Tangent equation entry for (i,j,k,m) at direction v, straight from the
// four-term sum.
template <class V>
double tangent_entry(const StructureConstants& a, const V& v, int i, int j, int k, int m) {
  double s = 0.0;
  for (int l = 0; l < a.dim(); ++l) {
    s += a(i, j, l) * v(l, k, m) + a(l, k, m) * v(i, j, l) - a(i, l, m) * v(j, k, l) -
         a(j, k, l) * v(i, l, m);
  }
  return s;
}

// Matrix of the tangent equations built one basis direction at a time.
inline Eigen::MatrixXd tangent_matrix(const StructureConstants& a) {
  const int n = a.dim();
  const int n3 = n * n * n;
  Eigen::MatrixXd m(n3 * n, n3);
  for (int c = 0; c < n3; ++c) {
    StructureConstants e(n);
    e.values()[c] = 1.0;
    int row = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int mm = 0; mm < n; ++mm) m(row++, c) = tangent_entry(a, e, i, j, k, mm);
  }
  return m;
}

// Rank by Gaussian elimination with full pivoting.
inline int gauss_rank(Eigen::MatrixXd m, double tol) {
  int rank = 0;
  const int rows = static_cast<int>(m.rows()), cols = static_cast<int>(m.cols());
  std::vector<bool> used_col(cols, false);
  for (int r = 0; r < rows && rank < cols; ++r) {
    double best = 0.0;
    int br = -1, bc = -1;
    for (int i = rank; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (!used_col[j] && std::abs(m(i, j)) > best) best = std::abs(m(i, j)), br = i, bc = j;
    if (best <= tol) break;
    m.row(rank).swap(m.row(br));
    used_col[bc] = true;
    for (int i = 0; i < rows; ++i) {
      if (i == rank) continue;
      const double f = m(i, bc) / m(rank, bc);
      m.row(i) -= f * m.row(rank);
    }
    ++rank;
  }
  return rank;
}

// g . mu(g^-1 ., g^-1 .) with six explicit loops.
inline StructureConstants conjugate(const StructureConstants& a, const Eigen::MatrixXd& g) {
  const int n = a.dim();
  const Eigen::MatrixXd h = g.inverse();
  StructureConstants out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int c = 0; c < n; ++c) s += g(k, c) * a(p, q, c) * h(p, i) * h(q, j);
        out(i, j, k) = s;
      }
  return out;
}

inline Eigen::MatrixXd rotation(double angle) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

// Well-conditioned random matrix: identity plus a small random part.
template <class Rng>
Eigen::MatrixXd random_invertible(int n, Rng& rng, double spread = 0.4) {
  std::uniform_real_distribution<double> u(-spread, spread);
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g(r, c) += u(rng);
  return g;
}

template <class Rng>
StructureConstants random_tensor(int n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  StructureConstants a(n);
  for (double& x : a.values()) x = normal(rng);
  return a;
}

template <class Tag, class Rng>
algbundle::CubeTensor<Tag> random_cube(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  algbundle::CubeTensor<Tag> a(n);
  for (double& x : a.values()) x = normal(rng);
  return a;
}

}  // namespace oracle

namespace oracle {

// d/dt of conjugate(a, g(t)) given g and g'.
inline StructureConstants conjugate_derivative(const StructureConstants& a, const Eigen::MatrixXd& g,
                                               const Eigen::MatrixXd& gdot) {
  const int n = a.dim();
  const Eigen::MatrixXd h = g.inverse();
  const Eigen::MatrixXd hdot = -h * gdot * h;
  StructureConstants out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int c = 0; c < n; ++c)
              s += a(p, q, c) * (gdot(k, c) * h(p, i) * h(q, j) + g(k, c) * hdot(p, i) * h(q, j) +
                                 g(k, c) * h(p, i) * hdot(q, j));
        out(i, j, k) = s;
      }
  return out;
}

inline Eigen::MatrixXd rotation_derivative(double angle) {
  Eigen::MatrixXd r(2, 2);
  r << -std::sin(angle), -std::cos(angle), std::cos(angle), -std::sin(angle);
  return r;
}

}  // namespace oracle
