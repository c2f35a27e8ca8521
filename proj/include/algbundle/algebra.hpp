#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "algbundle/tensor.hpp"

namespace algbundle {

inline constexpr double kDefaultTol = 1e-9;

/// Coordinates of a two-sided unit element.
struct UnitVector {
  Eigen::VectorXd e;
  double residual = 0.0;  // max-abs defect of the 2n^2 unit equations
};

/// Isomorphism invariants of one associative algebra. Equal algebras (up to
/// change of basis) have equal signatures; the converse does not hold.
struct IsoSignature {
  int dim = 0;
  bool commutative = false;
  bool unital = false;
  int trace_positive = 0;  // eigenvalue counts of T(a, b) = trace(L_a L_b)
  int trace_negative = 0;
  int trace_zero = 0;
  int z2_dim = 0;
  int center_dim = 0;

  friend bool operator==(const IsoSignature&, const IsoSignature&) = default;
  friend auto operator<=>(const IsoSignature&, const IsoSignature&) = default;
};

struct AssociatorResidual {
  int n = 0;
  std::vector<double> values;  // R[i][j][k][m], row-major, n^4 entries
  double frobenius_norm = 0.0;
  double max_abs = 0.0;

  double operator()(int i, int j, int k, int m) const {
    return values[((static_cast<std::size_t>(i) * n + j) * n + k) * n + m];
  }
};

/// w_k = sum_{i,j} u_i v_j alpha_ij^k.
Eigen::VectorXd multiply(const StructureConstants& a, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& v);

/// Same contraction for an arbitrary bilinear map tensor.
Eigen::VectorXd apply_bilinear(const BilinearMapTensor& f, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& v);

/// Left multiplication operator L_x as a matrix: column j holds x * x_j.
Eigen::MatrixXd left_multiplication(const StructureConstants& a, const Eigen::VectorXd& x);

/// R_ijkm = sum_l (alpha_ij^l alpha_lk^m - alpha_il^m alpha_jk^l), i.e. the
/// x_m coefficient of (x_i x_j) x_k - x_i (x_j x_k).
AssociatorResidual associator_residual(const StructureConstants& a);

std::optional<UnitVector> find_unit(const StructureConstants& a, double tol = kDefaultTol);

/// x_i x_j = x_k with k = i + j mod n, residue 0 read as n (1-based indices).
/// This is the group algebra of Z/n; the unit is x_n.
StructureConstants gen_truncated(int n);

/// alpha_ij^k = g(k) h(i) h(j).
StructureConstants gen_gh(std::span<const double> g, std::span<const double> h);

/// The canonical real instance g(k) = k, h(j) = (-1)^j.
StructureConstants gen_gh_canonical(int n);

/// Transport of structure along a change of basis: g . mu(g^-1 ., g^-1 .).
/// If g is invertible the result is isomorphic to `a` via g.
StructureConstants change_basis(const StructureConstants& a, const Eigen::MatrixXd& g);

IsoSignature iso_signature(const StructureConstants& a, double tol = kDefaultTol);

struct IsomorphismProbe {
  std::optional<Eigen::MatrixXd> certificate;  // g with change_basis(A, g) == B
  double objective = 0.0;                      // best Frobenius mismatch seen
  int starts_tried = 0;
};

/// Gauss-Newton search for an isomorphism A -> B. The identity is tried first,
/// then `attempts` Haar-random orthogonal starts drawn from `seed`.
///
/// A certificate is proof of isomorphism; an empty result is inconclusive and
/// must not be read as proof that A and B differ.
IsomorphismProbe try_isomorphism(const StructureConstants& a, const StructureConstants& b,
                                 int attempts, double tol, std::uint64_t seed);

}  // namespace algbundle
