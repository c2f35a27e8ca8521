#pragma once

#include <Eigen/Dense>

#include "algbundle/algebra.hpp"
#include "algbundle/tensor.hpp"

namespace algbundle {

/// A linear endomorphism Gamma of the algebra; column k holds Gamma(x_k).
class EndomorphismMatrix {
 public:
  EndomorphismMatrix() = default;
  explicit EndomorphismMatrix(Eigen::MatrixXd g);

  static EndomorphismMatrix zero(int n) { return EndomorphismMatrix(Eigen::MatrixXd::Zero(n, n)); }
  static EndomorphismMatrix identity(int n) {
    return EndomorphismMatrix(Eigen::MatrixXd::Identity(n, n));
  }

  int dim() const { return static_cast<int>(g_.rows()); }
  const Eigen::MatrixXd& matrix() const { return g_; }

 private:
  Eigen::MatrixXd g_;
};

/// Jacobian of the associator map F at alpha: an n^4 x n^3 matrix whose row
/// (i,j,k,m) applied to vec(v) gives
///   sum_l alpha_ij^l v_lk^m + alpha_lk^m v_ij^l - alpha_il^m v_jk^l - alpha_jk^l v_il^m.
/// Its kernel is the tangent space of the associator variety at alpha.
Eigen::MatrixXd tangent_operator(const StructureConstants& a);

/// dim Z^2(A) = n^3 - rank(tangent_operator(A)). Singular values below
/// max(dims * eps, tol) * sigma_max count as zero.
int z2_dimension(const StructureConstants& a, double tol = kDefaultTol);

/// Max over basis triples of |x f(y,z) - f(xy,z) + f(x,yz) - f(x,y) z|_inf.
double cocycle_defect(const StructureConstants& a, const BilinearMapTensor& f);

/// Hochschild coboundary (dG)(a, b) = a G(b) + G(a) b - G(ab).
BilinearMapTensor coboundary(const StructureConstants& a, const EndomorphismMatrix& g);

/// Matrix of G -> vec(coboundary(A, G)); column q*n + p is the image of E_pq.
Eigen::MatrixXd coboundary_operator(const StructureConstants& a);

struct CoboundarySolution {
  EndomorphismMatrix gamma;
  double residual = 0.0;  // Frobenius norm of coboundary(A, gamma) - f
};

/// Minimal-norm least-squares G for coboundary(A, G) = f. The solution is only
/// unique modulo derivations; the minimal-norm representative is returned.
CoboundarySolution coboundary_solve(const StructureConstants& a, const BilinearMapTensor& f);

}  // namespace algbundle
