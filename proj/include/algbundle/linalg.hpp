#pragma once

#include <Eigen/Dense>

namespace algbundle::linalg {

// Singular values at or below the returned value count as zero.
//
// Default rule: max(rows, cols) * machine epsilon * sigma_max. A positive
// `relative_tol` overrides the epsilon factor when larger, which is how
// callers that work at a user tolerance (e.g. 1e-9) keep ranks stable under
// perturbations of that size.
double rank_threshold(const Eigen::VectorXd& singular_values, Eigen::Index rows, Eigen::Index cols,
                      double relative_tol = 0.0);

int numerical_rank(const Eigen::MatrixXd& m, double relative_tol = 0.0);

/// Orthonormal basis (columns) of the numerical nullspace of `m`.
Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& m, double relative_tol = 0.0);

/// Minimal-norm least-squares solution of m x = b via a thresholded SVD.
Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                               double relative_tol = 0.0);

/// Haar-distributed orthogonal matrix from QR of a standard-normal matrix,
/// with column signs fixed so the R factor has a positive diagonal.
template <class Rng>
Eigen::MatrixXd random_orthogonal(int n, Rng& rng);

}  // namespace algbundle::linalg

#include <random>

namespace algbundle::linalg {

template <class Rng>
Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) z(r, c) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < n; ++c) {
    if (r(c, c) < 0.0) q.col(c) = -q.col(c);
  }
  return q;
}

}  // namespace algbundle::linalg
