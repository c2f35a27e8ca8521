#include "algbundle/linalg.hpp"

#include <algorithm>
#include <limits>

namespace algbundle::linalg {

namespace {

Eigen::BDCSVD<Eigen::MatrixXd> svd_of(const Eigen::MatrixXd& m, unsigned options) {
  return Eigen::BDCSVD<Eigen::MatrixXd>(m, options);
}

}  // namespace

double rank_threshold(const Eigen::VectorXd& singular_values, Eigen::Index rows, Eigen::Index cols,
                      double relative_tol) {
  if (singular_values.size() == 0) return 0.0;
  const double sigma_max = singular_values.maxCoeff();
  const double eps_rule =
      static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
  return std::max(eps_rule, relative_tol) * sigma_max;
}

int numerical_rank(const Eigen::MatrixXd& m, double relative_tol) {
  if (m.size() == 0) return 0;
  auto svd = svd_of(m, 0);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cut = rank_threshold(s, m.rows(), m.cols(), relative_tol);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) ++rank;
  }
  return rank;
}

Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& m, double relative_tol) {
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(cols, cols);
  auto svd = svd_of(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cut = rank_threshold(s, m.rows(), cols, relative_tol);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) ++rank;
  }
  return svd.matrixV().rightCols(cols - rank);
}

Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                               double relative_tol) {
  auto svd = svd_of(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cut = rank_threshold(s, m.rows(), m.cols(), relative_tol);
  Eigen::VectorXd coeffs = svd.matrixU().transpose() * b;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    coeffs(i) = s(i) > cut ? coeffs(i) / s(i) : 0.0;
  }
  return svd.matrixV() * coeffs;
}

}  // namespace algbundle::linalg
