#include "algbundle/cohomology.hpp"

#include <cmath>
#include <sstream>

#include "algbundle/linalg.hpp"

namespace algbundle {

EndomorphismMatrix::EndomorphismMatrix(Eigen::MatrixXd g) : g_(std::move(g)) {
  if (g_.rows() != g_.cols() || g_.rows() < 1) {
    throw InputError("endomorphism matrix must be square with n >= 1");
  }
  if (!g_.allFinite()) throw InputError("endomorphism entries must be finite");
}

Eigen::MatrixXd tangent_operator(const StructureConstants& a) {
  const int n = a.dim();
  const Eigen::Index n3 = static_cast<Eigen::Index>(n) * n * n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n3 * n, n3);
  auto col = [n](int p, int q, int r) { return (static_cast<Eigen::Index>(p) * n + q) * n + r; };
  Eigen::Index row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int mm = 0; mm < n; ++mm, ++row)
          for (int l = 0; l < n; ++l) {
            m(row, col(l, k, mm)) += a(i, j, l);
            m(row, col(i, j, l)) += a(l, k, mm);
            m(row, col(j, k, l)) -= a(i, l, mm);
            m(row, col(i, l, mm)) -= a(j, k, l);
          }
  return m;
}

int z2_dimension(const StructureConstants& a, double tol) {
  const double r = associator_residual(a).max_abs;
  if (r > tol) {
    std::ostringstream msg;
    msg << "z2_dimension: input is not associative (associator max_abs " << r << " > tol " << tol
        << ")";
    throw PreconditionError(msg.str());
  }
  const Eigen::MatrixXd m = tangent_operator(a);
  return static_cast<int>(m.cols()) - linalg::numerical_rank(m, tol);
}

double cocycle_defect(const StructureConstants& a, const BilinearMapTensor& f) {
  const int n = a.dim();
  if (f.dim() != n) throw InputError("cocycle_defect: dimension mismatch");
  auto basis = [n](int i) { return Eigen::VectorXd::Unit(n, i); };
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Eigen::VectorXd x = basis(i), y = basis(j), z = basis(k);
        const Eigen::VectorXd d = multiply(a, x, apply_bilinear(f, y, z)) -
                                  apply_bilinear(f, multiply(a, x, y), z) +
                                  apply_bilinear(f, x, multiply(a, y, z)) -
                                  multiply(a, apply_bilinear(f, x, y), z);
        worst = std::max(worst, d.lpNorm<Eigen::Infinity>());
      }
  return worst;
}

BilinearMapTensor coboundary(const StructureConstants& a, const EndomorphismMatrix& g) {
  const int n = a.dim();
  if (g.dim() != n) throw InputError("coboundary: dimension mismatch");
  const Eigen::MatrixXd& gm = g.matrix();
  BilinearMapTensor out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd xi = Eigen::VectorXd::Unit(n, i);
      const Eigen::VectorXd xj = Eigen::VectorXd::Unit(n, j);
      const Eigen::VectorXd v = multiply(a, xi, gm.col(j)) + multiply(a, gm.col(i), xj) -
                                gm * multiply(a, xi, xj);
      for (int k = 0; k < n; ++k) out(i, j, k) = v(k);
    }
  return out;
}

Eigen::MatrixXd coboundary_operator(const StructureConstants& a) {
  const int n = a.dim();
  const Eigen::Index n3 = static_cast<Eigen::Index>(n) * n * n;
  Eigen::MatrixXd m(n3, n * n);
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
      e(p, q) = 1.0;
      const BilinearMapTensor d = coboundary(a, EndomorphismMatrix(std::move(e)));
      m.col(q * n + p) = Eigen::Map<const Eigen::VectorXd>(d.values().data(), n3);
    }
  return m;
}

CoboundarySolution coboundary_solve(const StructureConstants& a, const BilinearMapTensor& f) {
  const int n = a.dim();
  if (f.dim() != n) throw InputError("coboundary_solve: dimension mismatch");
  const Eigen::MatrixXd m = coboundary_operator(a);
  const Eigen::Map<const Eigen::VectorXd> rhs(f.values().data(), m.rows());
  const Eigen::VectorXd x = linalg::min_norm_solve(m, rhs);
  const double residual = (m * x - rhs).norm();
  return {EndomorphismMatrix(Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n)), residual};
}

}  // namespace algbundle
