#include <doctest.h>

#include <random>

#include "algbundle/cohomology.hpp"
#include "algbundle/linalg.hpp"
#include "oracles.hpp"

using namespace algbundle;

namespace {

Eigen::VectorXd flat(const StructureConstants& a) {
  return Eigen::Map<const Eigen::VectorXd>(a.values().data(), static_cast<Eigen::Index>(a.values().size()));
}

std::vector<StructureConstants> associative_points() {
  return {gen_truncated(3), gen_gh_canonical(3), oracle::direct_sum_rr(), oracle::dual_numbers(),
          oracle::complex_numbers(), oracle::upper_triangular()};
}

}  // namespace

TEST_CASE("tangent operator matches the four-term formula") {
  const Eigen::MatrixXd one = tangent_operator(StructureConstants(1, {1.0}));
  CHECK(one.rows() == 1);
  CHECK(one.cols() == 1);
  CHECK(one(0, 0) == 0.0);

  std::mt19937_64 rng(2);
  for (int n = 1; n <= 3; ++n) {
    const auto a = oracle::random_tensor(n, rng);
    CHECK((tangent_operator(a) - oracle::tangent_matrix(a)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("Euler relation: M(alpha) vec(alpha) = 2 F(alpha)") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = oracle::random_tensor(3, rng);
    const auto r = associator_residual(a);
    const Eigen::Map<const Eigen::VectorXd> f(r.values.data(), static_cast<Eigen::Index>(r.values.size()));
    CHECK((tangent_operator(a) * flat(a) - 2.0 * f).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("tangent operator is the Jacobian of the residual") {
  std::mt19937_64 rng(6);
  const double h = 1e-5;
  for (int n = 1; n <= 4; ++n) {
    const auto a = oracle::random_tensor(n, rng);
    const auto v = oracle::random_tensor(n, rng);
    const auto plus = oracle::associator_vector(a + h * v);
    const auto minus = oracle::associator_vector(a - h * v);
    Eigen::VectorXd fd(static_cast<Eigen::Index>(plus.size()));
    for (std::size_t i = 0; i < plus.size(); ++i) fd(i) = (plus[i] - minus[i]) / (2 * h);
    const double err = (tangent_operator(a) * flat(v) - fd).norm();
    CHECK(err <= 1e-6 * (1.0 + flat(v).norm()));
  }
}

TEST_CASE("z2_dimension") {
  CHECK(z2_dimension(StructureConstants(1, {1.0})) == 1);
  CHECK(z2_dimension(StructureConstants(2)) == 8);
  CHECK(z2_dimension(oracle::direct_sum_rr()) == 4);

  // Brute-force rank of an independently built matrix.
  for (const auto& a : associative_points()) {
    const int n3 = a.dim() * a.dim() * a.dim();
    CHECK(z2_dimension(a) == n3 - oracle::gauss_rank(oracle::tangent_matrix(a), 1e-9));
  }
  std::mt19937_64 rng(8);
  CHECK_THROWS_AS(z2_dimension(oracle::random_tensor(2, rng)), PreconditionError);
}

TEST_CASE("z2_dimension is stable under tiny perturbations") {
  std::mt19937_64 rng(10);
  for (const auto& a : associative_points()) {
    const auto nudged = a + oracle::random_tensor(a.dim(), rng, 1e-12);
    CHECK(z2_dimension(nudged) == z2_dimension(a));
  }
}

TEST_CASE("cocycle defect") {
  for (const auto& a : associative_points()) {
    CHECK(cocycle_defect(a, BilinearMapTensor(a.dim())) == 0.0);
    CHECK(cocycle_defect(a, as_cochain(a)) <= 1e-12);
  }
  CHECK_THROWS_AS(cocycle_defect(gen_truncated(2), BilinearMapTensor(3)), InputError);
}

TEST_CASE("tangent vectors are exactly the 2-cocycles") {
  // Row (i,j,k,m) of the tangent equations is minus the x_m coefficient of the
  // cocycle expression at (x_i, x_j, x_k), so the two sup-norms coincide (c = 1).
  std::mt19937_64 rng(12);
  for (const auto& a : associative_points()) {
    const Eigen::MatrixXd m = tangent_operator(a);
    const Eigen::MatrixXd kernel = linalg::nullspace_basis(m, 1e-9);
    REQUIRE(kernel.cols() == z2_dimension(a));
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd coeffs(kernel.cols());
      for (auto& c : coeffs) c = normal(rng);
      const Eigen::VectorXd v = kernel * coeffs;
      BilinearMapTensor f(a.dim(), std::vector<double>(v.data(), v.data() + v.size()));
      CHECK(cocycle_defect(a, f) <= 1e-10);
    }
    for (int trial = 0; trial < 10; ++trial) {
      const auto f = oracle::random_cube<CochainTag>(a.dim(), rng);
      const Eigen::Map<const Eigen::VectorXd> v(f.values().data(), m.cols());
      const double eq2 = (m * v).lpNorm<Eigen::Infinity>();
      CHECK(cocycle_defect(a, f) == doctest::Approx(eq2).epsilon(1e-10));
    }
  }
}

TEST_CASE("coboundary") {
  const auto a = oracle::upper_triangular();
  CHECK(coboundary(a, EndomorphismMatrix::zero(3)).max_abs() == 0.0);
  CHECK((coboundary(a, EndomorphismMatrix::identity(3)) - as_cochain(a)).max_abs() <= 1e-15);

  std::mt19937_64 rng(14);
  std::normal_distribution<double> normal;
  for (const auto& point : associative_points()) {
    Eigen::MatrixXd g(point.dim(), point.dim());
    for (auto& x : g.reshaped()) x = normal(rng);
    CHECK(cocycle_defect(point, coboundary(point, EndomorphismMatrix(g))) <= 1e-10);
  }
  CHECK_THROWS_AS(coboundary(a, EndomorphismMatrix::zero(2)), InputError);
}

TEST_CASE("coboundaries differing by a derivation coincide") {
  // ad_x = [x, .] is a derivation of any associative algebra.
  const auto a = oracle::upper_triangular();
  std::mt19937_64 rng(16);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(3, 3);
  for (auto& x : g.reshaped()) x = normal(rng);
  const Eigen::VectorXd x = Eigen::VectorXd::Random(3);
  Eigen::MatrixXd ad(3, 3);
  for (int j = 0; j < 3; ++j) {
    const Eigen::VectorXd xj = Eigen::VectorXd::Unit(3, j);
    ad.col(j) = multiply(a, x, xj) - multiply(a, xj, x);
  }
  CHECK(coboundary(a, EndomorphismMatrix(ad)).max_abs() <= 1e-12);
  const auto lhs = coboundary(a, EndomorphismMatrix(g));
  const auto rhs = coboundary(a, EndomorphismMatrix(g + ad));
  CHECK((lhs - rhs).max_abs() <= 1e-12);
}

TEST_CASE("coboundary_solve") {
  std::mt19937_64 rng(18);
  std::normal_distribution<double> normal;
  for (const auto& a : associative_points()) {
    Eigen::MatrixXd g0(a.dim(), a.dim());
    for (auto& x : g0.reshaped()) x = normal(rng);
    const auto solved = coboundary_solve(a, coboundary(a, EndomorphismMatrix(g0)));
    CHECK(solved.residual <= 1e-10);
  }

  const auto zero = coboundary_solve(oracle::upper_triangular(), BilinearMapTensor(3));
  CHECK(zero.residual == 0.0);
  CHECK(zero.gamma.matrix().isZero(0.0));

  // Dual numbers with f(x2, x2) = x1: dense least squares over the four entries
  // of G by normal equations gives residual exactly 1.
  const auto dual = oracle::dual_numbers();
  BilinearMapTensor f(2);
  f(1, 1, 0) = 1.0;
  Eigen::MatrixXd design(8, 4);
  for (int col = 0; col < 4; ++col) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(2, 2);
    e(col % 2, col / 2) = 1.0;
    // (dG)(x_i, x_j) = x_i G(x_j) + G(x_i) x_j - G(x_i x_j), written out.
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        std::vector<double> xi(2, 0.0), xj(2, 0.0);
        xi[i] = 1.0;
        xj[j] = 1.0;
        const std::vector<double> gi{e(0, i), e(1, i)}, gj{e(0, j), e(1, j)};
        const auto t1 = oracle::product(dual, xi, gj);
        const auto t2 = oracle::product(dual, gi, xj);
        const auto xixj = oracle::basis_product(dual, i, j);
        for (int k = 0; k < 2; ++k) {
          const double t3 = e(k, 0) * xixj[0] + e(k, 1) * xixj[1];
          design((i * 2 + j) * 2 + k, col) = t1[k] + t2[k] - t3;
        }
      }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(8);
  rhs((1 * 2 + 1) * 2 + 0) = 1.0;
  const Eigen::MatrixXd normal_m = design.transpose() * design;
  const Eigen::VectorXd ls = normal_m.completeOrthogonalDecomposition().solve(design.transpose() * rhs);
  const double oracle_residual = (design * ls - rhs).norm();
  CHECK(oracle_residual == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coboundary_solve(dual, f).residual == doctest::Approx(oracle_residual).epsilon(1e-12));
}
