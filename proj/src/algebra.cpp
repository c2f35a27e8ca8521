#include "algbundle/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "algbundle/cohomology.hpp"
#include "algbundle/linalg.hpp"

namespace algbundle {

namespace {

void require_length(const StructureConstants& a, const Eigen::VectorXd& v, const char* what) {
  if (v.size() != a.dim()) {
    std::ostringstream msg;
    msg << what << " has length " << v.size() << ", algebra dimension is " << a.dim();
    throw InputError(msg.str());
  }
}

template <class Tag>
Eigen::VectorXd contract(const CubeTensor<Tag>& t, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& v) {
  const int n = t.dim();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (u(i) == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double c = u(i) * v(j);
      if (c == 0.0) continue;
      for (int k = 0; k < n; ++k) w(k) += c * t(i, j, k);
    }
  }
  return w;
}

// out_ij^k = sum_c o_kc sum_{a,b} alpha_ab^c l_ai r_bj
StructureConstants transform(const StructureConstants& alpha, const Eigen::MatrixXd& o,
                             const Eigen::MatrixXd& l, const Eigen::MatrixXd& r) {
  const int n = alpha.dim();
  std::vector<double> q(static_cast<std::size_t>(n) * n * n, 0.0);  // q[a][j][c]
  auto qi = [n](int a, int j, int c) { return (static_cast<std::size_t>(a) * n + j) * n + c; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int j = 0; j < n; ++j) {
        const double rbj = r(b, j);
        if (rbj == 0.0) continue;
        for (int c = 0; c < n; ++c) q[qi(a, j, c)] += alpha(a, b, c) * rbj;
      }
  std::vector<double> p(q.size(), 0.0);  // p[i][j][c]
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) {
      const double lai = l(a, i);
      if (lai == 0.0) continue;
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < n; ++c) p[qi(i, j, c)] += lai * q[qi(a, j, c)];
    }
  StructureConstants out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) s += o(k, c) * p[qi(i, j, c)];
        out(i, j, k) = s;
      }
  return out;
}

Eigen::VectorXd flatten(const StructureConstants& t) {
  return Eigen::Map<const Eigen::VectorXd>(t.values().data(),
                                           static_cast<Eigen::Index>(t.values().size()));
}

void require_associative(const StructureConstants& a, double tol, const char* op) {
  const double r = associator_residual(a).max_abs;
  if (r > tol) {
    std::ostringstream msg;
    msg << op << ": input is not associative (associator max_abs " << r << " > tol " << tol << ")";
    throw PreconditionError(msg.str());
  }
}

}  // namespace

Eigen::VectorXd multiply(const StructureConstants& a, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& v) {
  require_length(a, u, "left factor");
  require_length(a, v, "right factor");
  return contract(a, u, v);
}

Eigen::VectorXd apply_bilinear(const BilinearMapTensor& f, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& v) {
  if (u.size() != f.dim() || v.size() != f.dim()) {
    throw InputError("bilinear map arguments must have length " + std::to_string(f.dim()));
  }
  return contract(f, u, v);
}

Eigen::MatrixXd left_multiplication(const StructureConstants& a, const Eigen::VectorXd& x) {
  require_length(a, x, "multiplier");
  const int n = a.dim();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) l(k, j) += x(i) * a(i, j, k);
  return l;
}

AssociatorResidual associator_residual(const StructureConstants& a) {
  const int n = a.dim();
  AssociatorResidual out;
  out.n = n;
  out.values.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  double sq = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m, ++idx) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += a(i, j, l) * a(l, k, m) - a(i, l, m) * a(j, k, l);
          out.values[idx] = s;
          sq += s * s;
          out.max_abs = std::max(out.max_abs, std::abs(s));
        }
  out.frobenius_norm = std::sqrt(sq);
  return out;
}

std::optional<UnitVector> find_unit(const StructureConstants& a, double tol) {
  const int n = a.dim();
  // Rows (j, k): sum_i e_i alpha_ij^k = delta_jk, then sum_i e_i alpha_ji^k = delta_jk.
  Eigen::MatrixXd m(2 * n * n, n);
  Eigen::VectorXd rhs(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const int row = j * n + k;
      for (int i = 0; i < n; ++i) {
        m(row, i) = a(i, j, k);
        m(n * n + row, i) = a(j, i, k);
      }
      rhs(row) = rhs(n * n + row) = (j == k) ? 1.0 : 0.0;
    }
  Eigen::VectorXd e = linalg::min_norm_solve(m, rhs);
  const double residual = (m * e - rhs).lpNorm<Eigen::Infinity>();
  if (!(residual <= tol)) return std::nullopt;
  return UnitVector{std::move(e), residual};
}

StructureConstants gen_truncated(int n) {
  if (n < 1) throw InputError("gen_truncated: n must be >= 1");
  return StructureConstants::from_function(n, [n](int i, int j, int k) {
    return k == (i + j + 1) % n ? 1.0 : 0.0;
  });
}

StructureConstants gen_gh(std::span<const double> g, std::span<const double> h) {
  if (g.size() != h.size()) throw InputError("gen_gh: g and h must have equal length");
  if (g.empty()) throw InputError("gen_gh: n must be >= 1");
  const int n = static_cast<int>(g.size());
  return StructureConstants::from_function(
      n, [&](int i, int j, int k) { return g[k] * h[i] * h[j]; });
}

StructureConstants gen_gh_canonical(int n) {
  if (n < 1) throw InputError("gen_gh: n must be >= 1");
  std::vector<double> g(n), h(n);
  for (int idx = 0; idx < n; ++idx) {
    const int one_based = idx + 1;
    g[idx] = one_based;
    h[idx] = (one_based % 2 == 0) ? 1.0 : -1.0;
  }
  return gen_gh(g, h);
}

StructureConstants change_basis(const StructureConstants& a, const Eigen::MatrixXd& g) {
  const int n = a.dim();
  if (g.rows() != n || g.cols() != n) throw InputError("change_basis: matrix shape mismatch");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (!lu.isInvertible()) throw InputError("change_basis: matrix is singular");
  const Eigen::MatrixXd h = lu.inverse();
  return transform(a, g, h, h);
}

IsoSignature iso_signature(const StructureConstants& a, double tol) {
  require_associative(a, tol, "iso_signature");
  const int n = a.dim();
  IsoSignature sig;
  sig.dim = n;

  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) asym = std::max(asym, std::abs(a(i, j, k) - a(j, i, k)));
  sig.commutative = asym <= tol;
  sig.unital = find_unit(a, tol).has_value();

  Eigen::MatrixXd trace_form(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s += a(p, j, k) * a(q, k, j);
      trace_form(p, q) = s;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(trace_form, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double lambda = eig.eigenvalues()(i);
    if (std::abs(lambda) <= tol) {
      ++sig.trace_zero;
    } else if (lambda > 0) {
      ++sig.trace_positive;
    } else {
      ++sig.trace_negative;
    }
  }

  sig.z2_dim = z2_dimension(a, tol);

  // c is central iff x_a c - c x_a = 0 for every basis element.
  Eigen::MatrixXd commutator(n * n, n);
  for (int p = 0; p < n; ++p)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) commutator(p * n + k, i) = a(p, i, k) - a(i, p, k);
  // Commutators of a commutative algebra are pure roundoff, so a purely
  // relative threshold would count them; measure against the algebra's scale.
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(commutator).singularValues();
  const double floor = tol * std::max(1.0, a.frobenius_norm());
  const double cut = std::max(linalg::rank_threshold(sv, n * n, n, tol), floor);
  sig.center_dim = n - static_cast<int>((sv.array() > cut).count());
  return sig;
}

IsomorphismProbe try_isomorphism(const StructureConstants& a, const StructureConstants& b,
                                 int attempts, double tol, std::uint64_t seed) {
  if (a.dim() != b.dim()) throw InputError("try_isomorphism: dimension mismatch");
  if (attempts < 0) throw InputError("try_isomorphism: attempts must be >= 0");
  require_associative(a, tol, "try_isomorphism");
  require_associative(b, tol, "try_isomorphism");

  const int n = a.dim();
  const Eigen::VectorXd target = flatten(b);
  std::mt19937_64 rng(seed);

  auto mismatch = [&](const Eigen::MatrixXd& g, Eigen::MatrixXd* h_out) -> std::optional<Eigen::VectorXd> {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    if (!lu.isInvertible()) return std::nullopt;
    Eigen::MatrixXd h = lu.inverse();
    Eigen::VectorXd r = flatten(transform(a, g, h, h)) - target;
    if (h_out) *h_out = std::move(h);
    return r;
  };

  IsomorphismProbe probe;
  probe.objective = std::numeric_limits<double>::infinity();
  constexpr int kMaxIterations = 100;
  constexpr double kMaxCondition = 1e12;

  for (int start = 0; start <= attempts; ++start) {
    ++probe.starts_tried;
    Eigen::MatrixXd g = start == 0 ? Eigen::MatrixXd::Identity(n, n)
                                   : linalg::random_orthogonal(n, rng);
    Eigen::MatrixXd h;
    auto r = mismatch(g, &h);
    if (!r) continue;
    double obj = r->norm();

    for (int it = 0; it < kMaxIterations && obj > tol; ++it) {
      // Column (p, q) is the derivative along E_pq, using d(g^-1) = -h E_pq h.
      Eigen::MatrixXd jac(r->size(), n * n);
      for (int q = 0; q < n; ++q)
        for (int p = 0; p < n; ++p) {
          Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
          e(p, q) = 1.0;
          const Eigen::MatrixXd dh = -h.col(p) * h.row(q);
          StructureConstants d = transform(a, e, h, h);
          d += transform(a, g, dh, h);
          d += transform(a, g, h, dh);
          jac.col(q * n + p) = flatten(d);
        }
      Eigen::VectorXd step = linalg::min_norm_solve(jac, -*r);
      Eigen::Map<const Eigen::MatrixXd> dg(step.data(), n, n);

      bool improved = false;
      for (double scale = 1.0; scale > 1e-6; scale *= 0.5) {
        Eigen::MatrixXd trial = g + scale * dg;
        Eigen::MatrixXd trial_h;
        auto trial_r = mismatch(trial, &trial_h);
        if (!trial_r) continue;
        const double trial_obj = trial_r->norm();
        if (trial_obj < obj) {
          g = std::move(trial);
          h = std::move(trial_h);
          r = std::move(trial_r);
          obj = trial_obj;
          improved = true;
          break;
        }
      }
      if (!improved) break;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
      const auto& s = svd.singularValues();
      if (s(n - 1) * kMaxCondition < s(0)) break;
    }

    probe.objective = std::min(probe.objective, obj);
    if (obj <= tol) {
      probe.certificate = g;
      probe.objective = obj;
      return probe;
    }
  }
  return probe;
}

}  // namespace algbundle
