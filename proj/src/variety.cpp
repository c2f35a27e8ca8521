#include "algbundle/variety.hpp"

#include <cmath>
#include <sstream>

#include "algbundle/cohomology.hpp"
#include "algbundle/linalg.hpp"

namespace algbundle {

namespace {

constexpr double kDivergenceStep = 1e6;

}  // namespace

ProjectionReport project_to_variety(const StructureConstants& start,
                                    const ProjectionOptions& options) {
  if (!(options.tol > 0.0)) throw InputError("project_to_variety: tol must be > 0");
  if (options.max_iter < 0) throw InputError("project_to_variety: max_iter must be >= 0");
  const double start_norm = start.frobenius_norm();
  if (options.normalize && start_norm == 0.0) {
    throw InputError("project_to_variety: cannot normalize the zero tensor");
  }

  const int n = start.dim();
  const Eigen::Index n3 = static_cast<Eigen::Index>(start.values().size());
  ProjectionReport report{start, 0, 0.0, {}, false};

  AssociatorResidual res = associator_residual(report.point);
  while (res.max_abs > options.tol && report.iterations < options.max_iter) {
    Eigen::MatrixXd jac = tangent_operator(report.point);
    const Eigen::Map<const Eigen::VectorXd> f(res.values.data(),
                                              static_cast<Eigen::Index>(res.values.size()));
    if (options.normalize) {
      // J alpha = 2F, so the unconstrained least-squares step is alpha/2 whenever
      // J has full column rank; the rescaling would undo it every time. Restrict
      // the step to the tangent space of the sphere instead.
      const Eigen::Map<const Eigen::VectorXd> a(report.point.values().data(), n3);
      const Eigen::VectorXd u = a.normalized();
      jac -= (jac * u) * u.transpose();
    }
    const Eigen::VectorXd step = linalg::min_norm_solve(jac, f);
    const double step_norm = step.norm();
    report.step_norms.push_back(step_norm);
    ++report.iterations;
    if (!std::isfinite(step_norm) || step_norm > kDivergenceStep) {
      report.final_residual = res.max_abs;
      return report;
    }

    std::vector<double> next(report.point.values().begin(), report.point.values().end());
    for (Eigen::Index i = 0; i < n3; ++i) next[i] -= step(i);
    StructureConstants candidate(n, std::move(next));
    if (options.normalize) {
      const double norm = candidate.frobenius_norm();
      if (norm == 0.0) {
        report.final_residual = res.max_abs;
        return report;
      }
      candidate *= start_norm / norm;
    }
    report.point = std::move(candidate);
    res = associator_residual(report.point);
  }
  report.final_residual = res.max_abs;
  report.converged = res.max_abs <= options.tol;
  return report;
}

StructureConstants embed(const StructureConstants& a) {
  const int m = a.dim();
  StructureConstants out(m + 1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) out(i, j, k) = a(i, j, k);
  return out;
}

StructureConstants restrict_last(const StructureConstants& a, double tol) {
  const int n = a.dim();
  if (n < 2) throw InputError("restrict: dimension must be >= 2");
  const int last = n - 1;
  double worst = 0.0;
  int wi = 0, wj = 0, wk = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i != last && j != last && k != last) continue;
        const double v = std::abs(a(i, j, k));
        if (v > worst) {
          worst = v;
          wi = i, wj = j, wk = k;
        }
      }
  if (worst > tol) {
    std::ostringstream msg;
    msg << "restrict: entry alpha_" << wi + 1 << "," << wj + 1 << "^" << wk + 1 << " = "
        << a(wi, wj, wk) << " touches index " << n << " and exceeds tol " << tol;
    throw PreconditionError(msg.str());
  }
  return StructureConstants::from_function(last, [&](int i, int j, int k) { return a(i, j, k); });
}

}  // namespace algbundle
