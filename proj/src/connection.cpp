#include "algbundle/connection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "algbundle/parallel.hpp"

namespace algbundle {

namespace {

const Axis& interval_axis(const BaseGrid& base, const char* op) {
  if (base.kind() != BaseKind::interval) {
    throw InputError(std::string(op) + ": requires an interval base");
  }
  return base.u_axis();
}

BilinearMapTensor difference(const StructureConstants& plus, const StructureConstants& minus,
                             double scale) {
  return as_cochain((plus - minus) * scale);
}

// Second-order derivative of the structure functions at node k, one-sided at
// the ends of the interval.
BilinearMapTensor node_derivative(const AlgebraFamily& family, int k, double h) {
  const Axis& ax = family.base().u_axis();
  const double t = ax.node(k);
  const double slack = 1e-12 * (ax.t1 - ax.t0);
  if (t - h >= ax.t0 - slack && t + h <= ax.t1 + slack) return mu_prime(family, t, h);
  const double dir = (t - h < ax.t0 - slack) ? 1.0 : -1.0;
  const StructureConstants f0 = fiber_at(family, t);
  const StructureConstants f1 = fiber_at(family, t + dir * h);
  const StructureConstants f2 = fiber_at(family, t + 2 * dir * h);
  return as_cochain((4.0 * f1 - 3.0 * f0 - f2) * (dir / (2.0 * h)));
}

}  // namespace

BilinearMapTensor mu_prime(const AlgebraFamily& family, double t, double h) {
  const Axis& ax = interval_axis(family.base(), "mu_prime");
  if (!(h > 0.0)) throw InputError("mu_prime: step h must be > 0");
  const double slack = 1e-12 * (ax.t1 - ax.t0);
  if (!(t - h >= ax.t0 - slack && t + h <= ax.t1 + slack)) {
    std::ostringstream msg;
    msg << "mu_prime: t = " << t << " needs margin h = " << h << " inside [" << ax.t0 << ", "
        << ax.t1 << "]";
    throw InputError(msg.str());
  }
  return difference(fiber_at(family, t + h), fiber_at(family, t - h), 1.0 / (2.0 * h));
}

CoboundarySolution solve_differential_connection(const AlgebraFamily& family, double t,
                                                 double h) {
  const BilinearMapTensor derivative = mu_prime(family, t, h);
  return coboundary_solve(fiber_at(family, t), derivative);
}

PathConnection path_connection(const AlgebraFamily& family, double h) {
  const Axis& ax = interval_axis(family.base(), "path_connection");
  if (h <= 0.0) h = ax.spacing();
  if (2.0 * h > ax.t1 - ax.t0) throw InputError("path_connection: h too large for the interval");
  const auto count = static_cast<std::size_t>(family.node_count());
  std::vector<CoboundarySolution> solved(count);
  parallel_for(count, [&](std::size_t k) {
    const int node = static_cast<int>(k);
    solved[k] = coboundary_solve(family.fiber(node), node_derivative(family, node, h));
  });
  PathConnection out{family.base(), {}, {}};
  for (auto& s : solved) {
    out.samples.push_back(std::move(s.gamma));
    out.residuals.push_back(s.residual);
  }
  return out;
}

ConnectionField interpolate(const PathConnection& connection) {
  const Axis ax = interval_axis(connection.base, "interpolate");
  if (static_cast<int>(connection.samples.size()) != ax.nodes) {
    throw InputError("path connection needs one sample per node");
  }
  return [ax, samples = connection.samples](double t) {
    const double position = (t - ax.t0) / (ax.t1 - ax.t0) * (ax.nodes - 1);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(samples.front().dim(), samples.front().dim());
    for (const Tap& tap : axis_taps(ax.nodes, false, position, Interpolation::cubic)) {
      g += tap.weight * samples[tap.node].matrix();
    }
    return g;
  };
}

TransportMap parallel_transport(const ConnectionField& gamma, double t0, double t1, int steps) {
  if (steps < 1) throw InputError("parallel_transport: steps must be >= 1");
  if (!std::isfinite(t0) || !std::isfinite(t1)) throw InputError("parallel_transport: bad endpoints");
  const Eigen::MatrixXd g0 = gamma(t0);
  const Eigen::Index n = g0.rows();
  Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n, n);
  const double dt = (t1 - t0) / steps;
  auto rhs = [&gamma](double t, const Eigen::MatrixXd& p) -> Eigen::MatrixXd { return -gamma(t) * p; };
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * dt;
    const Eigen::MatrixXd k1 = rhs(t, phi);
    const Eigen::MatrixXd k2 = rhs(t + 0.5 * dt, phi + 0.5 * dt * k1);
    const Eigen::MatrixXd k3 = rhs(t + 0.5 * dt, phi + 0.5 * dt * k2);
    const Eigen::MatrixXd k4 = rhs(t + dt, phi + dt * k3);
    phi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  TransportMap out;
  out.source_t = t0;
  out.target_t = t1;
  out.steps = steps;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi);
  const auto& sv = svd.singularValues();
  out.condition_number = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                  : std::numeric_limits<double>::infinity();
  out.phi = std::move(phi);
  return out;
}

TransportMap parallel_transport(const AlgebraFamily& family, const PathConnection& connection,
                                double t0, double t1, int steps, double tol) {
  interval_axis(family.base(), "parallel_transport");
  const Axis& cax = interval_axis(connection.base, "parallel_transport");
  if (!family.base().contains({t0, 0.0}) || !family.base().contains({t1, 0.0})) {
    throw InputError("parallel_transport: endpoints must lie in the family's interval");
  }
  if (connection.samples.empty() || connection.samples.front().dim() != family.dim()) {
    throw InputError("parallel_transport: connection dimension does not match the family");
  }
  TransportMap out = parallel_transport(interpolate(connection), t0, t1, steps);

  const double lo = std::min(t0, t1) - cax.spacing();
  const double hi = std::max(t0, t1) + cax.spacing();
  for (int k = 0; k < cax.nodes; ++k) {
    const double t = cax.node(k);
    if (t > lo && t < hi && k < static_cast<int>(connection.residuals.size()) &&
        connection.residuals[k] > tol) {
      out.non_multiplicative_region = true;
    }
  }
  return out;
}

double multiplicativity_defect(const TransportMap& transport, const StructureConstants& source,
                               const StructureConstants& target) {
  const int n = source.dim();
  if (target.dim() != n || transport.phi.rows() != n || transport.phi.cols() != n) {
    throw InputError("multiplicativity_defect: dimension mismatch");
  }
  const Eigen::MatrixXd& phi = transport.phi;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd xi = Eigen::VectorXd::Unit(n, i);
      const Eigen::VectorXd xj = Eigen::VectorXd::Unit(n, j);
      const Eigen::VectorXd d =
          phi * multiply(source, xi, xj) - multiply(target, phi.col(i), phi.col(j));
      worst = std::max(worst, d.lpNorm<Eigen::Infinity>());
    }
  return worst;
}

RecoveredConnection connection_from_transports(std::span<const TransportMap> samples, double h,
                                               double tol) {
  if (samples.size() < 3) throw InputError("connection_from_transports: need at least 3 samples");
  const double t0 = samples.front().source_t;
  const Eigen::Index n = samples.front().phi.rows();

  std::vector<const TransportMap*> chain;
  std::vector<const TransportMap*> extra;
  for (const TransportMap& s : samples) {
    if (s.phi.rows() != n || s.phi.cols() != n) {
      throw InputError("connection_from_transports: inconsistent matrix sizes");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s.phi);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 1e-12 * sv(0))) {
      std::ostringstream msg;
      msg << "connection_from_transports: transport " << s.source_t << " -> " << s.target_t
          << " is not invertible";
      throw InputError(msg.str());
    }
    (s.source_t == t0 ? chain : extra).push_back(&s);
  }
  std::sort(chain.begin(), chain.end(),
            [](const TransportMap* a, const TransportMap* b) { return a->target_t < b->target_t; });
  if (chain.size() < 3) throw InputError("connection_from_transports: chain needs >= 3 samples");

  const double lo = chain.front()->target_t;
  const double hi = chain.back()->target_t;
  const int nodes = static_cast<int>(chain.size());
  const double spacing = (hi - lo) / (nodes - 1);
  for (int k = 0; k < nodes; ++k) {
    if (std::abs(chain[k]->target_t - (lo + spacing * k)) > 1e-9 * (hi - lo)) {
      throw InputError("connection_from_transports: sample times must be uniformly spaced");
    }
  }
  if (spacing > h * (1.0 + 1e-9)) {
    throw InputError("connection_from_transports: sample spacing exceeds h");
  }
  auto locate = [&](double t) -> int {
    const double p = (t - lo) / spacing;
    const double r = std::round(p);
    if (std::abs(p - r) > 1e-6 || r < 0 || r > nodes - 1) return -1;
    return static_cast<int>(r);
  };

  RecoveredConnection out;
  CoherenceReport& coh = out.coherence;
  const int origin = locate(t0);
  if (origin < 0) throw InputError("connection_from_transports: chain must include t0 itself");
  coh.identity_defect =
      (chain[origin]->phi - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();

  for (const TransportMap* m : extra) {
    const int s = locate(m->source_t);
    const int u = locate(m->target_t);
    if (s < 0 || u < 0) continue;
    const Eigen::MatrixXd composed = m->phi * chain[s]->phi;
    coh.composition_defect =
        std::max(coh.composition_defect, (composed - chain[u]->phi).cwiseAbs().maxCoeff());
    ++coh.compositions_checked;
  }

  for (int k = 0; k + 1 < nodes; ++k) {
    coh.lipschitz = std::max(
        coh.lipschitz, (chain[k + 1]->phi - chain[k]->phi).cwiseAbs().maxCoeff() / spacing);
  }
  coh.coherent = coh.identity_defect <= tol && coh.composition_defect <= tol;

  PathConnection& pc = out.connection;
  pc.base = BaseGrid::interval(lo, hi, nodes);
  for (int k = 0; k < nodes; ++k) {
    Eigen::MatrixXd dphi;
    if (k == 0) {
      dphi = (-3.0 * chain[0]->phi + 4.0 * chain[1]->phi - chain[2]->phi) / (2.0 * spacing);
    } else if (k == nodes - 1) {
      dphi = (3.0 * chain[k]->phi - 4.0 * chain[k - 1]->phi + chain[k - 2]->phi) / (2.0 * spacing);
    } else {
      dphi = (chain[k + 1]->phi - chain[k - 1]->phi) / (2.0 * spacing);
    }
    pc.samples.emplace_back(-dphi * chain[k]->phi.inverse());
    pc.residuals.push_back(0.0);
  }
  return out;
}

}  // namespace algbundle
