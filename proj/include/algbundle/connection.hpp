#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "algbundle/cohomology.hpp"
#include "algbundle/family.hpp"

// Connections on a family over an interval, written in the family's global
// frame as  nabla sigma = sigma' + Gamma(t) sigma.
//
// Leibniz rule in this frame. Expanding
//   nabla(mu(s1, s2)) = mu(s1, nabla s2) + mu(nabla s1, s2)
// with (mu(s1, s2))' = mu'(s1, s2) + mu(s1', s2) + mu(s1, s2') leaves
//   mu'(a, b) = a Gamma(b) + Gamma(a) b - Gamma(ab) = (delta Gamma)(a, b),
// so a differential connection exists at t iff mu'(t) is a Hochschild
// coboundary, and the least-squares residual of delta Gamma = mu' is the
// obstruction.
//
// Parallel sections solve sigma' = -Gamma sigma, so transport is the solution
// of Phi' = -Gamma Phi with Phi(t0) = I.

namespace algbundle {

/// Gamma sampled at the nodes of an interval base.
struct PathConnection {
  BaseGrid base = BaseGrid::interval(0.0, 1.0, 2);
  std::vector<EndomorphismMatrix> samples;
  std::vector<double> residuals;  // coboundary defect per node (0 when unknown)
};

struct TransportMap {
  double source_t = 0.0;
  double target_t = 0.0;
  Eigen::MatrixXd phi;
  int steps = 0;
  double condition_number = 1.0;
  // Set when the path crosses nodes whose obstruction exceeded the tolerance:
  // the least-squares Gamma was integrated there, and phi need not be
  // multiplicative.
  bool non_multiplicative_region = false;
};

using ConnectionField = std::function<Eigen::MatrixXd(double)>;

/// (gamma(t + h) - gamma(t - h)) / 2h on interpolated fibers.
BilinearMapTensor mu_prime(const AlgebraFamily& family, double t, double h);

/// coboundary_solve(fiber_at(t), mu_prime(t, h)). Residual 0 means a
/// differential connection direction exists at t.
CoboundarySolution solve_differential_connection(const AlgebraFamily& family, double t, double h);

/// Per-node solve over the whole interval. h <= 0 selects the grid spacing.
/// End nodes use one-sided second-order differences.
PathConnection path_connection(const AlgebraFamily& family, double h = 0.0);

/// Catmull-Rom interpolation of the sampled Gamma.
ConnectionField interpolate(const PathConnection& connection);

/// Classical RK4 with `steps` uniform steps for Phi' = -Gamma(t) Phi.
TransportMap parallel_transport(const ConnectionField& gamma, double t0, double t1, int steps);

/// Transport along the family's interval using the sampled connection.
/// Nodes with residual > tol inside the path set non_multiplicative_region.
TransportMap parallel_transport(const AlgebraFamily& family, const PathConnection& connection,
                                double t0, double t1, int steps, double tol = kDefaultTol);

/// max over basis pairs |Phi(x_i x_j) - Phi(x_i) Phi(x_j)|_inf, source product
/// on the left, target product on the right.
double multiplicativity_defect(const TransportMap& transport, const StructureConstants& source,
                               const StructureConstants& target);

struct CoherenceReport {
  double identity_defect = 0.0;     // |Phi(t0 -> t0) - I|_max
  double composition_defect = 0.0;  // max |Phi(s -> u) Phi(t0 -> s) - Phi(t0 -> u)|_max
  int compositions_checked = 0;
  double lipschitz = 0.0;  // max |Phi_{k+1} - Phi_k|_max / spacing
  bool coherent = false;
};

struct RecoveredConnection {
  PathConnection connection;
  CoherenceReport coherence;
};

/// Rebuilds Gamma = -Phi' Phi^-1 from transports out of a common source t0.
///
/// Maps whose source is the first sample's source form the chain; their
/// targets must be uniformly spaced with spacing <= h and include t0 itself.
/// Any other map (s -> u) with s and u on the chain is used to check
/// composability. Coherence failures are reported, not thrown.
RecoveredConnection connection_from_transports(std::span<const TransportMap> samples, double h,
                                               double tol = 1e-8);

}  // namespace algbundle
