#pragma once

#include <vector>

#include "algbundle/algebra.hpp"

namespace algbundle {

struct ProjectionReport {
  StructureConstants point;
  int iterations = 0;
  double final_residual = 0.0;  // associator max_abs at `point`
  std::vector<double> step_norms;
  bool converged = false;
};

struct ProjectionOptions {
  double tol = kDefaultTol;
  int max_iter = 50;
  // Rescale every iterate to the starting Frobenius norm, keeping the
  // iteration away from the excluded all-zero solution.
  bool normalize = true;
};

/// Gauss-Newton on the associator equations: alpha <- alpha - J^+ F(alpha),
/// with J the tangent operator. Divergence (a step longer than 1e6) ends the
/// run with converged = false rather than throwing.
ProjectionReport project_to_variety(const StructureConstants& start,
                                    const ProjectionOptions& options = {});

/// Zero-pads an (n-1)-dimensional algebra to dimension n: the new basis
/// vector x_n multiplies everything to zero and never appears in a product.
StructureConstants embed(const StructureConstants& a);

/// Inverse of embed on its image. Throws PreconditionError naming the worst
/// entry touching the last index if its magnitude exceeds tol.
StructureConstants restrict_last(const StructureConstants& a, double tol = kDefaultTol);

}  // namespace algbundle
