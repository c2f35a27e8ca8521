#pragma once

#include <vector>

namespace algbundle {

enum class Interpolation { linear, cubic };

struct Tap {
  int node;
  double weight;
};

/// Interpolation weights along one uniformly sampled axis.
///
/// `position` is measured in node units (node k sits at k). Positions within
/// 1e-9 of a node return that node alone with weight exactly 1. Cubic uses
/// Catmull-Rom; on non-periodic axes the missing outer neighbour is replaced
/// by linear extrapolation, so linear data is reproduced exactly.
std::vector<Tap> axis_taps(int nodes, bool periodic, double position, Interpolation interp);

}  // namespace algbundle
