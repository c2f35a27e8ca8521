#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "algbundle/algebra.hpp"
#include "algbundle/interpolation.hpp"

namespace algbundle {

enum class BaseKind { interval, circle, grid2d };

struct Axis {
  double t0 = 0.0;
  double t1 = 1.0;
  int nodes = 2;

  double spacing() const { return (t1 - t0) / (nodes - 1); }
  double node(int k) const { return t0 + (t1 - t0) * k / (nodes - 1); }
  friend bool operator==(const Axis&, const Axis&) = default;
};

/// A point of the base. Only `u` is used on one-dimensional bases.
struct BasePoint {
  double u = 0.0;
  double v = 0.0;
  friend bool operator==(const BasePoint&, const BasePoint&) = default;
};

/// Sampled base space: an interval, a circle [0, 2pi) with periodic uniform
/// nodes, or a tensor grid of two intervals. Node order on grid2d is
/// lexicographic: index = iu * v.nodes + iv.
class BaseGrid {
 public:
  static BaseGrid interval(double t0, double t1, int nodes);
  static BaseGrid circle(int nodes);
  static BaseGrid grid2d(Axis u, Axis v);

  BaseKind kind() const { return kind_; }
  int node_count() const;
  int dimension() const { return kind_ == BaseKind::grid2d ? 2 : 1; }
  const Axis& u_axis() const { return u_; }
  const Axis& v_axis() const { return v_; }
  BasePoint node(int index) const;
  /// Node spacing along the first axis (2pi / nodes on a circle).
  double spacing() const;
  bool contains(const BasePoint& x) const;
  /// Pairs of neighbouring node indices (including the wrap on a circle).
  std::vector<std::pair<int, int>> adjacent_pairs() const;

  friend bool operator==(const BaseGrid&, const BaseGrid&) = default;

 private:
  BaseGrid(BaseKind kind, Axis u, Axis v) : kind_(kind), u_(u), v_(v) {}

  BaseKind kind_ = BaseKind::interval;
  Axis u_;
  Axis v_;
};

/// A weak algebra bundle over a sampled base, stored in one global frame:
/// fibers[s] holds the structure functions gamma_ij^k at node s.
class AlgebraFamily {
 public:
  AlgebraFamily(BaseGrid base, std::vector<StructureConstants> fibers,
                Interpolation interpolation = Interpolation::linear);

  /// Samples fiber_fn at every node of `base`.
  static AlgebraFamily sample(const BaseGrid& base,
                              const std::function<StructureConstants(const BasePoint&)>& fiber_fn,
                              Interpolation interpolation = Interpolation::linear);

  int dim() const { return n_; }
  const BaseGrid& base() const { return base_; }
  Interpolation interpolation() const { return interpolation_; }
  const std::vector<StructureConstants>& fibers() const { return fibers_; }
  const StructureConstants& fiber(int node) const { return fibers_.at(node); }
  int node_count() const { return static_cast<int>(fibers_.size()); }

  friend bool operator==(const AlgebraFamily&, const AlgebraFamily&) = default;

 private:
  int n_ = 0;
  BaseGrid base_;
  std::vector<StructureConstants> fibers_;
  Interpolation interpolation_ = Interpolation::linear;
};

/// Per-node values of a section of the bundle.
struct Section {
  std::vector<Eigen::VectorXd> values;
};

struct FamilyValidation {
  std::vector<double> residuals;  // associator max_abs per node
  double tol = 0.0;
  bool valid = false;
};

struct ClassifyOptions {
  double tol = kDefaultTol;
  int attempts = 2;  // random restarts per adjacent pair after the identity start
  std::uint64_t seed = 0;
};

struct ClassifyReport {
  std::vector<IsoSignature> signatures;
  std::vector<int> cluster_of_node;        // cluster ids in order of first appearance
  std::vector<std::vector<int>> clusters;  // partition of node indices
  int adjacent_pairs = 0;
  int certified_pairs = 0;  // adjacent pairs with an isomorphism certificate
  bool strict_candidate = false;
};

/// Interpolated fiber. Exactly at a node the stored sample is returned
/// unchanged. Off-node fibers need not be associative.
StructureConstants fiber_at(const AlgebraFamily& family, const BasePoint& x);
inline StructureConstants fiber_at(const AlgebraFamily& family, double t) {
  return fiber_at(family, BasePoint{t, 0.0});
}

FamilyValidation validate_family(const AlgebraFamily& family, double tol = kDefaultTol);

/// (s t)(x) = s(x) t(x), node by node.
Section section_product(const AlgebraFamily& family, const Section& s, const Section& t);

/// Per-node units, if every fiber is unital within tol.
std::optional<Section> unit_section(const AlgebraFamily& family, double tol = kDefaultTol);

/// Signatures per node, clusters of equal signatures, and whether the family
/// looks strict: one cluster plus an isomorphism certificate for every
/// adjacent node pair.
ClassifyReport classify_map(const AlgebraFamily& family, const ClassifyOptions& options = {});

/// New family over `new_base` whose node s carries fiber_at(family, images[s]).
AlgebraFamily pullback(const AlgebraFamily& family, const BaseGrid& new_base,
                       std::span<const BasePoint> images);

AlgebraFamily pullback(const AlgebraFamily& family, const BaseGrid& new_base,
                       const std::function<BasePoint(const BasePoint&)>& phi);

}  // namespace algbundle
