#include "algbundle/family.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "algbundle/parallel.hpp"

namespace algbundle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// A coordinate this close (in node units) to a node is treated as the node.
constexpr double kNodeSnap = 1e-9;

void check_axis(const Axis& ax, const char* what) {
  if (!std::isfinite(ax.t0) || !std::isfinite(ax.t1) || !(ax.t0 < ax.t1)) {
    throw InputError(std::string(what) + ": need finite t0 < t1");
  }
  if (ax.nodes < 2) throw InputError(std::string(what) + ": need at least 2 nodes");
}

bool axis_contains(const Axis& ax, double x) {
  const double slack = 1e-12 * (ax.t1 - ax.t0);
  return std::isfinite(x) && x >= ax.t0 - slack && x <= ax.t1 + slack;
}

// Catmull-Rom weights for nodes i-1, i, i+1, i+2 at fraction s in [0, 1).
std::array<double, 4> catmull_rom(double s) {
  const double s2 = s * s, s3 = s2 * s;
  return {0.5 * (-s3 + 2 * s2 - s), 0.5 * (3 * s3 - 5 * s2 + 2), 0.5 * (-3 * s3 + 4 * s2 + s),
          0.5 * (s3 - s2)};
}

}  // namespace

std::vector<Tap> axis_taps(int nodes, bool periodic, double position, Interpolation interp) {
  if (periodic) {
    position = std::fmod(position, static_cast<double>(nodes));
    if (position < 0) position += nodes;
  } else {
    position = std::clamp(position, 0.0, static_cast<double>(nodes - 1));
  }
  const double nearest = std::round(position);
  if (std::abs(position - nearest) <= kNodeSnap) {
    int k = static_cast<int>(nearest);
    if (periodic) k %= nodes;
    return {{k, 1.0}};
  }
  int i = static_cast<int>(std::floor(position));
  if (!periodic) i = std::min(i, nodes - 2);
  const double s = position - i;
  auto wrap = [nodes](int k) { return ((k % nodes) + nodes) % nodes; };

  if (interp == Interpolation::linear) {
    return {{periodic ? wrap(i) : i, 1.0 - s}, {periodic ? wrap(i + 1) : i + 1, s}};
  }
  const auto w = catmull_rom(s);
  std::vector<Tap> taps;
  for (int d = -1; d <= 2; ++d) {
    const int k = i + d;
    const double wk = w[d + 1];
    if (periodic) {
      taps.push_back({wrap(k), wk});
    } else if (k < 0) {
      // Linear extrapolation: g[-1] = 2 g[0] - g[1].
      taps.push_back({0, 2.0 * wk});
      taps.push_back({1, -wk});
    } else if (k > nodes - 1) {
      taps.push_back({nodes - 1, 2.0 * wk});
      taps.push_back({nodes - 2, -wk});
    } else {
      taps.push_back({k, wk});
    }
  }
  return taps;
}


BaseGrid BaseGrid::interval(double t0, double t1, int nodes) {
  Axis ax{t0, t1, nodes};
  check_axis(ax, "interval base");
  return BaseGrid(BaseKind::interval, ax, Axis{});
}

BaseGrid BaseGrid::circle(int nodes) {
  if (nodes < 3) throw InputError("circle base: need at least 3 nodes");
  return BaseGrid(BaseKind::circle, Axis{0.0, kTwoPi, nodes}, Axis{});
}

BaseGrid BaseGrid::grid2d(Axis u, Axis v) {
  check_axis(u, "grid2d u axis");
  check_axis(v, "grid2d v axis");
  return BaseGrid(BaseKind::grid2d, u, v);
}

int BaseGrid::node_count() const {
  return kind_ == BaseKind::grid2d ? u_.nodes * v_.nodes : u_.nodes;
}

BasePoint BaseGrid::node(int index) const {
  if (index < 0 || index >= node_count()) throw InputError("node index out of range");
  switch (kind_) {
    case BaseKind::interval:
      return {u_.node(index), 0.0};
    case BaseKind::circle:
      return {kTwoPi * index / u_.nodes, 0.0};
    case BaseKind::grid2d:
      return {u_.node(index / v_.nodes), v_.node(index % v_.nodes)};
  }
  return {};
}

double BaseGrid::spacing() const {
  return kind_ == BaseKind::circle ? kTwoPi / u_.nodes : u_.spacing();
}

bool BaseGrid::contains(const BasePoint& x) const {
  switch (kind_) {
    case BaseKind::interval:
      return axis_contains(u_, x.u);
    case BaseKind::circle:
      return std::isfinite(x.u);
    case BaseKind::grid2d:
      return axis_contains(u_, x.u) && axis_contains(v_, x.v);
  }
  return false;
}

std::vector<std::pair<int, int>> BaseGrid::adjacent_pairs() const {
  std::vector<std::pair<int, int>> pairs;
  switch (kind_) {
    case BaseKind::interval:
      for (int k = 0; k + 1 < u_.nodes; ++k) pairs.emplace_back(k, k + 1);
      break;
    case BaseKind::circle:
      for (int k = 0; k < u_.nodes; ++k) pairs.emplace_back(k, (k + 1) % u_.nodes);
      break;
    case BaseKind::grid2d:
      for (int a = 0; a < u_.nodes; ++a)
        for (int b = 0; b < v_.nodes; ++b) {
          const int idx = a * v_.nodes + b;
          if (b + 1 < v_.nodes) pairs.emplace_back(idx, idx + 1);
          if (a + 1 < u_.nodes) pairs.emplace_back(idx, idx + v_.nodes);
        }
      break;
  }
  return pairs;
}

AlgebraFamily::AlgebraFamily(BaseGrid base, std::vector<StructureConstants> fibers,
                             Interpolation interpolation)
    : base_(std::move(base)), fibers_(std::move(fibers)), interpolation_(interpolation) {
  if (static_cast<int>(fibers_.size()) != base_.node_count()) {
    std::ostringstream msg;
    msg << "family has " << fibers_.size() << " fibers but base has " << base_.node_count()
        << " nodes";
    throw InputError(msg.str());
  }
  n_ = fibers_.front().dim();
  for (const auto& f : fibers_) {
    if (f.dim() != n_) throw InputError("family fibers must share one dimension");
  }
}

AlgebraFamily AlgebraFamily::sample(
    const BaseGrid& base, const std::function<StructureConstants(const BasePoint&)>& fiber_fn,
    Interpolation interpolation) {
  std::vector<StructureConstants> fibers;
  fibers.reserve(base.node_count());
  for (int s = 0; s < base.node_count(); ++s) fibers.push_back(fiber_fn(base.node(s)));
  return AlgebraFamily(base, std::move(fibers), interpolation);
}

StructureConstants fiber_at(const AlgebraFamily& family, const BasePoint& x) {
  const BaseGrid& base = family.base();
  if (!base.contains(x)) {
    std::ostringstream msg;
    msg << "base point (" << x.u;
    if (base.dimension() == 2) msg << ", " << x.v;
    msg << ") lies outside the family's domain";
    throw InputError(msg.str());
  }

  std::vector<Tap> taps;
  const Interpolation interp = family.interpolation();
  switch (base.kind()) {
    case BaseKind::interval: {
      const Axis& ax = base.u_axis();
      taps = axis_taps(ax.nodes, false, (x.u - ax.t0) / (ax.t1 - ax.t0) * (ax.nodes - 1), interp);
      break;
    }
    case BaseKind::circle: {
      const int nodes = base.u_axis().nodes;
      taps = axis_taps(nodes, true, x.u / kTwoPi * nodes, interp);
      break;
    }
    case BaseKind::grid2d: {
      const Axis& au = base.u_axis();
      const Axis& av = base.v_axis();
      const auto tu = axis_taps(au.nodes, false, (x.u - au.t0) / (au.t1 - au.t0) * (au.nodes - 1), interp);
      const auto tv = axis_taps(av.nodes, false, (x.v - av.t0) / (av.t1 - av.t0) * (av.nodes - 1), interp);
      for (const Tap& a : tu)
        for (const Tap& b : tv) taps.push_back({a.node * av.nodes + b.node, a.weight * b.weight});
      break;
    }
  }

  if (taps.size() == 1 && taps.front().weight == 1.0) return family.fiber(taps.front().node);
  StructureConstants out(family.dim());
  for (const Tap& tap : taps) {
    if (tap.weight == 0.0) continue;
    out += tap.weight * family.fiber(tap.node);
  }
  return out;
}

FamilyValidation validate_family(const AlgebraFamily& family, double tol) {
  FamilyValidation report;
  report.tol = tol;
  report.residuals.assign(family.node_count(), 0.0);
  parallel_for(report.residuals.size(), [&](std::size_t s) {
    report.residuals[s] = associator_residual(family.fiber(static_cast<int>(s))).max_abs;
  });
  report.valid = std::all_of(report.residuals.begin(), report.residuals.end(),
                             [tol](double r) { return r <= tol; });
  return report;
}

Section section_product(const AlgebraFamily& family, const Section& s, const Section& t) {
  const auto count = static_cast<std::size_t>(family.node_count());
  if (s.values.size() != count || t.values.size() != count) {
    throw InputError("section_product: sections must have one value per node");
  }
  Section out;
  out.values.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.values.push_back(multiply(family.fiber(static_cast<int>(k)), s.values[k], t.values[k]));
  }
  return out;
}

std::optional<Section> unit_section(const AlgebraFamily& family, double tol) {
  Section out;
  for (int k = 0; k < family.node_count(); ++k) {
    auto unit = find_unit(family.fiber(k), tol);
    if (!unit) return std::nullopt;
    out.values.push_back(std::move(unit->e));
  }
  return out;
}

ClassifyReport classify_map(const AlgebraFamily& family, const ClassifyOptions& options) {
  const FamilyValidation validation = validate_family(family, options.tol);
  if (!validation.valid) {
    const auto worst =
        std::max_element(validation.residuals.begin(), validation.residuals.end());
    std::ostringstream msg;
    msg << "classify_map: family is not associative at node "
        << (worst - validation.residuals.begin()) << " (residual " << *worst << " > tol "
        << options.tol << ")";
    throw PreconditionError(msg.str());
  }

  const auto count = static_cast<std::size_t>(family.node_count());
  ClassifyReport report;
  report.signatures.resize(count);
  parallel_for(count, [&](std::size_t s) {
    report.signatures[s] = iso_signature(family.fiber(static_cast<int>(s)), options.tol);
  });

  std::map<IsoSignature, int> ids;
  report.cluster_of_node.resize(count);
  for (std::size_t s = 0; s < count; ++s) {
    auto [it, inserted] = ids.emplace(report.signatures[s], static_cast<int>(report.clusters.size()));
    if (inserted) report.clusters.emplace_back();
    report.cluster_of_node[s] = it->second;
    report.clusters[it->second].push_back(static_cast<int>(s));
  }

  const auto pairs = family.base().adjacent_pairs();
  report.adjacent_pairs = static_cast<int>(pairs.size());
  if (report.clusters.size() == 1) {
    std::vector<char> certified(pairs.size(), 0);
    parallel_for(pairs.size(), [&](std::size_t p) {
      const auto [a, b] = pairs[p];
      const auto probe = try_isomorphism(family.fiber(a), family.fiber(b), options.attempts,
                                         options.tol, options.seed + p);
      certified[p] = probe.certificate.has_value();
    });
    report.certified_pairs = static_cast<int>(std::count(certified.begin(), certified.end(), 1));
    report.strict_candidate = report.certified_pairs == report.adjacent_pairs;
  }
  return report;
}

AlgebraFamily pullback(const AlgebraFamily& family, const BaseGrid& new_base,
                       std::span<const BasePoint> images) {
  if (static_cast<int>(images.size()) != new_base.node_count()) {
    throw InputError("pullback: need one image point per node of the new base");
  }
  std::vector<StructureConstants> fibers;
  fibers.reserve(images.size());
  for (const BasePoint& x : images) fibers.push_back(fiber_at(family, x));
  return AlgebraFamily(new_base, std::move(fibers), family.interpolation());
}

AlgebraFamily pullback(const AlgebraFamily& family, const BaseGrid& new_base,
                       const std::function<BasePoint(const BasePoint&)>& phi) {
  std::vector<BasePoint> images;
  images.reserve(new_base.node_count());
  for (int s = 0; s < new_base.node_count(); ++s) images.push_back(phi(new_base.node(s)));
  return pullback(family, new_base, images);
}

}  // namespace algbundle
