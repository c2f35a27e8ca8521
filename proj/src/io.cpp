#include "algbundle/io.hpp"

#include <sstream>

namespace algbundle::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw InputError(what); }

const json& field(const json& doc, const char* key) {
  if (!doc.is_object()) fail("expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) fail(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& v, const char* what) {
  if (!v.is_number()) fail(std::string(what) + ": expected a number");
  return v.get<double>();
}

int integer(const json& v, const char* what) {
  if (!v.is_number_integer()) fail(std::string(what) + ": expected an integer");
  return v.get<int>();
}

const json& array_of(const json& v, std::size_t size, const char* what) {
  if (!v.is_array() || v.size() != size) {
    std::ostringstream msg;
    msg << what << ": expected an array of length " << size;
    fail(msg.str());
  }
  return v;
}

int dimension(const json& doc) {
  const int n = integer(field(doc, "n"), "n");
  if (n < 1) fail("n must be >= 1");
  return n;
}

template <class Tag>
json tensor_to_json(const CubeTensor<Tag>& t) {
  const int n = t.dim();
  json out = json::array();
  for (int i = 0; i < n; ++i) {
    json plane = json::array();
    for (int j = 0; j < n; ++j) {
      json row = json::array();
      for (int k = 0; k < n; ++k) row.push_back(t(i, j, k));
      plane.push_back(std::move(row));
    }
    out.push_back(std::move(plane));
  }
  return out;
}

template <class Tag>
CubeTensor<Tag> tensor_from_json(const json& v, int n, const char* what) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n) * n * n);
  for (const json& plane : array_of(v, n, what))
    for (const json& row : array_of(plane, n, what))
      for (const json& x : array_of(row, n, what)) values.push_back(number(x, what));
  return CubeTensor<Tag>(n, std::move(values));
}

json axis_to_json(const Axis& ax) { return {{"t0", ax.t0}, {"t1", ax.t1}, {"nodes", ax.nodes}}; }

Axis axis_from_json(const json& doc) {
  return Axis{number(field(doc, "t0"), "t0"), number(field(doc, "t1"), "t1"),
              integer(field(doc, "nodes"), "nodes")};
}

Eigen::VectorXd vector_from_json(const json& v, int n, const char* what) {
  Eigen::VectorXd out(n);
  const json& arr = array_of(v, n, what);
  for (int i = 0; i < n; ++i) out(i) = number(arr[i], what);
  return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const json& doc) { return doc.dump() + "\n"; }

json to_json(const StructureConstants& a) { return {{"n", a.dim()}, {"alpha", tensor_to_json(a)}}; }

StructureConstants algebra_from_json(const json& doc) {
  const int n = dimension(doc);
  return tensor_from_json<AlgebraTag>(field(doc, "alpha"), n, "alpha");
}

json to_json(const BilinearMapTensor& f) { return {{"n", f.dim()}, {"f", tensor_to_json(f)}}; }

BilinearMapTensor cochain_from_json(const json& doc) {
  const int n = dimension(doc);
  return tensor_from_json<CochainTag>(field(doc, "f"), n, "f");
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty()) fail(std::string(what) + ": expected a square matrix");
  const auto n = rows.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const json& row = array_of(rows[r], n, what);
    for (std::size_t c = 0; c < n; ++c) m(r, c) = number(row[c], what);
  }
  return m;
}

json to_json(const EndomorphismMatrix& g) {
  return {{"n", g.dim()}, {"gamma", matrix_to_json(g.matrix())}};
}

EndomorphismMatrix endomorphism_from_json(const json& doc) {
  const int n = dimension(doc);
  Eigen::MatrixXd m = matrix_from_json(field(doc, "gamma"), "gamma");
  if (m.rows() != n) fail("gamma: shape does not match n");
  return EndomorphismMatrix(std::move(m));
}

json to_json(const BaseGrid& base) {
  switch (base.kind()) {
    case BaseKind::interval: {
      json out = axis_to_json(base.u_axis());
      out["kind"] = "interval";
      return out;
    }
    case BaseKind::circle:
      return {{"kind", "circle"}, {"nodes", base.u_axis().nodes}};
    case BaseKind::grid2d:
      return {{"kind", "grid2d"}, {"u", axis_to_json(base.u_axis())}, {"v", axis_to_json(base.v_axis())}};
  }
  return {};
}

BaseGrid base_from_json(const json& doc) {
  const json& kind = field(doc, "kind");
  if (!kind.is_string()) fail("base kind must be a string");
  const auto k = kind.get<std::string>();
  if (k == "interval") {
    const Axis ax = axis_from_json(doc);
    return BaseGrid::interval(ax.t0, ax.t1, ax.nodes);
  }
  if (k == "circle") return BaseGrid::circle(integer(field(doc, "nodes"), "nodes"));
  if (k == "grid2d") return BaseGrid::grid2d(axis_from_json(field(doc, "u")), axis_from_json(field(doc, "v")));
  fail("unknown base kind \"" + k + "\"");
}

json to_json(const AlgebraFamily& family) {
  json gamma = json::array();
  for (const auto& f : family.fibers()) gamma.push_back(tensor_to_json(f));
  return {{"n", family.dim()},
          {"base", to_json(family.base())},
          {"interpolation", family.interpolation() == Interpolation::linear ? "linear" : "cubic"},
          {"gamma", std::move(gamma)}};
}

AlgebraFamily family_from_json(const json& doc) {
  const int n = dimension(doc);
  BaseGrid base = base_from_json(field(doc, "base"));
  Interpolation interp = Interpolation::linear;
  if (doc.contains("interpolation")) {
    const json& v = doc["interpolation"];
    if (v == "linear") {
      interp = Interpolation::linear;
    } else if (v == "cubic") {
      interp = Interpolation::cubic;
    } else {
      fail("interpolation must be \"linear\" or \"cubic\"");
    }
  }
  const json& gamma = array_of(field(doc, "gamma"), base.node_count(), "gamma");
  std::vector<StructureConstants> fibers;
  fibers.reserve(gamma.size());
  for (const json& t : gamma) fibers.push_back(tensor_from_json<AlgebraTag>(t, n, "gamma"));
  return AlgebraFamily(std::move(base), std::move(fibers), interp);
}

json to_json(const Section& s) {
  json values = json::array();
  for (const auto& v : s.values) values.push_back(vector_to_json(v));
  const int n = s.values.empty() ? 0 : static_cast<int>(s.values.front().size());
  return {{"n", n}, {"values", std::move(values)}};
}

Section section_from_json(const json& doc) {
  const int n = dimension(doc);
  const json& values = field(doc, "values");
  if (!values.is_array()) fail("values: expected an array");
  Section s;
  for (const json& v : values) s.values.push_back(vector_from_json(v, n, "values"));
  return s;
}

json to_json(const PathConnection& c) {
  json samples = json::array();
  for (const auto& g : c.samples) samples.push_back(matrix_to_json(g.matrix()));
  return {{"base", to_json(c.base)}, {"gamma_samples", std::move(samples)}, {"residuals", c.residuals}};
}

PathConnection path_connection_from_json(const json& doc) {
  PathConnection c{base_from_json(field(doc, "base")), {}, {}};
  if (c.base.kind() != BaseKind::interval) fail("path connection base must be an interval");
  const auto nodes = static_cast<std::size_t>(c.base.node_count());
  for (const json& g : array_of(field(doc, "gamma_samples"), nodes, "gamma_samples")) {
    c.samples.emplace_back(matrix_from_json(g, "gamma_samples"));
  }
  for (const json& r : array_of(field(doc, "residuals"), nodes, "residuals")) {
    c.residuals.push_back(number(r, "residuals"));
  }
  for (const auto& g : c.samples) {
    if (g.dim() != c.samples.front().dim()) fail("gamma_samples: inconsistent sizes");
  }
  return c;
}

json to_json(const TransportMap& t) {
  return {{"t0", t.source_t},
          {"t1", t.target_t},
          {"phi", matrix_to_json(t.phi)},
          {"steps", t.steps},
          {"condition_number", t.condition_number},
          {"non_multiplicative_region", t.non_multiplicative_region}};
}

TransportMap transport_from_json(const json& doc) {
  TransportMap t;
  t.source_t = number(field(doc, "t0"), "t0");
  t.target_t = number(field(doc, "t1"), "t1");
  t.phi = matrix_from_json(field(doc, "phi"), "phi");
  t.steps = integer(field(doc, "steps"), "steps");
  if (doc.contains("condition_number")) t.condition_number = number(doc["condition_number"], "condition_number");
  if (doc.contains("non_multiplicative_region")) {
    t.non_multiplicative_region = doc["non_multiplicative_region"].get<bool>();
  }
  return t;
}

json to_json(const IsoSignature& s) {
  return {{"dim", s.dim},
          {"commutative", s.commutative},
          {"unital", s.unital},
          {"trace_form_signature", {s.trace_positive, s.trace_negative, s.trace_zero}},
          {"z2_dim", s.z2_dim},
          {"center_dim", s.center_dim}};
}

json to_json(const ProjectionReport& r) {
  return {{"point", to_json(r.point)},
          {"iterations", r.iterations},
          {"final_residual", r.final_residual},
          {"step_norms", r.step_norms},
          {"converged", r.converged}};
}

json to_json(const ClassifyReport& r) {
  json sigs = json::array();
  for (const auto& s : r.signatures) sigs.push_back(to_json(s));
  return {{"signatures", std::move(sigs)},
          {"cluster_of_node", r.cluster_of_node},
          {"clusters", r.clusters},
          {"adjacent_pairs", r.adjacent_pairs},
          {"certified_pairs", r.certified_pairs},
          {"strict_candidate", r.strict_candidate}};
}

PullbackMap pullback_map_from_json(const json& doc) {
  PullbackMap m{base_from_json(field(doc, "base")), {}};
  const auto nodes = static_cast<std::size_t>(m.base.node_count());
  for (const json& p : array_of(field(doc, "points"), nodes, "points")) {
    if (!p.is_array() || p.empty() || p.size() > 2) fail("points: each entry is [u] or [u, v]");
    BasePoint x{number(p[0], "points"), p.size() == 2 ? number(p[1], "points") : 0.0};
    m.points.push_back(x);
  }
  return m;
}

}  // namespace algbundle::io
