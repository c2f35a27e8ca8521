#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "algbundle/algebra.hpp"
#include "algbundle/cohomology.hpp"
#include "algbundle/connection.hpp"
#include "algbundle/family.hpp"
#include "algbundle/io.hpp"
#include "algbundle/variety.hpp"

namespace algbundle::cli {

namespace {

using io::json;

struct Options {
  double tol = kDefaultTol;
  std::string format = "json";
  std::vector<std::string> files;

  // gen
  std::string kind = "truncated";
  int n = 0;
  std::vector<double> g, h;

  // iso / family-classify
  std::uint64_t seed = 0;
  int attempts = 5;

  // project
  int max_iter = 50;
  bool no_normalize = false;

  // connection-solve / transport / sweep
  double t = 0.0, t0 = 0.0, t1 = 0.0, step_h = 0.0;
  int steps = 1000;
  std::string op;
};

class Context {
 public:
  Context(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

  json read(const std::string& path) {
    std::string text;
    if (path == "-") {
      if (stdin_used_) throw InputError("standard input can only be read once");
      stdin_used_ = true;
      text.assign(std::istreambuf_iterator<char>(in_), {});
    } else {
      std::ifstream f(path);
      if (!f) throw InputError("cannot open " + path);
      text.assign(std::istreambuf_iterator<char>(f), {});
    }
    return io::parse(text);
  }

  void emit(const json& doc) { out_ << io::dump(doc); }
  std::ostream& out() { return out_; }

 private:
  std::istream& in_;
  std::ostream& out_;
  bool stdin_used_ = false;
};

std::string num(double x) { return json(x).dump(); }

void add_tol(CLI::App* sub, Options& o) {
  sub->add_option("--tol", o.tol, "Tolerance")->check(CLI::PositiveNumber);
}

void add_format(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

void add_files(CLI::App* sub, Options& o, std::size_t count, const std::string& names) {
  sub->add_option("files", o.files, names)->required()->expected(static_cast<int>(count));
}

int cmd_check(Context& ctx, const Options& o) {
  const auto a = io::algebra_from_json(ctx.read(o.files[0]));
  const auto r = associator_residual(a);
  ctx.emit({{"n", a.dim()},
            {"max_abs", r.max_abs},
            {"frobenius_norm", r.frobenius_norm},
            {"associative", r.max_abs <= o.tol}});
  return kOk;
}

int cmd_unit(Context& ctx, const Options& o) {
  const auto a = io::algebra_from_json(ctx.read(o.files[0]));
  const auto u = find_unit(a, o.tol);
  json doc{{"unital", u.has_value()}, {"e", nullptr}, {"residual", nullptr}};
  if (u) {
    json e = json::array();
    for (Eigen::Index i = 0; i < u->e.size(); ++i) e.push_back(u->e(i));
    doc["e"] = std::move(e);
    doc["residual"] = u->residual;
  }
  ctx.emit(doc);
  return kOk;
}

int cmd_gen(Context& ctx, const Options& o) {
  StructureConstants a;
  if (o.kind == "truncated") {
    a = gen_truncated(o.n);
  } else if (o.kind == "gh") {
    if (o.g.empty() && o.h.empty()) {
      a = gen_gh_canonical(o.n);
    } else {
      if (static_cast<int>(o.g.size()) != o.n || static_cast<int>(o.h.size()) != o.n) {
        throw InputError("gen: --g and --h need exactly n values each");
      }
      a = gen_gh(o.g, o.h);
    }
  } else {
    a = StructureConstants(o.n);
  }
  ctx.emit(io::to_json(a));
  return kOk;
}

int cmd_signature(Context& ctx, const Options& o) {
  ctx.emit(io::to_json(iso_signature(io::algebra_from_json(ctx.read(o.files[0])), o.tol)));
  return kOk;
}

int cmd_iso(Context& ctx, const Options& o) {
  const auto a = io::algebra_from_json(ctx.read(o.files[0]));
  const auto b = io::algebra_from_json(ctx.read(o.files[1]));
  const auto probe = try_isomorphism(a, b, o.attempts, o.tol, o.seed);
  ctx.emit({{"found", probe.certificate.has_value()},
            {"status", probe.certificate ? "isomorphic" : "inconclusive"},
            {"certificate", probe.certificate ? io::matrix_to_json(*probe.certificate) : json(nullptr)},
            {"objective", probe.objective},
            {"starts_tried", probe.starts_tried}});
  return kOk;
}

int cmd_z2(Context& ctx, const Options& o) {
  const auto a = io::algebra_from_json(ctx.read(o.files[0]));
  ctx.emit({{"n", a.dim()}, {"z2_dim", z2_dimension(a, o.tol)}});
  return kOk;
}

int cmd_cocycle(Context& ctx, const Options& o) {
  const auto a = io::algebra_from_json(ctx.read(o.files[0]));
  const auto f = io::cochain_from_json(ctx.read(o.files[1]));
  ctx.emit({{"defect", cocycle_defect(a, f)}});
  return kOk;
}

int cmd_project(Context& ctx, const Options& o) {
  const auto a = io::algebra_from_json(ctx.read(o.files[0]));
  const auto report = project_to_variety(a, {o.tol, o.max_iter, !o.no_normalize});
  ctx.emit(io::to_json(report));
  return report.converged ? kOk : kNonConvergence;
}

int cmd_embed(Context& ctx, const Options& o) {
  ctx.emit(io::to_json(embed(io::algebra_from_json(ctx.read(o.files[0])))));
  return kOk;
}

int cmd_restrict(Context& ctx, const Options& o) {
  ctx.emit(io::to_json(restrict_last(io::algebra_from_json(ctx.read(o.files[0])), o.tol)));
  return kOk;
}

void csv_coords(std::ostream& os, const BaseGrid& base, int node) {
  const BasePoint x = base.node(node);
  os << num(x.u);
  if (base.dimension() == 2) os << ',' << num(x.v);
}

std::string csv_coord_header(const BaseGrid& base) {
  return base.dimension() == 2 ? "u,v" : "t";
}

int cmd_family_validate(Context& ctx, const Options& o) {
  const auto family = io::family_from_json(ctx.read(o.files[0]));
  const auto report = validate_family(family, o.tol);
  if (o.format == "csv") {
    auto& os = ctx.out();
    os << "node," << csv_coord_header(family.base()) << ",residual\n";
    for (int k = 0; k < family.node_count(); ++k) {
      os << k << ',';
      csv_coords(os, family.base(), k);
      os << ',' << num(report.residuals[k]) << '\n';
    }
  } else {
    ctx.emit({{"valid", report.valid}, {"tol", report.tol}, {"residuals", report.residuals}});
  }
  return kOk;
}

int cmd_family_classify(Context& ctx, const Options& o) {
  const auto family = io::family_from_json(ctx.read(o.files[0]));
  const auto report = classify_map(family, {o.tol, o.attempts, o.seed});
  if (o.format == "csv") {
    auto& os = ctx.out();
    os << "node," << csv_coord_header(family.base())
       << ",cluster,dim,commutative,unital,p,q,z,z2_dim,center_dim\n";
    for (int k = 0; k < family.node_count(); ++k) {
      const IsoSignature& s = report.signatures[k];
      os << k << ',';
      csv_coords(os, family.base(), k);
      os << ',' << report.cluster_of_node[k] << ',' << s.dim << ',' << s.commutative << ','
         << s.unital << ',' << s.trace_positive << ',' << s.trace_negative << ','
         << s.trace_zero << ',' << s.z2_dim << ',' << s.center_dim << '\n';
    }
  } else {
    ctx.emit(io::to_json(report));
  }
  return kOk;
}

int cmd_section_mul(Context& ctx, const Options& o) {
  const auto family = io::family_from_json(ctx.read(o.files[0]));
  const auto s = io::section_from_json(ctx.read(o.files[1]));
  const auto t = io::section_from_json(ctx.read(o.files[2]));
  ctx.emit(io::to_json(section_product(family, s, t)));
  return kOk;
}

int cmd_pullback(Context& ctx, const Options& o) {
  const auto family = io::family_from_json(ctx.read(o.files[0]));
  const auto map = io::pullback_map_from_json(ctx.read(o.files[1]));
  ctx.emit(io::to_json(pullback(family, map.base, map.points)));
  return kOk;
}

double step_or_spacing(const AlgebraFamily& family, double h) {
  return h > 0.0 ? h : family.base().spacing();
}

int cmd_connection_solve(Context& ctx, const Options& o) {
  const auto family = io::family_from_json(ctx.read(o.files[0]));
  const double h = step_or_spacing(family, o.step_h);
  const auto solved = solve_differential_connection(family, o.t, h);
  ctx.emit({{"t", o.t},
            {"h", h},
            {"gamma", io::matrix_to_json(solved.gamma.matrix())},
            {"residual", solved.residual},
            {"differential", solved.residual <= o.tol}});
  return kOk;
}

int cmd_transport(Context& ctx, const Options& o) {
  const auto family = io::family_from_json(ctx.read(o.files[0]));
  const auto connection = path_connection(family, step_or_spacing(family, o.step_h));
  const auto map = parallel_transport(family, connection, o.t0, o.t1, o.steps, o.tol);
  json doc = io::to_json(map);
  doc["multiplicativity_defect"] =
      multiplicativity_defect(map, fiber_at(family, o.t0), fiber_at(family, o.t1));
  ctx.emit(doc);
  return kOk;
}

int cmd_sweep(Context& ctx, const Options& o) {
  const auto family = io::family_from_json(ctx.read(o.files[0]));
  std::vector<double> residuals;
  if (o.op == "connection-solve") {
    residuals = path_connection(family, step_or_spacing(family, o.step_h)).residuals;
  } else {
    residuals = validate_family(family, o.tol).residuals;
  }
  if (o.format == "json") {
    json rows = json::array();
    for (int k = 0; k < family.node_count(); ++k) {
      const BasePoint x = family.base().node(k);
      json row{{"node", k}, {"residual", residuals[k]}};
      if (family.base().dimension() == 2) {
        row["u"] = x.u;
        row["v"] = x.v;
      } else {
        row["t"] = x.u;
      }
      rows.push_back(std::move(row));
    }
    ctx.emit({{"op", o.op}, {"rows", std::move(rows)}});
    return kOk;
  }
  auto& os = ctx.out();
  os << "node," << csv_coord_header(family.base()) << ",residual\n";
  for (int k = 0; k < family.node_count(); ++k) {
    os << k << ',';
    csv_coords(os, family.base(), k);
    os << ',' << num(residuals[k]) << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Associative algebras from structure constants, and families of them"};
  app.name("algbundle");
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");
  Options o;

  using Handler = int (*)(Context&, const Options&);
  std::map<CLI::App*, Handler> handlers;
  auto sub = [&](const char* name, const char* about, Handler handler) {
    CLI::App* s = app.add_subcommand(name, about);
    s->set_help_flag("--help", "Print this help message and exit");
    handlers[s] = handler;
    return s;
  };

  auto* check = sub("check", "Associator residual of an algebra", cmd_check);
  add_files(check, o, 1, "ALGEBRA");
  add_tol(check, o);

  auto* unit = sub("unit", "Find a two-sided unit", cmd_unit);
  add_files(unit, o, 1, "ALGEBRA");
  add_tol(unit, o);

  auto* gen = sub("gen", "Generate structure constants", cmd_gen);
  gen->add_option("--kind", o.kind, "truncated | gh | zero")
      ->check(CLI::IsMember({"truncated", "gh", "zero"}));
  gen->add_option("--n", o.n, "Dimension")->required()->check(CLI::PositiveNumber);
  gen->add_option("--g", o.g, "g(1..n), comma separated")->delimiter(',');
  gen->add_option("--h", o.h, "h(1..n), comma separated")->delimiter(',');

  auto* signature = sub("signature", "Isomorphism invariants", cmd_signature);
  add_files(signature, o, 1, "ALGEBRA");
  add_tol(signature, o);

  auto* iso = sub("iso", "Search for an isomorphism A -> B", cmd_iso);
  add_files(iso, o, 2, "A B");
  add_tol(iso, o);
  iso->add_option("--seed", o.seed, "Random seed")->required();
  iso->add_option("--attempts", o.attempts, "Random restarts")->check(CLI::NonNegativeNumber);

  auto* z2 = sub("z2", "Dimension of the 2-cocycle space", cmd_z2);
  add_files(z2, o, 1, "ALGEBRA");
  add_tol(z2, o);

  auto* cocycle = sub("cocycle", "Cocycle defect of a bilinear map", cmd_cocycle);
  add_files(cocycle, o, 2, "ALGEBRA COCHAIN");

  auto* project = sub("project", "Gauss-Newton projection onto the associator variety", cmd_project);
  add_files(project, o, 1, "ALGEBRA");
  add_tol(project, o);
  project->add_option("--max-iter", o.max_iter, "Iteration cap")->check(CLI::NonNegativeNumber);
  project->add_flag("--no-normalize", o.no_normalize, "Do not keep the Frobenius norm fixed");

  auto* emb = sub("embed", "Zero-pad to one dimension higher", cmd_embed);
  add_files(emb, o, 1, "ALGEBRA");

  auto* res = sub("restrict", "Drop the last basis vector", cmd_restrict);
  add_files(res, o, 1, "ALGEBRA");
  add_tol(res, o);

  auto* fv = sub("family-validate", "Per-node associativity of a family", cmd_family_validate);
  add_files(fv, o, 1, "FAMILY");
  add_tol(fv, o);
  add_format(fv, o);

  auto* fc = sub("family-classify", "Per-node signatures and clusters", cmd_family_classify);
  add_files(fc, o, 1, "FAMILY");
  add_tol(fc, o);
  add_format(fc, o);
  fc->add_option("--seed", o.seed, "Random seed")->required();
  fc->add_option("--attempts", o.attempts, "Random restarts per adjacent pair")
      ->check(CLI::NonNegativeNumber);

  auto* sm = sub("section-mul", "Pointwise product of two sections", cmd_section_mul);
  add_files(sm, o, 3, "FAMILY S T");

  auto* pb = sub("pullback", "Pull a family back along a map of bases", cmd_pullback);
  add_files(pb, o, 2, "FAMILY MAP");

  auto* cs = sub("connection-solve", "Differential connection at one base point", cmd_connection_solve);
  add_files(cs, o, 1, "FAMILY");
  add_tol(cs, o);
  cs->add_option("--t", o.t, "Base point")->required();
  cs->add_option("--h", o.step_h, "Difference step (default: grid spacing)");

  auto* tr = sub("transport", "Parallel transport along the interval", cmd_transport);
  add_files(tr, o, 1, "FAMILY");
  add_tol(tr, o);
  tr->add_option("--t0", o.t0, "Start")->required();
  tr->add_option("--t1", o.t1, "End")->required();
  tr->add_option("--steps", o.steps, "RK4 steps")->check(CLI::PositiveNumber);
  tr->add_option("--h", o.step_h, "Difference step (default: grid spacing)");

  auto* sw = sub("sweep", "Per-node batch over a family", cmd_sweep);
  add_files(sw, o, 1, "FAMILY");
  add_tol(sw, o);
  sw->add_option("--op", o.op, "connection-solve | family-validate")
      ->required()
      ->check(CLI::IsMember({"connection-solve", "family-validate"}));
  sw->add_option("--h", o.step_h, "Difference step (default: grid spacing)");
  add_format(sw, o);
  sw->preparse_callback([&o](std::size_t) { o.format = "csv"; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInputError;
  }

  Context ctx(in, out);
  for (const auto& [subapp, handler] : handlers) {
    if (!subapp->parsed()) continue;
    try {
      const int code = handler(ctx, o);
      if (code == kNonConvergence) err << "did not converge; report written to stdout\n";
      return code;
    } catch (const InputError& e) {
      err << "input error: " << e.what() << '\n';
      return kInputError;
    } catch (const PreconditionError& e) {
      err << "precondition failed: " << e.what() << '\n';
      return kPreconditionError;
    } catch (const json::exception& e) {
      err << "input error: " << e.what() << '\n';
      return kInputError;
    }
  }
  err << app.help();
  return kInputError;
}

}  // namespace algbundle::cli
