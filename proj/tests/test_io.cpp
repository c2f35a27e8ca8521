#include <doctest.h>

#include <random>

#include "algbundle/io.hpp"
#include "oracles.hpp"

using namespace algbundle;
using io::json;

TEST_CASE("algebra documents round trip bit-exactly") {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 4; ++n) {
    const auto a = oracle::random_tensor(n, rng);
    const std::string text = io::dump(io::to_json(a));
    const auto back = io::algebra_from_json(io::parse(text));
    CHECK(back == a);
    CHECK(io::dump(io::to_json(back)) == text);
  }
  const auto doc = io::to_json(gen_truncated(2));
  CHECK(doc["n"] == 2);
  CHECK(doc["alpha"][0][0][1] == 1.0);  // x1 x1 = x2
  CHECK(doc["alpha"][1][1][1] == 1.0);  // x2 x2 = x2 (mod-n wrap)
}

TEST_CASE("shape and type errors are input errors") {
  CHECK_THROWS_AS(io::parse("{\"n\": 2,"), InputError);
  CHECK_THROWS_AS(io::algebra_from_json(json::parse(R"({"n": 1})")), InputError);
  CHECK_THROWS_AS(io::algebra_from_json(json::parse(R"({"n": 2, "alpha": [[[1]]]})")), InputError);
  CHECK_THROWS_AS(io::algebra_from_json(json::parse(R"({"n": 1, "alpha": [[["x"]]]})")), InputError);
  CHECK_THROWS_AS(io::algebra_from_json(json::parse(R"({"n": 0, "alpha": []})")), InputError);
  CHECK_THROWS_AS(io::algebra_from_json(json::parse(R"([1, 2])")), InputError);
  CHECK_THROWS_AS(io::cochain_from_json(json::parse(R"({"n": 1, "f": [[1]]})")), InputError);
  CHECK_THROWS_AS(io::endomorphism_from_json(json::parse(R"({"n": 2, "gamma": [[1, 2]]})")), InputError);
  CHECK_THROWS_AS(io::base_from_json(json::parse(R"({"kind": "sphere"})")), InputError);
  CHECK_THROWS_AS(io::base_from_json(json::parse(R"({"kind": "interval", "t0": 1, "t1": 0, "nodes": 3})")),
                  InputError);
}

TEST_CASE("cochain and endomorphism documents") {
  std::mt19937_64 rng(6);
  const auto f = oracle::random_cube<CochainTag>(3, rng);
  CHECK(io::cochain_from_json(io::to_json(f)) == f);
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 3.0, 4.0;
  const auto doc = io::to_json(EndomorphismMatrix(m));
  CHECK(doc["gamma"][0][1] == 2.0);  // row-major
  CHECK(io::endomorphism_from_json(doc).matrix() == m);
}

TEST_CASE("family documents round trip") {
  for (const auto& base : {BaseGrid::interval(-1.0, 1.0, 5), BaseGrid::circle(4),
                           BaseGrid::grid2d({0.0, 1.0, 2}, {0.0, 0.5, 3})}) {
    const auto fam = AlgebraFamily::sample(base, [](const BasePoint& x) { return oracle::quadratic(x.u + x.v); },
                                           Interpolation::cubic);
    const std::string text = io::dump(io::to_json(fam));
    const auto back = io::family_from_json(io::parse(text));
    CHECK(back == fam);
    CHECK(io::dump(io::to_json(back)) == text);
  }
  auto doc = io::to_json(AlgebraFamily::sample(BaseGrid::interval(0.0, 1.0, 3),
                                               [](const BasePoint&) { return gen_truncated(2); }));
  doc["gamma"].erase(0);
  CHECK_THROWS_AS(io::family_from_json(doc), InputError);
}

TEST_CASE("sections, connections, transports") {
  Section s{{Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(-0.5, 0.25)}};
  const auto back = io::section_from_json(io::to_json(s));
  REQUIRE(back.values.size() == 2);
  CHECK(back.values[1] == s.values[1]);

  PathConnection c{BaseGrid::interval(0.0, 1.0, 2),
                   {EndomorphismMatrix::identity(2), EndomorphismMatrix::zero(2)},
                   {0.0, 0.5}};
  const auto cb = io::path_connection_from_json(io::to_json(c));
  CHECK(cb.base == c.base);
  CHECK(cb.samples[0].matrix() == c.samples[0].matrix());
  CHECK(cb.residuals == c.residuals);

  TransportMap t{0.0, 0.5, Eigen::Matrix2d{{1.0, 0.5}, {0.0, 2.0}}, 100, 2.5, true};
  const auto tb = io::transport_from_json(io::to_json(t));
  CHECK(tb.phi == t.phi);
  CHECK(tb.steps == 100);
  CHECK(tb.target_t == 0.5);
}

TEST_CASE("pullback maps") {
  const auto m = io::pullback_map_from_json(
      json::parse(R"({"base": {"kind": "interval", "t0": 0, "t1": 1, "nodes": 2}, "points": [[0.1], [0.9]]})"));
  CHECK(m.points.size() == 2);
  CHECK(m.points[1].u == 0.9);
  CHECK_THROWS_AS(io::pullback_map_from_json(json::parse(
                      R"({"base": {"kind": "interval", "t0": 0, "t1": 1, "nodes": 2}, "points": [[0.1]]})")),
                  InputError);
}
