#include <doctest.h>

#include <random>

#include "algbundle/variety.hpp"
#include "oracles.hpp"

using namespace algbundle;

TEST_CASE("projection of a point already on the variety is a no-op") {
  const auto report = project_to_variety(gen_truncated(3), {1e-10, 50, true});
  CHECK(report.iterations == 0);
  CHECK(report.converged);
  CHECK(report.final_residual == 0.0);
  CHECK(report.point == gen_truncated(3));
}

TEST_CASE("projection of a perturbed point converges nearby") {
  std::mt19937_64 rng(2024);
  const auto noise = oracle::random_tensor(3, rng);
  for (double eps : {1e-2, 5e-3}) {
    const auto start = gen_truncated(3) + eps * noise;
    const auto report = project_to_variety(start, {1e-10, 50, true});
    CHECK(report.converged);
    CHECK(report.iterations <= 50);
    CHECK(report.final_residual <= 1e-10);
    CHECK(oracle::associator_max_abs(report.point) <= 1e-10);
    CHECK((report.point - start).frobenius_norm() <= 10 * eps);
    CHECK(report.point.frobenius_norm() == doctest::Approx(start.frobenius_norm()));

    // Idempotent at tolerance.
    const auto again = project_to_variety(report.point, {1e-10, 50, true});
    CHECK(again.iterations == 0);
  }
}

TEST_CASE("normalized projection commutes with scaling") {
  std::mt19937_64 rng(77);
  const auto start = gen_truncated(3) + 1e-2 * oracle::random_tensor(3, rng);
  const auto base = project_to_variety(start, {1e-12, 50, true});
  REQUIRE(base.converged);
  for (double lambda : {0.5, 2.0}) {
    const auto scaled = project_to_variety(lambda * start, {1e-12, 50, true});
    REQUIRE(scaled.converged);
    CHECK((scaled.point - lambda * base.point).max_abs() <= 1e-9);
  }
}

TEST_CASE("zero start") {
  const auto report = project_to_variety(StructureConstants(2), {1e-10, 50, false});
  CHECK(report.converged);
  CHECK(report.iterations == 0);
  CHECK(report.point.max_abs() == 0.0);
  CHECK_THROWS_AS(project_to_variety(StructureConstants(2), {1e-10, 50, true}), InputError);
  CHECK_THROWS_AS(project_to_variety(gen_truncated(2), {0.0, 50, true}), InputError);
}

TEST_CASE("a generic tensor usually projects; a run that fails reports it") {
  std::mt19937_64 rng(5);
  const auto start = oracle::random_tensor(2, rng);
  const auto report = project_to_variety(start, {1e-10, 3, true});
  CHECK(report.step_norms.size() == static_cast<std::size_t>(report.iterations));
  if (!report.converged) CHECK(report.final_residual > 1e-10);
}

TEST_CASE("embed zero-pads") {
  const auto e = embed(gen_truncated(2));
  REQUIRE(e.dim() == 3);
  int nonzeros = 0;
  for (double x : e.values()) nonzeros += x != 0.0;
  CHECK(nonzeros == 4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(e(i, j, 2) == 0.0);
      CHECK(e(i, 2, j) == 0.0);
      CHECK(e(2, i, j) == 0.0);
    }
  CHECK(associator_residual(e).max_abs == 0.0);
  CHECK(embed(StructureConstants(2)) == StructureConstants(3));
}

TEST_CASE("embedded residual is the original residual padded with zeros") {
  std::mt19937_64 rng(9);
  const auto a = oracle::random_tensor(2, rng);
  const auto ra = associator_residual(a);
  const auto re = associator_residual(embed(a));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int m = 0; m < 3; ++m) {
          const bool inner = i < 2 && j < 2 && k < 2 && m < 2;
          CHECK(re(i, j, k, m) == (inner ? ra(i, j, k, m) : 0.0));
        }
}

TEST_CASE("restrict") {
  CHECK(restrict_last(embed(gen_truncated(2))) == gen_truncated(2));
  CHECK(restrict_last(StructureConstants(2)) == StructureConstants(1));
  CHECK_THROWS_AS(restrict_last(gen_truncated(3)), PreconditionError);
  try {
    auto a = embed(gen_truncated(2));
    a(2, 2, 2) = 0.5;
    a(0, 2, 1) = 1e-3;
    restrict_last(a);
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("alpha_3,3^3") != std::string::npos);
  }
  CHECK_THROWS_AS(restrict_last(StructureConstants(1)), InputError);
}
