#include <cmath>
#include <random>

#include "doctest.h"
#include "commot/as_solver.hpp"
#include "commot/ba_solver.hpp"
#include "commot/sources.hpp"
#include "oracles.hpp"

using namespace commot;

TEST_SUITE("ba_solver") {

TEST_CASE("lambda = 0 gives independent rows and zero rate") {
  const auto problem = build_bifurcation_fixture();
  const auto res = ba_fixed_slope(problem, 0.0);
  CHECK(std::abs(res.rate) < 1e-15);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(res.w.w(i, j) == doctest::Approx(res.r[j]));
  double expected = 0.0;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 3; ++j) expected += problem.p[i] * res.r[j] * problem.d(i, j);
  CHECK(res.distortion == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("binary source at slope 2.1972") {
  const auto res = ba_fixed_slope(build_binary(0.5), 2.1972);
  CHECK(std::abs(res.distortion - 0.1) < 1e-4);
  CHECK(std::abs(res.rate - oracle::binary_rd(0.5, res.distortion)) < 1e-9);
  CHECK(std::abs(res.rate - 0.368064) < 1e-3);
}

TEST_CASE("Gaussian fixture at slope 0.5") {
  const auto res = ba_fixed_slope(build_gaussian(GridSpec{8.0, 0.5}, 2.0), 0.5);
  CHECK(std::abs(res.distortion - 1.0) < 1e-3);
}

TEST_CASE("slope search recovers the binary slope at D = 0.4") {
  const auto out = ba_search_slope(build_binary(0.5), 0.4);
  CHECK(out.converged);
  CHECK_FALSE(out.linear_segment);
  CHECK(std::abs(out.lambda - 0.4055) < 1e-3);
  CHECK(std::abs(out.solution.distortion - 0.4) <= 1e-6);
}

TEST_CASE("slope search recovers the Laplacian slope at D = 1") {
  const auto out = ba_search_slope(build_laplacian(GridSpec{14.0, 0.2}, 2.0), 1.0);
  CHECK(out.converged);
  CHECK(std::abs(out.lambda - 0.9931) < 1e-2);
}

TEST_CASE("slope search near the flat end returns a small slope") {
  const auto problem = build_binary(0.5);
  const auto out = ba_search_slope(problem, 0.5 - 1e-4);
  CHECK(out.converged);
  CHECK(out.lambda < 1e-2);
}

TEST_CASE("slope search rejects unreachable targets") {
  const auto problem = build_binary(0.5);
  CHECK_THROWS_AS(ba_search_slope(problem, 0.0), TargetUnreachable);
  CHECK_THROWS_AS(ba_search_slope(problem, 0.5), TargetUnreachable);
  CHECK_THROWS_AS(ba_search_slope(problem, 0.7), TargetUnreachable);
  // every row has a positive minimum, so small targets are out of reach
  const auto shifted = make_problem(Vector{{0.5, 0.5}}, Matrix{{0.2, 1.0}, {1.0, 0.2}});
  CHECK_THROWS_AS(ba_search_slope(shifted, 0.1), TargetUnreachable);
}

TEST_CASE("slope search flags a target on a linear segment") {
  const auto problem = build_bifurcation_fixture();
  for (double tol : {1e-6, 1e-9}) {
    BAOptions opts;
    opts.slope_search_tol = tol;
    const auto out = ba_search_slope(problem, 0.2, opts);
    CHECK(out.linear_segment);
    CHECK_FALSE(out.converged);
    CHECK(std::abs(out.lambda - 1.8010717757) < 1e-2);
  }
}

TEST_CASE("settled targets are not flagged") {
  BAOptions opts;
  opts.tol = 1e-13;
  opts.slope_search_tol = 1e-11;
  for (double D : {0.1, 0.4}) {
    const auto out = ba_search_slope(build_binary(0.5), D, opts);
    CHECK(out.converged);
    CHECK_FALSE(out.linear_segment);
  }
  const auto gauss = ba_search_slope(build_gaussian(GridSpec{8.0, 0.5}, 2.0), 1.0, opts);
  CHECK(gauss.converged);
  CHECK_FALSE(gauss.linear_segment);
}

TEST_CASE("invalid inputs") {
  const auto problem = build_binary(0.5);
  CHECK_THROWS_AS(ba_fixed_slope(problem, -1.0), DomainError);
  BAOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(ba_fixed_slope(problem, 1.0, bad), std::invalid_argument);
}

TEST_CASE("Lagrangian never increases along the iteration") {
  std::mt19937_64 rng(201);
  std::uniform_real_distribution<double> slope(0.1, 20.0);
  BAOptions opts;
  opts.record_objective = true;
  opts.tol = 1e-15;
  opts.max_iter = 300;
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = oracle::random_instance(rng);
    const auto res = ba_fixed_slope(inst.problem, slope(rng), opts);
    REQUIRE(res.objective_trace.size() == static_cast<std::size_t>(res.iterations));
    for (std::size_t k = 1; k < res.objective_trace.size(); ++k) {
      const double prev = res.objective_trace[k - 1];
      CHECK(res.objective_trace[k] <= prev + 1e-14 * std::max(1.0, std::abs(prev)));
    }
  }
}

TEST_CASE("achieved distortion is non-increasing in lambda") {
  std::mt19937_64 rng(203);
  BAOptions opts;
  opts.tol = 1e-14;
  opts.max_iter = 20000;
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = oracle::random_instance(rng);
    double prev = 1e300;
    for (double lambda = 0.0; lambda <= 20.0; lambda += 2.5) {
      const auto res = ba_fixed_slope(inst.problem, lambda, opts);
      CHECK(res.distortion <= prev + 1e-9);
      prev = res.distortion;
    }
  }
}

}
