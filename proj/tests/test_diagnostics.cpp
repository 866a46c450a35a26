#include <cmath>
#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "commot/as_solver.hpp"
#include "commot/diagnostics.hpp"
#include "commot/sources.hpp"
#include "oracles.hpp"

using namespace commot;

namespace {

RDCurve sample(auto rd, double lo, double hi, int points) {
  RDCurve curve;
  for (int k = 0; k < points; ++k) {
    const double D = lo + (hi - lo) * k / (points - 1);
    curve.points.push_back({D, rd(D), 0.0});
  }
  return curve;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("psi residual vanishes right after the psi update") {
  const auto problem = build_gaussian(GridSpec{8.0, 0.5}, 2.0);
  SolverState state = SolverState::initial(problem);
  state.psi = sinkhorn_update_psi(state, problem.p);
  CHECK(kkt_residuals(state, problem, 1.0).r_psi < 1e-13);
}

TEST_CASE("lambda residual is exactly zero at lambda = 0") {
  const auto problem = build_bifurcation_fixture();
  SolverState state = SolverState::initial(problem);
  state.lambda = 0.0;
  state.refresh_kernel(problem.d);
  CHECK(kkt_residuals(state, problem, 0.01).r_lambda == 0.0);
}

TEST_CASE("residuals are non-negative and match their definitions") {
  std::mt19937_64 rng(301);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = oracle::random_instance(rng);
    const auto& problem = inst.problem;
    SolverState state = SolverState::initial(problem);
    for (Index i = 0; i < state.phi.size(); ++i) state.phi[i] = unit(rng);
    for (Index j = 0; j < state.psi.size(); ++j) state.psi[j] = unit(rng);
    state.r *= 1.1;
    state.lambda = 2.0;
    state.refresh_kernel(problem.d);
    const auto res = kkt_residuals(state, problem, inst.distortion);

    const ConditionalLaw w = state.transition_law();
    double r_phi = 0.0;
    for (Index i = 0; i < w.w.rows(); ++i) r_phi += std::abs(w.w.row(i).sum() - 1.0);
    const Vector cols = oracle::column_sums(w.w, problem.p);
    double r_psi = 0.0;
    for (Index j = 0; j < cols.size(); ++j) r_psi += std::abs(cols[j] / state.r[j] - 1.0);
    const double r_lambda =
        2.0 * std::abs(expected_distortion(w, problem.p, problem.d) - inst.distortion);
    CHECK(res.r_phi == doctest::Approx(r_phi).epsilon(1e-10));
    CHECK(res.r_psi == doctest::Approx(r_psi).epsilon(1e-10));
    CHECK(res.r_lambda == doctest::Approx(r_lambda).epsilon(1e-10));
    CHECK(res.r_eta == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(res.max() >= res.r_eta);
  }
}

TEST_CASE("Gaussian fixture at D = 0.1 converges below 1e-7") {
  const auto problem = build_gaussian(GridSpec{8.0, 0.5}, 2.0);
  ASOptions opts;
  opts.max_iter = 10000;
  opts.residual_tol = 1e-7;
  const auto sol = solve_as(problem, 0.1, opts);
  CHECK(sol.converged);
  CHECK(sol.residuals.r_psi <= 1e-7);
  CHECK(sol.residuals.r_phi <= 1e-7);
  CHECK(sol.residuals.r_lambda <= 1e-7);
  CHECK(sol.residuals.r_eta <= 1e-7);
}

TEST_CASE("residuals do not depend on how the alphabets are labelled") {
  std::mt19937_64 rng(303);
  ASOptions opts;
  opts.max_iter = 40;
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = oracle::random_instance(rng);
    const auto& problem = inst.problem;
    const Index m = problem.p.size();
    const Index n = problem.d.cols();
    std::vector<Index> rows(m), cols(n);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    std::shuffle(cols.begin(), cols.end(), rng);

    SolverState state = SolverState::initial(problem);
    for (int it = 0; it < 3; ++it) as_iteration(state, problem, inst.distortion, opts);

    RDProblem permuted = problem;
    SolverState moved = state;
    for (Index i = 0; i < m; ++i) {
      permuted.p[i] = problem.p[rows[i]];
      moved.phi[i] = state.phi[rows[i]];
      for (Index j = 0; j < n; ++j) permuted.d(i, j) = problem.d(rows[i], cols[j]);
    }
    for (Index j = 0; j < n; ++j) {
      moved.psi[j] = state.psi[cols[j]];
      moved.r[j] = state.r[cols[j]];
    }
    moved.refresh_kernel(permuted.d);

    const auto a = kkt_residuals(state, problem, inst.distortion);
    const auto b = kkt_residuals(moved, permuted, inst.distortion);
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-13 + 1e-9 * std::abs(x); };
    CHECK(close(a.r_psi, b.r_psi));
    CHECK(close(a.r_phi, b.r_phi));
    CHECK(close(a.r_lambda, b.r_lambda));
    CHECK(close(a.r_eta, b.r_eta));
  }
}

TEST_CASE("an affine curve is one segment") {
  const auto curve = sample([](double D) { return 2.0 - 3.0 * D; }, 0.0, 0.5, 11);
  const auto segs = detect_linear_segment(curve);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].d_start == 0.0);
  CHECK(segs[0].d_end == 0.5);
  CHECK(segs[0].slope == doctest::Approx(-3.0));
}

TEST_CASE("a strictly convex curve has no segment") {
  const auto curve = sample([](double D) { return analytic_rd_gaussian(2.0, D); }, 0.1, 3.9, 25);
  CHECK(detect_linear_segment(curve).empty());
  CHECK(detect_linear_segment(RDCurve{{{0.1, 1.0, 0.0}, {0.2, 0.8, 0.0}}, ""}).empty());
}

TEST_CASE("a flat run between convex pieces is found with its ends") {
  // convex, then affine on [0.3, 0.6], then convex, continuous in value and slope
  auto rd = [](double D) {
    if (D < 0.3) return 1.0 - D + 5.0 * (0.3 - D) * (0.3 - D);
    if (D <= 0.6) return 1.0 - D;
    return 1.0 - D + 5.0 * (D - 0.6) * (D - 0.6);
  };
  const auto segs = detect_linear_segment(sample(rd, 0.0, 1.0, 21));
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].d_start == doctest::Approx(0.3));
  CHECK(segs[0].d_end == doctest::Approx(0.6));
  CHECK(segs[0].slope == doctest::Approx(-1.0));
}

TEST_CASE("bifurcation fixture: the segment starts where the two-letter branch meets its slope") {
  const auto problem = build_bifurcation_fixture();
  ASOptions opts;
  opts.max_iter = 20000;
  opts.residual_tol = 1e-11;
  const double lambda_star = solve_as(problem, 0.2, opts).lambda;
  // Below the segment only the first two letters are used, which is the
  // binary source (0.4, 0.6) under Hamming distortion, with slope ln((1-D)/D).
  const double d1 = 1.0 / (1.0 + std::exp(lambda_star));
  CHECK(std::abs(d1 - 0.14) < 0.005);

  double onset = -1.0;
  for (int k = 0; k <= 40; ++k) {
    const double D = 0.12 + 0.001 * k;
    if (std::abs(solve_as(problem, D, opts).lambda - lambda_star) < 1e-6) {
      onset = D;
      break;
    }
  }
  CHECK(onset > d1 - 1e-9);
  CHECK(onset < d1 + 0.0015);
}

}
