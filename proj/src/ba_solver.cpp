#include "commot/ba_solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "commot/state.hpp"

namespace commot {

void BAOptions::validate() const {
  if (max_iter <= 0 || !(tol > 0.0) || !(slope_search_tol > 0.0) || slope_search_max <= 0)
    throw std::invalid_argument("BAOptions: all options must be positive");
}

BAResult ba_fixed_slope(const RDProblem& problem, double lambda, const BAOptions& opts) {
  opts.validate();
  if (auto violations = validate_problem(problem); !violations.empty())
    throw InvalidProblem(std::move(violations));
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw DomainError("ba_fixed_slope: lambda must be nonnegative");

  const Index m = problem.source_size();
  const Index n = problem.output_size();
  const Vector& p = problem.p;
  const Matrix K = kernel(problem.d, lambda);

  BAResult out;
  out.lambda = lambda;
  out.w.w.resize(m, n);
  Vector r = Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector z(m);
  Vector r_next(n);
  double previous = std::numeric_limits<double>::infinity();
  double previous_distortion = std::numeric_limits<double>::quiet_NaN();

  for (int it = 1; it <= opts.max_iter; ++it) {
    // w-step: w_ij = r_j K_ij / Z_i
    z.setZero();
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < m; ++i) z[i] += r[j] * K(i, j);
    double lagrangian = 0.0;
    for (Index i = 0; i < m; ++i) {
      if (!(z[i] > 0.0)) {
        std::ostringstream os;
        os << "ba_fixed_slope: row " << i << " normalizer underflows at lambda " << lambda;
        throw NumericalError(os.str());
      }
      if (p[i] > 0.0) lagrangian -= p[i] * std::log(z[i]);
    }
    double distortion = 0.0;
    for (Index j = 0; j < n; ++j) {
      double col = 0.0;
      for (Index i = 0; i < m; ++i) {
        const double wij = r[j] * K(i, j) / z[i];
        out.w.w(i, j) = wij;
        col += p[i] * wij;
        distortion += p[i] * wij * problem.d(i, j);
      }
      r_next[j] = col;
    }
    if (opts.record_objective) out.objective_trace.push_back(lagrangian);

    // I(X;Y) = (R + lambda D) - lambda D - KL(r_next || r)
    double kl = 0.0;
    for (Index j = 0; j < n; ++j)
      if (r_next[j] > 0.0) kl += r_next[j] * std::log(r_next[j] / r[j]);
    const double rate = lagrangian - lambda * distortion - kl;

    r = r_next;
    out.iterations = it;
    out.distortion_step = std::abs(distortion - previous_distortion);
    previous_distortion = distortion;
    if (std::abs(rate - previous) < opts.tol) {
      out.converged = true;
      break;
    }
    previous = rate;
  }

  out.r = r;
  out.rate = commot_objective(out.w, p, r);
  out.distortion = expected_distortion(out.w, p, problem.d);
  return out;
}

SlopeSearchResult ba_search_slope(const RDProblem& problem, double target,
                                  const BAOptions& opts) {
  opts.validate();
  if (auto violations = validate_problem(problem); !violations.empty())
    throw InvalidProblem(std::move(violations));
  const double d_max = zero_rate_distortion(problem);
  if (!(target > 0.0) || !(target < d_max)) {
    std::ostringstream os;
    os << "ba_search_slope: target " << target << " outside (0, " << d_max << ")";
    throw TargetUnreachable(os.str());
  }

  SlopeSearchResult out;
  auto run = [&](double lambda) {
    ++out.search_steps;
    return ba_fixed_slope(problem, lambda, opts);
  };
  auto accept = [&](BAResult&& res) {
    out.lambda = res.lambda;
    out.solution = std::move(res);
  };

  // D(0) is the uniform-mixture distortion, which is at least d_max > target.
  double lo = 0.0;
  double hi = 1.0;
  BAResult at_hi = run(hi);
  while (at_hi.distortion > target) {
    if (out.search_steps >= opts.slope_search_max || hi > 1e12)
      throw TargetUnreachable("ba_search_slope: target below the smallest reachable distortion");
    lo = hi;
    hi *= 2.0;
    at_hi = run(hi);
  }
  // Slow but smooth tails move D by ~1e-8 d_max per iteration after 1000
  // iterations; on an affine piece the drift is orders of magnitude larger.
  auto unsettled = [&](const BAResult& res) {
    return !res.converged && res.distortion_step > kUnsettledDrift * d_max;
  };

  double best_gap = std::abs(at_hi.distortion - target);
  accept(std::move(at_hi));
  if (best_gap <= opts.slope_search_tol) {
    out.converged = !unsettled(out.solution);
    out.linear_segment = !out.converged;
    return out;
  }

  while (out.search_steps < opts.slope_search_max) {
    if (hi - lo <= 1e-13 * hi) {
      out.linear_segment = true;
      break;
    }
    const double mid = 0.5 * (lo + hi);
    BAResult res = run(mid);
    const double gap = std::abs(res.distortion - target);
    const bool above = res.distortion > target;
    if (gap < best_gap) {
      best_gap = gap;
      accept(std::move(res));
    }
    if (gap <= opts.slope_search_tol) {
      out.converged = !unsettled(out.solution);
      out.linear_segment = !out.converged;
      break;
    }
    (above ? lo : hi) = mid;
  }
  return out;
}

}  // namespace commot
