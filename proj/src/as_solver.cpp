#include "commot/as_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "commot/diagnostics.hpp"
#include "commot/roots.hpp"

namespace commot {

namespace {

// G + D and G' at a trial lambda; a_i = p_i phi_i, b_j = psi_j r_j.
std::pair<double, double> g_and_slope(double lambda, const Vector& a, const Vector& b,
                                      const Matrix& d) {
  double g = 0.0;
  double dg = 0.0;
  for (Index j = 0; j < d.cols(); ++j) {
    if (b[j] == 0.0) continue;
    double col = 0.0;
    double col_slope = 0.0;
    for (Index i = 0; i < d.rows(); ++i) {
      const double t = a[i] * d(i, j) * std::exp(-lambda * d(i, j));
      col += t;
      col_slope += t * d(i, j);
    }
    g += col * b[j];
    dg -= col_slope * b[j];
  }
  return {g, dg};
}

// Largest beta_j over columns that carry mass; columns with s_j = 0 get r_j = 0
// whatever eta is, so they do not constrain the domain of F.
double active_beta_max(const Vector& column_mass, const Vector& beta) {
  double best = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < beta.size(); ++j)
    if (column_mass[j] > 0.0) best = std::max(best, beta[j]);
  return best;
}

}  // namespace

void ASOptions::validate() const {
  if (max_iter <= 0 || !(residual_tol > 0.0) || !(newton_tol > 0.0) || newton_max_steps <= 0 ||
      !(lambda_cap > 0.0))
    throw std::invalid_argument("ASOptions: all options must be positive");
}

Vector sinkhorn_update_psi(const SolverState& state, const Vector& p) {
  const Matrix& K = state.K;
  Vector psi(K.cols());
  for (Index j = 0; j < K.cols(); ++j) {
    double s = 0.0;
    for (Index i = 0; i < K.rows(); ++i) s += K(i, j) * state.phi[i] * p[i];
    if (!(s > 0.0) || !std::isfinite(s)) {
      std::ostringstream os;
      os << "psi update: column " << j << " sum is " << s << " (kernel underflow at lambda "
         << state.lambda << ")";
      throw NumericalError(os.str());
    }
    psi[j] = 1.0 / s;
  }
  return psi;
}

Vector sinkhorn_update_phi(const SolverState& state) {
  const Matrix& K = state.K;
  Vector acc = Vector::Zero(K.rows());
  for (Index j = 0; j < K.cols(); ++j) {
    const double col = state.psi[j] * state.r[j];
    if (col == 0.0) continue;
    for (Index i = 0; i < K.rows(); ++i) acc[i] += K(i, j) * col;
  }
  Vector phi(K.rows());
  for (Index i = 0; i < K.rows(); ++i) {
    if (!(acc[i] > 0.0) || !std::isfinite(acc[i])) {
      std::ostringstream os;
      os << "phi update: row " << i << " sum is " << acc[i];
      throw NumericalError(os.str());
    }
    phi[i] = 1.0 / acc[i];
  }
  return phi;
}

double g_lambda(double lambda, const SolverState& state, const RDProblem& problem, double D) {
  const Vector a = problem.p.cwiseProduct(state.phi);
  const Vector b = state.psi.cwiseProduct(state.r);
  return g_and_slope(lambda, a, b, problem.d).first - D;
}

double g_lambda_derivative(double lambda, const SolverState& state, const RDProblem& problem) {
  const Vector a = problem.p.cwiseProduct(state.phi);
  const Vector b = state.psi.cwiseProduct(state.r);
  return g_and_slope(lambda, a, b, problem.d).second;
}

LambdaUpdate newton_lambda(const SolverState& state, const RDProblem& problem, double D,
                           const ASOptions& opts) {
  const Vector a = problem.p.cwiseProduct(state.phi);
  const Vector b = state.psi.cwiseProduct(state.r);
  // The bracket search and the root finder both start at the warm start.
  double last_x = std::numeric_limits<double>::quiet_NaN();
  std::pair<double, double> last{};
  auto eval = [&](double lambda) {
    if (lambda != last_x) {
      auto [g, dg] = g_and_slope(lambda, a, b, problem.d);
      last_x = lambda;
      last = {g - D, dg};
    }
    return last;
  };

  LambdaUpdate out;
  if (a.dot(problem.d * b) - D <= 0.0) return out;  // G(0) <= 0: constraint slack

  // G(0) > 0; the warm start supplies the other end of the bracket when it
  // already overshoots the root.
  double lo = 0.0;
  double hi = std::min(std::max(state.lambda, 1e-3), opts.lambda_cap);
  while (eval(hi).first > 0.0) {
    if (hi >= opts.lambda_cap) {
      out.lambda = opts.lambda_cap;
      out.capped = true;
      return out;
    }
    lo = hi;
    hi = std::min(2.0 * hi, opts.lambda_cap);
  }

  const RootResult root =
      find_decreasing_root(eval, lo, hi, std::clamp(state.lambda, lo, hi), opts.newton_tol, opts.newton_max_steps);
  if (!root.converged) {
    std::ostringstream os;
    os << "newton_lambda: no convergence after " << root.steps << " steps (lambda " << root.x
       << ")";
    throw NumericalError(os.str());
  }
  out.lambda = root.x;
  out.steps = root.steps;
  return out;
}

double f_eta(double eta, const Vector& column_mass, const Vector& beta) {
  if (!(eta > active_beta_max(column_mass, beta)))
    throw DomainError("f_eta: eta must exceed max_j beta_j");
  double total = 0.0;
  for (Index j = 0; j < beta.size(); ++j)
    if (column_mass[j] > 0.0) total += column_mass[j] / (eta - beta[j]);
  return total - 1.0;
}

double newton_eta(const Vector& column_mass, const Vector& beta, const ASOptions& opts) {
  const double total_mass = column_mass.sum();
  if (!(total_mass > 0.0)) throw DomainError("newton_eta: column mass is identically zero");
  const double beta_max = active_beta_max(column_mass, beta);

  auto eval = [&](double eta) {
    double f = 0.0;
    double df = 0.0;
    for (Index j = 0; j < beta.size(); ++j) {
      const double s = column_mass[j];
      if (s <= 0.0) continue;
      const double gap = eta - beta[j];
      f += s / gap;
      df -= s / (gap * gap);
    }
    return std::pair{f - 1.0, df};
  };

  // F(lower) > 0 near the pole and F(upper) <= 0 because every term is at most
  // s_j / (eta - beta_max).
  const double lower = beta_max + 1e-12 * std::max(1.0, std::abs(beta_max));
  const double upper = beta_max + total_mass;
  const RootResult root =
      find_decreasing_root(eval, lower, upper, upper, opts.newton_tol, opts.newton_max_steps);
  if (!root.converged) throw NumericalError("newton_eta: no convergence");
  return root.x;
}

Vector update_r(const Vector& column_mass, const Vector& beta, double eta) {
  Vector r(beta.size());
  for (Index j = 0; j < beta.size(); ++j)
    r[j] = column_mass[j] > 0.0 ? column_mass[j] / (eta - beta[j]) : 0.0;
  return r;
}

Vector column_mass(const SolverState& state, const Vector& p) {
  const Matrix& K = state.K;
  Vector s(K.cols());
  for (Index j = 0; j < K.cols(); ++j) {
    double acc = 0.0;
    for (Index i = 0; i < K.rows(); ++i) acc += state.phi[i] * p[i] * K(i, j);
    s[j] = acc * state.psi[j] * state.r[j];
  }
  return s;
}

IterationInfo as_iteration(SolverState& state, const RDProblem& problem, double D,
                           const ASOptions& opts) {
  state.psi = sinkhorn_update_psi(state, problem.p);
  state.phi = sinkhorn_update_phi(state);

  const LambdaUpdate lu = newton_lambda(state, problem, D, opts);
  state.lambda = lu.lambda;
  state.refresh_kernel(problem.d);

  state.refresh_beta();
  const Vector s = column_mass(state, problem.p);
  state.eta = newton_eta(s, state.beta, opts);
  state.r = update_r(s, state.beta, state.eta);
  return {lu.steps, lu.capped};
}

double as_rate(const SolverState& state, const RDProblem& problem) {
  const Matrix& K = state.K;
  double total = 0.0;
  for (Index i = 0; i < K.rows(); ++i) {
    if (problem.p[i] == 0.0) continue;
    const double log_phi = std::log(state.phi[i]);
    for (Index j = 0; j < K.cols(); ++j) {
      const double mass = state.phi[i] * problem.p[i] * K(i, j) * state.psi[j] * state.r[j];
      if (mass <= 0.0) continue;
      total += mass * (log_phi - state.lambda * problem.d(i, j) + std::log(state.psi[j]));
    }
  }
  return total;
}

RDSolution solve_as(const RDProblem& problem, double D, const ASOptions& opts) {
  opts.validate();
  if (auto violations = validate_problem(problem); !violations.empty())
    throw InvalidProblem(std::move(violations));
  if (!(D > 0.0) || !std::isfinite(D)) throw DomainError("solve_as: D must be positive");

  RDSolution sol;
  if (D >= zero_rate_distortion(problem)) {
    // A single reproduction letter meets the budget: rate 0, lambda 0.
    SolverState state = SolverState::initial(problem);
    state.lambda = 0.0;
    state.refresh_kernel(problem.d);
    state.r.setZero();
    state.r[zero_rate_column(problem)] = 1.0;
    state.refresh_beta();
    state.eta = 1.0 + state.beta[0];
    sol.w = state.transition_law();
    sol.r = state.r;
    sol.distortion = expected_distortion(sol.w, problem.p, problem.d);
    sol.rate = 0.0;
    sol.lambda = 0.0;
    sol.eta = state.eta;
    sol.converged = true;
    sol.constraint_inactive = true;
    sol.residuals = kkt_residuals(state, problem, D);
    if (opts.record_trace) sol.trace.push_back(sol.residuals);
    return sol;
  }

  SolverState state = SolverState::initial(problem);
  for (int it = 1; it <= opts.max_iter; ++it) {
    const IterationInfo info = as_iteration(state, problem, D, opts);
    sol.lambda_capped = sol.lambda_capped || info.lambda_capped;
    ResidualRecord res = kkt_residuals(state, problem, D);
    res.iteration = it;
    if (opts.record_trace) sol.trace.push_back(res);
    sol.residuals = res;
    sol.iterations = it;
    if (res.max() < opts.residual_tol) {
      sol.converged = true;
      break;
    }
  }

  sol.rate = as_rate(state, problem);
  sol.w = state.transition_law();
  sol.r = state.r;
  sol.distortion = expected_distortion(sol.w, problem.p, problem.d);
  sol.lambda = state.lambda;
  sol.eta = state.eta;
  return sol;
}

}  // namespace commot
