#pragma once

#include "commot/solution.hpp"
#include "commot/state.hpp"

namespace commot {

struct ASOptions {
  int max_iter = 1000;
  double residual_tol = 1e-9;  // on the largest of the four KKT residuals
  double newton_tol = 1e-12;
  int newton_max_steps = 50;
  double lambda_cap = 1e4;
  bool record_trace = false;

  void validate() const;
};

// Sinkhorn scalings. Both return the new vector and leave the state untouched.

/// psi_j = 1 / sum_i K_ij phi_i p_i.
Vector sinkhorn_update_psi(const SolverState& state, const Vector& p);
/// phi_i = 1 / sum_j K_ij psi_j r_j.
Vector sinkhorn_update_phi(const SolverState& state);

/// G(lambda) = sum_ij d_ij p_i phi_i exp(-lambda d_ij) psi_j r_j - D, with the
/// kernel evaluated at the trial lambda rather than taken from state.K.
double g_lambda(double lambda, const SolverState& state, const RDProblem& problem, double D);
double g_lambda_derivative(double lambda, const SolverState& state, const RDProblem& problem);

struct LambdaUpdate {
  double lambda = 0.0;
  int steps = 0;
  bool capped = false;
};

/// Root of G in [0, lambda_cap], warm-started from state.lambda. Returns 0 when
/// G(0) <= 0, i.e. the distortion constraint is slack.
LambdaUpdate newton_lambda(const SolverState& state, const RDProblem& problem, double D,
                           const ASOptions& opts);

/// F(eta) = sum_j s_j / (eta - beta_j) - 1. Defined for eta > max_j beta_j.
double f_eta(double eta, const Vector& column_mass, const Vector& beta);

/// Unique root of F on (max_j beta_j, +inf).
double newton_eta(const Vector& column_mass, const Vector& beta, const ASOptions& opts);

/// r_j = s_j / (eta - beta_j).
Vector update_r(const Vector& column_mass, const Vector& beta, double eta);

/// s_j = sum_i phi_i K_ij psi_j r_j p_i.
Vector column_mass(const SolverState& state, const Vector& p);

struct IterationInfo {
  int lambda_steps = 0;
  bool lambda_capped = false;
};

/// One outer iteration, in order: psi, phi, lambda (and K), eta, r.
IterationInfo as_iteration(SolverState& state, const RDProblem& problem, double D,
                           const ASOptions& opts);

/// sum_ij (phi_i p_i K_ij psi_j r_j) ln(phi_i K_ij psi_j), zero-mass terms skipped.
double as_rate(const SolverState& state, const RDProblem& problem);

/// R(D) for a prescribed distortion threshold via alternating Sinkhorn.
/// Non-convergence within max_iter is reported through `converged`.
RDSolution solve_as(const RDProblem& problem, double D, const ASOptions& opts = {});

}  // namespace commot
