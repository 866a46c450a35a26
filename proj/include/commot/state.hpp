#pragma once

#include "commot/problem.hpp"

namespace commot {

/// Iterate of the alternating Sinkhorn scheme.
///
/// The row dual alpha_i never appears explicitly. It is absorbed into the
/// scaling phi_i = exp(-alpha_i / p_i - 1/2), so alpha_i = -p_i (ln phi_i + 1/2)
/// when needed. Likewise psi_j = exp(-beta_j - 1/2).
struct SolverState {
  Vector phi;
  Vector psi;
  Matrix K;  // exp(-lambda d), kept in step with lambda
  Vector r;
  double lambda = 1.0;
  double eta = 0.0;
  Vector beta;

  /// phi = 1, psi = 1, lambda = 1, r uniform.
  static SolverState initial(const RDProblem& problem);

  void refresh_kernel(const Matrix& d);
  void refresh_beta();

  /// w_ij = phi_i K_ij psi_j r_j.
  ConditionalLaw transition_law() const;
};

/// exp(-lambda d) elementwise.
Matrix kernel(const Matrix& d, double lambda);

}  // namespace commot
