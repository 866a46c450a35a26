#pragma once

#include <vector>

#include "commot/problem.hpp"

namespace commot {

/// Absolute KKT residuals of one outer iteration.
struct ResidualRecord {
  int iteration = 0;
  double r_psi = 0.0;
  double r_phi = 0.0;
  double r_lambda = 0.0;
  double r_eta = 0.0;

  double max() const;
};

struct RDSolution {
  double rate = 0.0;        // nats
  double distortion = 0.0;  // achieved sum_ij p_i w_ij d_ij
  ConditionalLaw w;
  Vector r;
  double lambda = 0.0;  // magnitude of the RD-curve slope at the target
  double eta = 0.0;
  int iterations = 0;
  bool converged = false;
  bool lambda_capped = false;
  // D was at or above the zero-rate distortion; no iterations were needed.
  bool constraint_inactive = false;
  ResidualRecord residuals;
  std::vector<ResidualRecord> trace;
};

}  // namespace commot
