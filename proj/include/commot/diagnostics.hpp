#pragma once

#include <string>
#include <vector>

#include "commot/solution.hpp"
#include "commot/state.hpp"

namespace commot {

/// r_psi = sum_j |psi_j sum_i K_ij phi_i p_i - 1|
/// r_phi = sum_i |phi_i sum_j K_ij psi_j r_j - 1|
/// r_lambda = |lambda (sum_ij phi_i psi_j p_i r_j d_ij K_ij - D)|
/// r_eta = |sum_j r_j - 1|
ResidualRecord kkt_residuals(const SolverState& state, const RDProblem& problem, double D);

struct CurvePoint {
  double distortion = 0.0;
  double rate = 0.0;
  double lambda = 0.0;
};

struct RDCurve {
  std::vector<CurvePoint> points;  // sorted by distortion
  std::string provenance;
};

struct LinearSegment {
  double d_start = 0.0;
  double d_end = 0.0;
  double slope = 0.0;  // least-squares dR/dD over the run; negative on a decreasing curve
};

inline constexpr double kSegmentTolerance = 1e-4;

/// Maximal runs of at least three consecutive samples whose second divided
/// differences all have magnitude <= tol.
std::vector<LinearSegment> detect_linear_segment(const RDCurve& curve,
                                                 double tol = kSegmentTolerance);

}  // namespace commot
