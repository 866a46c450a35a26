#pragma once

#include <vector>

#include "commot/problem.hpp"

namespace commot {

struct BAOptions {
  int max_iter = 1000;
  double tol = 1e-10;  // on successive rate change
  double slope_search_tol = 1e-6;  // on |D_achieved - D_target|
  int slope_search_max = 100;
  bool record_objective = false;

  void validate() const;
};

struct BAResult {
  double rate = 0.0;  // I(X;Y) in nats
  double distortion = 0.0;
  double lambda = 0.0;
  ConditionalLaw w;
  Vector r;
  int iterations = 0;
  bool converged = false;
  // |D_k - D_{k-1}| at the last iteration
  double distortion_step = 0.0;
  // R + lambda D after each w-step; non-increasing.
  std::vector<double> objective_trace;
};

/// Classical Blahut-Arimoto recursion at fixed slope -lambda, started from a
/// uniform output marginal.
BAResult ba_fixed_slope(const RDProblem& problem, double lambda, const BAOptions& opts = {});

/// Per-iteration distortion drift, relative to the zero-rate distortion, above
/// which a run stopped by max_iter is considered unsettled.
inline constexpr double kUnsettledDrift = 1e-6;

struct SlopeSearchResult {
  BAResult solution;
  double lambda = 0.0;
  int search_steps = 0;  // fixed-slope runs, including bracket growth
  bool converged = false;
  // The target sits on an affine piece of the curve that no slope resolves.
  // Seen either as the achieved distortion jumping across the target at a
  // single slope, or as the accepted run still moving its distortion by more
  // than kUnsettledDrift * d_max per iteration when max_iter stops it, so that
  // the hit is an artifact of the iteration budget.
  bool linear_segment = false;
};

/// Bisection on lambda until the achieved distortion is within
/// slope_search_tol of the target. Throws TargetUnreachable when the target is
/// outside (0, zero_rate_distortion) or below the smallest reachable distortion.
SlopeSearchResult ba_search_slope(const RDProblem& problem, double target,
                                  const BAOptions& opts = {});

}  // namespace commot
