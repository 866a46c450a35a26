#pragma once

#include <optional>
#include <vector>

#include "commot/errors.hpp"
#include "commot/types.hpp"

namespace commot {

/// Source distribution p (length M) and distortion matrix d (M x N).
/// Labels are grid coordinates for discretized sources.
struct RDProblem {
  Vector p;
  Matrix d;
  std::optional<Vector> x_labels;
  std::optional<Vector> y_labels;

  Index source_size() const { return p.size(); }
  Index output_size() const { return d.cols(); }
};

inline constexpr double kProbabilityTolerance = 1e-12;

/// Every violated invariant; empty when the problem is well formed.
std::vector<Violation> validate_problem(const RDProblem& problem);

/// Validates and returns the problem, throwing InvalidProblem on failure. With
/// renormalize set, a p that is nonnegative but off by more than the
/// tolerance is rescaled instead of rejected.
RDProblem make_problem(Vector p, Matrix d, bool renormalize = false);

/// Transition law W(y_j | x_i); rows are conditional distributions.
struct ConditionalLaw {
  Matrix w;

  double max_row_deviation() const;
  static ConditionalLaw uniform(Index m, Index n);
  static ConditionalLaw identity(Index n);
};

/// sum_ij p_i w_ij [ln w_ij - ln r_j] in nats, skipping zero-mass terms.
/// Equals I(X;Y) when r is the induced marginal. Throws DomainError if some
/// r_j is zero while column j carries mass.
double commot_objective(const ConditionalLaw& law, const Vector& p, const Vector& r);

double expected_distortion(const ConditionalLaw& law, const Vector& p, const Matrix& d);

Vector induced_marginal(const ConditionalLaw& law, const Vector& p);

/// min_j sum_i p_i d_ij: the smallest distortion reachable at zero rate.
double zero_rate_distortion(const RDProblem& problem);
Index zero_rate_column(const RDProblem& problem);

}  // namespace commot
