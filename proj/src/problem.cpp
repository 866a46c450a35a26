#include "commot/problem.hpp"

#include <cmath>
#include <limits>
#include <sstream>


namespace commot {

namespace {

std::string describe_invalid(const std::vector<Violation>& violations) {
  std::ostringstream os;
  os << "invalid problem:";
  for (const auto& v : violations) os << ' ' << v.message << ';';
  return os.str();
}

}  // namespace

InvalidProblem::InvalidProblem(std::vector<Violation> violations)
    : std::invalid_argument(describe_invalid(violations)), violations_(std::move(violations)) {}

std::vector<Violation> validate_problem(const RDProblem& problem) {
  std::vector<Violation> out;
  const Index m = problem.p.size();
  if (m < 1) out.push_back({"source alphabet is empty"});
  if (problem.d.cols() < 1) out.push_back({"reproduction alphabet is empty"});
  if (problem.d.rows() != m) {
    std::ostringstream os;
    os << "distortion matrix has " << problem.d.rows() << " rows but p has length " << m;
    out.push_back({os.str()});
  }

  double total = 0.0;
  for (Index i = 0; i < m; ++i) {
    const double pi = problem.p[i];
    if (!std::isfinite(pi) || pi < 0.0) {
      std::ostringstream os;
      os << "negative or non-finite probability " << pi << " at (" << i << ")";
      out.push_back({os.str(), static_cast<long>(i)});
    } else {
      total += pi;
    }
  }
  if (m >= 1 && std::abs(total - 1.0) > kProbabilityTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "p sums to " << total;
    out.push_back({os.str()});
  }

  for (Index i = 0; i < problem.d.rows(); ++i) {
    for (Index j = 0; j < problem.d.cols(); ++j) {
      const double dij = problem.d(i, j);
      if (!std::isfinite(dij)) {
        std::ostringstream os;
        os << "non-finite distortion at (" << i << "," << j << ")";
        out.push_back({os.str(), static_cast<long>(i), static_cast<long>(j)});
      } else if (dij < 0.0) {
        std::ostringstream os;
        os << "negative distortion at (" << i << "," << j << ")";
        out.push_back({os.str(), static_cast<long>(i), static_cast<long>(j)});
      }
    }
  }

  if (problem.x_labels && problem.x_labels->size() != m)
    out.push_back({"x_labels length does not match p"});
  if (problem.y_labels && problem.y_labels->size() != problem.d.cols())
    out.push_back({"y_labels length does not match the distortion matrix"});
  return out;
}

RDProblem make_problem(Vector p, Matrix d, bool renormalize) {
  RDProblem problem{std::move(p), std::move(d), std::nullopt, std::nullopt};
  if (renormalize && problem.p.size() > 0 && (problem.p.array() >= 0.0).all() &&
      problem.p.allFinite()) {
    const double total = problem.p.sum();
    if (total > 0.0) problem.p /= total;
  }
  auto violations = validate_problem(problem);
  if (!violations.empty()) throw InvalidProblem(std::move(violations));
  return problem;
}

double ConditionalLaw::max_row_deviation() const {
  double worst = 0.0;
  for (Index i = 0; i < w.rows(); ++i) worst = std::max(worst, std::abs(w.row(i).sum() - 1.0));
  return worst;
}

ConditionalLaw ConditionalLaw::uniform(Index m, Index n) {
  return {Matrix::Constant(m, n, 1.0 / static_cast<double>(n))};
}

ConditionalLaw ConditionalLaw::identity(Index n) { return {Matrix::Identity(n, n)}; }

double commot_objective(const ConditionalLaw& law, const Vector& p, const Vector& r) {
  const Matrix& w = law.w;
  if (w.rows() != p.size() || w.cols() != r.size())
    throw DomainError("commot_objective: dimension mismatch");
  double total = 0.0;
  for (Index i = 0; i < w.rows(); ++i) {
    for (Index j = 0; j < w.cols(); ++j) {
      const double mass = w(i, j) * p[i];
      if (mass <= 0.0) continue;
      if (!(r[j] > 0.0))
        throw DomainError("commot_objective: r_j vanishes on a column that carries mass");
      total += mass * (std::log(w(i, j)) - std::log(r[j]));
    }
  }
  return total;
}

double expected_distortion(const ConditionalLaw& law, const Vector& p, const Matrix& d) {
  double total = 0.0;
  for (Index i = 0; i < law.w.rows(); ++i) {
    double row = 0.0;
    for (Index j = 0; j < law.w.cols(); ++j) row += law.w(i, j) * d(i, j);
    total += p[i] * row;
  }
  return total;
}

Vector induced_marginal(const ConditionalLaw& law, const Vector& p) {
  Vector r = Vector::Zero(law.w.cols());
  for (Index j = 0; j < law.w.cols(); ++j) {
    double s = 0.0;
    for (Index i = 0; i < law.w.rows(); ++i) s += law.w(i, j) * p[i];
    r[j] = s;
  }
  return r;
}

Index zero_rate_column(const RDProblem& problem) {
  Index best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < problem.d.cols(); ++j) {
    double cost = 0.0;
    for (Index i = 0; i < problem.d.rows(); ++i) cost += problem.p[i] * problem.d(i, j);
    if (cost < best_cost) {
      best_cost = cost;
      best = j;
    }
  }
  return best;
}

double zero_rate_distortion(const RDProblem& problem) {
  const Index j = zero_rate_column(problem);
  double cost = 0.0;
  for (Index i = 0; i < problem.d.rows(); ++i) cost += problem.p[i] * problem.d(i, j);
  return cost;
}

}  // namespace commot
