#include "commot/state.hpp"

#include <cmath>

namespace commot {

Matrix kernel(const Matrix& d, double lambda) { return (-lambda * d.array()).exp().matrix(); }

SolverState SolverState::initial(const RDProblem& problem) {
  const Index m = problem.source_size();
  const Index n = problem.output_size();
  SolverState s;
  s.phi = Vector::Ones(m);
  s.psi = Vector::Ones(n);
  s.lambda = 1.0;
  s.r = Vector::Constant(n, 1.0 / static_cast<double>(n));
  s.refresh_kernel(problem.d);
  s.refresh_beta();
  return s;
}

void SolverState::refresh_kernel(const Matrix& d) { K = kernel(d, lambda); }

void SolverState::refresh_beta() { beta = (-psi.array().log() - 0.5).matrix(); }

ConditionalLaw SolverState::transition_law() const {
  Matrix w(K.rows(), K.cols());
  for (Index j = 0; j < K.cols(); ++j) {
    const double col = psi[j] * r[j];
    for (Index i = 0; i < K.rows(); ++i) w(i, j) = phi[i] * K(i, j) * col;
  }
  return {std::move(w)};
}

}  // namespace commot
