#include "commot/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace commot {

double ResidualRecord::max() const {
  return std::max(std::max(r_psi, r_phi), std::max(r_lambda, r_eta));
}

ResidualRecord kkt_residuals(const SolverState& state, const RDProblem& problem, double D) {
  const Matrix& K = state.K;
  const Vector& p = problem.p;
  ResidualRecord rec;

  Vector row_acc = Vector::Zero(K.rows());
  double distortion = 0.0;
  for (Index j = 0; j < K.cols(); ++j) {
    const double b = state.psi[j] * state.r[j];
    double col = 0.0;
    double col_dist = 0.0;
    for (Index i = 0; i < K.rows(); ++i) {
      const double kij = K(i, j);
      const double a = state.phi[i] * p[i];
      col += kij * a;
      col_dist += a * problem.d(i, j) * kij;
      row_acc[i] += kij * b;
    }
    rec.r_psi += std::abs(state.psi[j] * col - 1.0);
    distortion += col_dist * b;
  }
  for (Index i = 0; i < K.rows(); ++i) rec.r_phi += std::abs(state.phi[i] * row_acc[i] - 1.0);
  rec.r_lambda = state.lambda == 0.0 ? 0.0 : std::abs(state.lambda * (distortion - D));
  rec.r_eta = std::abs(state.r.sum() - 1.0);
  return rec;
}

std::vector<LinearSegment> detect_linear_segment(const RDCurve& curve, double tol) {
  std::vector<LinearSegment> out;
  const auto& pts = curve.points;
  if (pts.size() < 3) return out;

  auto flat = [&](std::size_t k) {  // triple (k-1, k, k+1)
    const double left = (pts[k].rate - pts[k - 1].rate) / (pts[k].distortion - pts[k - 1].distortion);
    const double right =
        (pts[k + 1].rate - pts[k].rate) / (pts[k + 1].distortion - pts[k].distortion);
    const double dd = (right - left) / (pts[k + 1].distortion - pts[k - 1].distortion);
    return std::abs(dd) <= tol;
  };

  auto emit = [&](std::size_t first, std::size_t last) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(last - first + 1);
    for (std::size_t k = first; k <= last; ++k) {
      sx += pts[k].distortion;
      sy += pts[k].rate;
      sxx += pts[k].distortion * pts[k].distortion;
      sxy += pts[k].distortion * pts[k].rate;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.push_back({pts[first].distortion, pts[last].distortion, slope});
  };

  std::size_t k = 1;
  while (k + 1 < pts.size()) {
    if (!flat(k)) {
      ++k;
      continue;
    }
    const std::size_t start = k;
    while (k + 1 < pts.size() && flat(k)) ++k;
    emit(start - 1, k);  // last flat centre is k - 1, covering up to sample k
  }
  return out;
}

}  // namespace commot
