#include "commot/sources.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace commot {

void GridSpec::validate() const {
  if (!(half_width > 0.0) || !(delta > 0.0) || !std::isfinite(half_width) ||
      !std::isfinite(delta))
    throw DomainError("GridSpec: half_width and delta must be positive");
  const double ratio = half_width / delta;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream os;
    os << "GridSpec: half_width / delta = " << ratio << " is not an integer";
    throw DomainError(os.str());
  }
  if (std::round(ratio) < 1.0) throw DomainError("GridSpec: need at least two cells");
}

int GridSpec::half_cells() const {
  validate();
  return static_cast<int>(std::lround(half_width / delta));
}

Vector GridSpec::edges() const {
  const int n = half_cells();
  Vector x(2 * n + 1);
  for (int i = 0; i <= 2 * n; ++i) x[i] = -half_width + i * delta;
  return x;
}

Vector GridSpec::points() const {
  const Vector x = edges();
  return x.head(x.size() - 1);
}

int GridSpec::zero_cell() const { return half_cells(); }

DiscreteSource discretize_source(const Cdf& cdf, const GridSpec& grid) {
  const Vector x = grid.edges();
  Vector p(x.size() - 1);
  double previous = cdf(x[0]);
  for (Index i = 0; i + 1 < x.size(); ++i) {
    const double next = cdf(x[i + 1]);
    if (!(next >= previous) || next > 1.0 || previous < 0.0)
      throw DomainError("discretize_source: cdf is not a monotone map into [0, 1]");
    p[i] = next - previous;
    previous = next;
  }
  const double total = p.sum();
  if (!(total > 0.0)) throw DomainError("discretize_source: no mass on the grid");
  p /= total;
  return {grid.points(), std::move(p)};
}

Cdf gaussian_cdf(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("gaussian_cdf: sigma must be positive");
  return [sigma](double x) { return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2)); };
}

Cdf laplacian_cdf(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("laplacian_cdf: sigma must be positive");
  return [sigma](double x) {
    return x < 0.0 ? 0.5 * std::exp(x / sigma) : 1.0 - 0.5 * std::exp(-x / sigma);
  };
}

RDProblem build_binary(double p_one) {
  if (!(p_one > 0.0 && p_one < 1.0)) throw DomainError("build_binary: p_one must lie in (0, 1)");
  Vector p(2);
  p << 1.0 - p_one, p_one;
  Matrix d(2, 2);
  d << 0.0, 1.0, 1.0, 0.0;
  return {std::move(p), std::move(d), std::nullopt, std::nullopt};
}

namespace {

template <class Distortion>
RDProblem build_on_grid(const Cdf& cdf, const GridSpec& grid, Distortion dist) {
  DiscreteSource src = discretize_source(cdf, grid);
  const Index n = src.points.size();
  Matrix d(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) d(i, j) = dist(src.points[i] - src.points[j]);
  return {std::move(src.p), std::move(d), src.points, src.points};
}

}  // namespace

RDProblem build_gaussian(const GridSpec& grid, double sigma) {
  return build_on_grid(gaussian_cdf(sigma), grid, [](double e) { return e * e; });
}

RDProblem build_laplacian(const GridSpec& grid, double sigma) {
  return build_on_grid(laplacian_cdf(sigma), grid, [](double e) { return std::abs(e); });
}

RDProblem build_bifurcation_fixture() {
  Vector p(2);
  p << 0.4, 0.6;
  Matrix d(2, 3);
  d << 1.0, 0.0, 0.3, 0.0, 1.0, 0.3;
  return {std::move(p), std::move(d), std::nullopt, std::nullopt};
}

double binary_entropy(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  return -q * std::log(q) - (1.0 - q) * std::log1p(-q);
}

double analytic_rd_binary(double p_one, double D) {
  const double q = std::min(p_one, 1.0 - p_one);
  if (D >= q) return 0.0;
  return binary_entropy(q) - binary_entropy(std::max(D, 0.0));
}

double analytic_rd_gaussian(double sigma, double D) {
  const double var = sigma * sigma;
  return D < var ? 0.5 * std::log(var / D) : 0.0;
}

double analytic_rd_laplacian(double sigma, double D) { return D < sigma ? std::log(sigma / D) : 0.0; }

std::string_view family_name(Family family) {
  return family == Family::gaussian ? "gaussian" : "laplacian";
}

Vector analytic_marginal(Family family, double sigma, double D, const GridSpec& grid) {
  if (!(sigma > 0.0)) throw DomainError("analytic_marginal: sigma must be positive");
  const Vector x = grid.edges();
  Vector q(x.size() - 1);

  if (family == Family::gaussian) {
    if (!(D > 0.0 && D < sigma * sigma))
      throw DomainError("analytic_marginal: D must lie in (0, sigma^2)");
    const Cdf cdf = gaussian_cdf(std::sqrt(sigma * sigma - D));
    for (Index i = 0; i < q.size(); ++i) q[i] = cdf(x[i + 1]) - cdf(x[i]);
  } else {
    if (!(D > 0.0 && D < sigma)) throw DomainError("analytic_marginal: D must lie in (0, sigma)");
    const double atom = (D * D) / (sigma * sigma);
    const Cdf cdf = laplacian_cdf(sigma);
    for (Index i = 0; i < q.size(); ++i) q[i] = (1.0 - atom) * (cdf(x[i + 1]) - cdf(x[i]));
    q[grid.zero_cell()] += atom;
  }
  return q / q.sum();
}

}  // namespace commot
