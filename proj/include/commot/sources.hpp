#pragma once

#include <functional>
#include <string_view>

#include "commot/problem.hpp"

namespace commot {

/// Uniform grid on [-half_width, half_width] with spacing delta:
/// edges x_i = -half_width + i delta, i = 0..2n, where n = half_width / delta.
struct GridSpec {
  double half_width = 0.0;
  double delta = 0.0;

  void validate() const;
  int half_cells() const;  // n
  int cells() const { return 2 * half_cells(); }
  Vector edges() const;
  /// Left edge of each cell; these are the alphabet points.
  Vector points() const;
  /// Index of the cell [x_i, x_{i+1}) containing 0.
  int zero_cell() const;
};

struct DiscreteSource {
  Vector points;
  Vector p;
};

using Cdf = std::function<double(double)>;

/// Cell masses F(x_{i+1}) - F(x_i), renormalized to sum to one.
DiscreteSource discretize_source(const Cdf& cdf, const GridSpec& grid);

Cdf gaussian_cdf(double sigma);
/// Density exp(-|x| / sigma) / (2 sigma).
Cdf laplacian_cdf(double sigma);

/// p = (1 - p_one, p_one), Hamming distortion.
RDProblem build_binary(double p_one);
/// Squared-error distortion on the grid.
RDProblem build_gaussian(const GridSpec& grid, double sigma);
/// Absolute-error distortion on the grid.
RDProblem build_laplacian(const GridSpec& grid, double sigma);
/// The 2x3 instance with a linear segment between two bifurcations.
RDProblem build_bifurcation_fixture();

double binary_entropy(double q);  // nats

double analytic_rd_binary(double p_one, double D);
double analytic_rd_gaussian(double sigma, double D);
double analytic_rd_laplacian(double sigma, double D);

enum class Family { gaussian, laplacian };

std::string_view family_name(Family family);

/// Optimal output marginal of the continuous source, discretized on the grid.
/// Gaussian: N(0, sigma^2 - D). Laplacian: an atom of mass D^2/sigma^2 at the
/// cell containing 0 plus (1 - D^2/sigma^2) Laplacian(sigma).
Vector analytic_marginal(Family family, double sigma, double D, const GridSpec& grid);

}  // namespace commot
