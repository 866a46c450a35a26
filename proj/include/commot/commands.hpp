#pragma once

#include <optional>
#include <string>
#include <vector>

#include "commot/as_solver.hpp"
#include "commot/ba_solver.hpp"
#include "commot/io.hpp"
#include "commot/sources.hpp"

namespace commot {

enum class SourceFamily { binary, gaussian, laplacian, bifurcation, file };

struct SourceSpec {
  SourceFamily family = SourceFamily::binary;
  double p_one = 0.5;
  double sigma = 2.0;
  std::optional<GridSpec> grid;  // family default when absent
  std::string path;              // problem document for SourceFamily::file
  bool renormalize = false;

  GridSpec effective_grid() const;
  std::string label() const;
};

/// Parses "binary", "gaussian", "laplacian", "bifurcation"; anything else is a path.
SourceSpec parse_source(const std::string& value);
RDProblem build_source(const SourceSpec& spec);

enum class SolverKind { as, ba, both };
SolverKind parse_solver(const std::string& value);
std::string_view solver_name(SolverKind kind);

/// Arithmetic sequence of `points` values from lo to hi inclusive.
struct SweepGrid {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;

  void validate() const;
  std::vector<double> values() const;
};

/// "lo:hi:points"
SweepGrid parse_sweep(const std::string& value);

struct CompareCase {
  std::string name;
  SourceSpec source;
  double distortion = 0.0;
};

/// Binary D = 0.1, 0.4; Gaussian D = 0.5, 1.0; Laplacian D = 0.5, 1.0.
std::vector<CompareCase> benchmark_cases();

struct SolverOptions {
  ASOptions as;
  BAOptions ba;
};

/// Defaults for cmd_compare. Both solvers stop at 1000 iterations. The BA
/// stopping rule and slope search are tightened so the two solvers are
/// compared at matched budgets rather than at BA's early exit.
SolverOptions benchmark_options();

struct ExperimentConfig {
  SourceSpec source;
  SolverKind solver = SolverKind::as;
  std::optional<double> distortion;
  std::optional<SweepGrid> distortion_grid;
  std::optional<SweepGrid> lambda_grid;
  ASOptions as;
  BAOptions ba;
  int repeats = 1;
  std::vector<CompareCase> cases;  // compare only; benchmark_cases() when empty
  bool include_matrices = false;
  int jobs = 1;
  unsigned seed = 0;  // reserved, every solver here is deterministic
};

enum ExitStatus : int { kOk = 0, kFailure = 1, kNotConverged = 2, kInvalidInput = 3 };

struct CommandResult {
  io::Json document;
  int status = kOk;
};

/// Single distortion target. Validation failures come back as status
/// kInvalidInput with the violation list in the document.
CommandResult cmd_solve(const ExperimentConfig& config);

/// AS: one row per D on the distortion grid. BA: one row per lambda on the
/// lambda grid. Rows are in grid order; failed points have converged = false.
std::vector<io::CurveRow> cmd_curve(const ExperimentConfig& config);

struct CompareRow {
  std::string name;
  double distortion = 0.0;
  double lambda_as = 0.0;
  double lambda_ba = 0.0;
  double rate_as = 0.0;
  double rate_ba = 0.0;
  double abs_difference = 0.0;
  double mean_time_as = 0.0;
  double mean_time_ba = 0.0;
  double median_time_as = 0.0;
  double median_time_ba = 0.0;
  double speedup = 0.0;
  int search_steps = 0;
  int iterations_as = 0;
  bool converged_as = false;
  bool converged_ba = false;
};

std::vector<CompareRow> cmd_compare(const ExperimentConfig& config);
io::Json compare_to_json(std::span<const CompareRow> rows);

struct ResidualRun {
  std::vector<ResidualRecord> trace;  // row 0 is the initial state
  RDSolution solution;
};

ResidualRun cmd_residuals(const ExperimentConfig& config);

io::Json fixtures_document();

}  // namespace commot
