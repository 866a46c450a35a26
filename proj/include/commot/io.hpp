#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>

#include "json.hpp"

#include "commot/ba_solver.hpp"
#include "commot/solution.hpp"

namespace commot::io {

using Json = nlohmann::json;

inline constexpr double kNatsPerBit = 0.69314718055994530942;
inline double to_bits(double nats) { return nats / kNatsPerBit; }

// Problem documents: {"p": [...], "d": [[...], ...], "x_labels": [...], "y_labels": [...]}.
// Labels are optional. Doubles are written with round-trip precision.
Json problem_to_json(const RDProblem& problem);
RDProblem problem_from_json(const Json& doc, bool renormalize = false);
RDProblem read_problem(const std::filesystem::path& path, bool renormalize = false);
void write_problem(const RDProblem& problem, const std::filesystem::path& path);

Json residuals_to_json(const ResidualRecord& rec);
Json solution_to_json(const RDSolution& sol, bool include_matrices);
Json ba_result_to_json(const BAResult& res, bool include_matrices);

struct CurveRow {
  double distortion = 0.0;
  double rate = 0.0;  // nats
  double lambda = 0.0;
  int iterations = 0;
  bool converged = false;
  ResidualRecord residuals;
  bool has_residuals = true;  // false for parametric BA rows
  double wall_time_s = 0.0;
};

inline constexpr std::array<std::string_view, 11> kCurveColumns = {
    "D",     "R_nats", "R_bits",   "lambda", "iterations", "converged",
    "r_psi", "r_phi",  "r_lambda", "r_eta",  "wall_time_s"};
inline constexpr std::array<std::string_view, 5> kResidualColumns = {"iter", "r_psi", "r_phi",
                                                                     "r_lambda", "r_eta"};

void write_curve_csv(std::ostream& os, std::span<const CurveRow> rows);
void write_residual_csv(std::ostream& os, std::span<const ResidualRecord> trace);
Json curve_to_json(std::span<const CurveRow> rows);
Json trace_to_json(std::span<const ResidualRecord> trace);

}  // namespace commot::io
