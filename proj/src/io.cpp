#include "commot/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace commot::io {

namespace {

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Vector vector_from_json(const Json& doc, const char* field) {
  if (!doc.is_array()) throw std::invalid_argument(std::string(field) + " must be an array");
  Vector v(static_cast<Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) v[static_cast<Index>(i)] = doc[i].get<double>();
  return v;
}

// Prints round-trip doubles; nan and inf as written by the C library.
void put(std::ostream& os, double x) {
  if (std::isfinite(x)) {
    std::ostringstream tmp;
    tmp.precision(17);
    tmp << x;
    os << tmp.str();
  } else {
    os << (std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf"));
  }
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json problem_to_json(const RDProblem& problem) {
  Json doc;
  doc["p"] = vector_to_json(problem.p);
  doc["d"] = matrix_to_json(problem.d);
  if (problem.x_labels) doc["x_labels"] = vector_to_json(*problem.x_labels);
  if (problem.y_labels) doc["y_labels"] = vector_to_json(*problem.y_labels);
  return doc;
}

RDProblem problem_from_json(const Json& doc, bool renormalize) {
  if (!doc.is_object() || !doc.contains("p") || !doc.contains("d"))
    throw std::invalid_argument("problem document needs fields \"p\" and \"d\"");
  Vector p = vector_from_json(doc.at("p"), "p");
  const Json& rows = doc.at("d");
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument("d must be a nonempty array");
  const std::size_t n = rows.front().size();
  Matrix d(static_cast<Index>(rows.size()), static_cast<Index>(n));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != n)
      throw std::invalid_argument("d must be rectangular");
    for (std::size_t j = 0; j < n; ++j)
      d(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j].get<double>();
  }
  RDProblem problem = make_problem(std::move(p), std::move(d), renormalize);
  if (doc.contains("x_labels")) problem.x_labels = vector_from_json(doc["x_labels"], "x_labels");
  if (doc.contains("y_labels")) problem.y_labels = vector_from_json(doc["y_labels"], "y_labels");
  if (auto violations = validate_problem(problem); !violations.empty())
    throw InvalidProblem(std::move(violations));
  return problem;
}

RDProblem read_problem(const std::filesystem::path& path, bool renormalize) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file " + path.string());
  Json doc;
  try {
    in >> doc;
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return problem_from_json(doc, renormalize);
}

void write_problem(const RDProblem& problem, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write problem file " + path.string());
  out << problem_to_json(problem).dump(2) << '\n';
}

Json residuals_to_json(const ResidualRecord& rec) {
  return {{"iteration", rec.iteration},
          {"r_psi", rec.r_psi},
          {"r_phi", rec.r_phi},
          {"r_lambda", rec.r_lambda},
          {"r_eta", rec.r_eta}};
}

Json solution_to_json(const RDSolution& sol, bool include_matrices) {
  Json doc = {{"rate_nats", sol.rate},
              {"rate_bits", to_bits(sol.rate)},
              {"distortion", sol.distortion},
              {"lambda", sol.lambda},
              {"eta", sol.eta},
              {"iterations", sol.iterations},
              {"converged", sol.converged},
              {"lambda_capped", sol.lambda_capped},
              {"residuals", residuals_to_json(sol.residuals)}};
  if (include_matrices) {
    doc["w"] = matrix_to_json(sol.w.w);
    doc["r"] = vector_to_json(sol.r);
  }
  return doc;
}

Json ba_result_to_json(const BAResult& res, bool include_matrices) {
  Json doc = {{"rate_nats", res.rate},
              {"rate_bits", to_bits(res.rate)},
              {"distortion", res.distortion},
              {"lambda", res.lambda},
              {"iterations", res.iterations},
              {"converged", res.converged}};
  if (include_matrices) {
    doc["w"] = matrix_to_json(res.w.w);
    doc["r"] = vector_to_json(res.r);
  }
  return doc;
}

void write_curve_csv(std::ostream& os, std::span<const CurveRow> rows) {
  for (std::size_t k = 0; k < kCurveColumns.size(); ++k) os << (k ? "," : "") << kCurveColumns[k];
  os << '\n';
  const double nan = std::nan("");
  for (const CurveRow& row : rows) {
    put(os, row.distortion);
    os << ',';
    put(os, row.rate);
    os << ',';
    put(os, to_bits(row.rate));
    os << ',';
    put(os, row.lambda);
    os << ',' << row.iterations << ',' << (row.converged ? 1 : 0);
    for (double v : {row.residuals.r_psi, row.residuals.r_phi, row.residuals.r_lambda,
                     row.residuals.r_eta}) {
      os << ',';
      put(os, row.has_residuals ? v : nan);
    }
    os << ',';
    put(os, row.wall_time_s);
    os << '\n';
  }
}

void write_residual_csv(std::ostream& os, std::span<const ResidualRecord> trace) {
  for (std::size_t k = 0; k < kResidualColumns.size(); ++k)
    os << (k ? "," : "") << kResidualColumns[k];
  os << '\n';
  for (const ResidualRecord& rec : trace) {
    os << rec.iteration;
    for (double v : {rec.r_psi, rec.r_phi, rec.r_lambda, rec.r_eta}) {
      os << ',';
      put(os, v);
    }
    os << '\n';
  }
}

Json curve_to_json(std::span<const CurveRow> rows) {
  Json out = Json::array();
  for (const CurveRow& row : rows) {
    Json j = {{"D", number_or_null(row.distortion)},
              {"R_nats", number_or_null(row.rate)},
              {"R_bits", number_or_null(to_bits(row.rate))},
              {"lambda", number_or_null(row.lambda)},
              {"iterations", row.iterations},
              {"converged", row.converged},
              {"wall_time_s", row.wall_time_s}};
    if (row.has_residuals) {
      j["r_psi"] = number_or_null(row.residuals.r_psi);
      j["r_phi"] = number_or_null(row.residuals.r_phi);
      j["r_lambda"] = number_or_null(row.residuals.r_lambda);
      j["r_eta"] = number_or_null(row.residuals.r_eta);
    }
    out.push_back(std::move(j));
  }
  return out;
}

Json trace_to_json(std::span<const ResidualRecord> trace) {
  Json out = Json::array();
  for (const ResidualRecord& rec : trace) out.push_back(residuals_to_json(rec));
  return out;
}

}  // namespace commot::io
