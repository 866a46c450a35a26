#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "commot/as_solver.hpp"
#include "commot/io.hpp"
#include "commot/sources.hpp"
#include "oracles.hpp"

using namespace commot;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("problem documents round-trip exactly") {
  auto problem = build_gaussian(GridSpec{4.0, 0.5}, 1.3);
  const auto doc = io::problem_to_json(problem);
  const auto back = io::problem_from_json(io::Json::parse(doc.dump()));
  CHECK(back.p == problem.p);
  CHECK(back.d == problem.d);
  REQUIRE(back.x_labels.has_value());
  CHECK(*back.x_labels == *problem.x_labels);
}

TEST_CASE("a round-tripped problem solves bit-identically") {
  std::mt19937_64 rng(401);
  const auto dir = std::filesystem::temp_directory_path();
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = oracle::random_instance(rng);
    const auto path = dir / ("commot_roundtrip_" + std::to_string(trial) + ".json");
    io::write_problem(inst.problem, path);
    const auto back = io::read_problem(path);
    std::filesystem::remove(path);
    ASOptions opts;
    opts.max_iter = 200;
    const auto a = solve_as(inst.problem, inst.distortion, opts);
    const auto b = solve_as(back, inst.distortion, opts);
    CHECK(a.rate == b.rate);
    CHECK(a.lambda == b.lambda);
    CHECK(a.w.w == b.w.w);
  }
}

TEST_CASE("malformed problem documents") {
  using io::Json;
  CHECK_THROWS_AS(io::problem_from_json(Json::parse(R"({"p": [1.0]})")), std::invalid_argument);
  CHECK_THROWS_AS(io::problem_from_json(Json::parse(R"({"p": [0.5, 0.5], "d": [[0, 1], [1]]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(io::problem_from_json(Json::parse(R"({"p": [0.5, 0.6], "d": [[0, 1], [1, 0]]})")),
                  InvalidProblem);
  const auto fixed =
      io::problem_from_json(Json::parse(R"({"p": [1, 3], "d": [[0, 1], [1, 0]]})"), true);
  CHECK(fixed.p[1] == doctest::Approx(0.75));
  CHECK_THROWS_AS(io::read_problem("/nonexistent/problem.json"), std::runtime_error);
}

TEST_CASE("curve CSV header and missing residuals") {
  std::vector<io::CurveRow> rows(2);
  rows[0].distortion = 0.1;
  rows[0].rate = std::log(2.0);
  rows[0].converged = true;
  rows[1].distortion = 0.2;
  rows[1].has_residuals = false;
  std::ostringstream os;
  io::write_curve_csv(os, rows);
  const auto lines = split_lines(os.str());
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] ==
        "D,R_nats,R_bits,lambda,iterations,converged,r_psi,r_phi,r_lambda,r_eta,wall_time_s");
  CHECK(lines[1].rfind("0.10000000000000001,0.69314718055994529,1,", 0) == 0);
  CHECK(lines[2].find("nan,nan,nan,nan") != std::string::npos);
}

TEST_CASE("residual CSV") {
  std::vector<ResidualRecord> trace{{0, 1.0, 2.0, 3.0, 4.0}, {1, 0.5, 0.25, 0.0, 1e-17}};
  std::ostringstream os;
  io::write_residual_csv(os, trace);
  const auto lines = split_lines(os.str());
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "iter,r_psi,r_phi,r_lambda,r_eta");
  CHECK(lines[1] == "0,1,2,3,4");
  CHECK(lines[2] == "1,0.5,0.25,0,1.0000000000000001e-17");
}

TEST_CASE("solution documents") {
  const auto sol = solve_as(build_binary(0.5), 0.1);
  const auto doc = io::solution_to_json(sol, true);
  CHECK(doc["rate_nats"].get<double>() == sol.rate);
  CHECK(doc["rate_bits"].get<double>() == doctest::Approx(sol.rate / std::log(2.0)));
  CHECK(doc["w"].size() == 2);
  CHECK(doc["residuals"]["iteration"].get<int>() == sol.iterations);
  CHECK_FALSE(io::solution_to_json(sol, false).contains("w"));
  std::vector<io::CurveRow> rows(1);
  rows[0].has_residuals = false;
  rows[0].rate = std::nan("");
  const auto json_rows = io::curve_to_json(rows);
  CHECK(json_rows[0]["R_nats"].is_null());
  CHECK_FALSE(json_rows[0].contains("r_psi"));
}

}
