#include "commot/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "commot/diagnostics.hpp"

namespace commot {

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
auto timed(F&& f, double& seconds) {
  const auto start = Clock::now();
  auto result = f();
  seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// Runs work(k) for k in [0, count) on up to `jobs` threads.
template <class F>
void parallel_for(std::size_t count, int jobs, F&& work) {
  const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) work(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) work(k);
    });
}

io::Json violations_to_json(const std::vector<Violation>& violations) {
  io::Json out = io::Json::array();
  for (const Violation& v : violations) {
    io::Json j = {{"message", v.message}};
    if (v.row >= 0) j["row"] = v.row;
    if (v.col >= 0) j["col"] = v.col;
    out.push_back(std::move(j));
  }
  return out;
}

io::CurveRow failed_row(double distortion, double lambda) {
  io::CurveRow row;
  row.distortion = distortion;
  row.rate = std::nan("");
  row.lambda = lambda;
  row.has_residuals = false;
  return row;
}

}  // namespace

GridSpec SourceSpec::effective_grid() const {
  if (grid) return *grid;
  return family == SourceFamily::laplacian ? GridSpec{14.0, 0.2} : GridSpec{8.0, 0.5};
}

std::string SourceSpec::label() const {
  std::ostringstream os;
  switch (family) {
    case SourceFamily::binary:
      os << "binary(p=" << p_one << ")";
      break;
    case SourceFamily::gaussian:
    case SourceFamily::laplacian: {
      const GridSpec g = effective_grid();
      os << (family == SourceFamily::gaussian ? "gaussian" : "laplacian") << "(sigma=" << sigma
         << ",M=" << g.half_width << ",delta=" << g.delta << ")";
      break;
    }
    case SourceFamily::bifurcation:
      os << "bifurcation";
      break;
    case SourceFamily::file:
      os << "file(" << path << ")";
      break;
  }
  return os.str();
}

SourceSpec parse_source(const std::string& value) {
  SourceSpec spec;
  if (value == "binary") {
    spec.family = SourceFamily::binary;
  } else if (value == "gaussian") {
    spec.family = SourceFamily::gaussian;
  } else if (value == "laplacian") {
    spec.family = SourceFamily::laplacian;
  } else if (value == "bifurcation") {
    spec.family = SourceFamily::bifurcation;
  } else {
    spec.family = SourceFamily::file;
    spec.path = value;
  }
  return spec;
}

RDProblem build_source(const SourceSpec& spec) {
  switch (spec.family) {
    case SourceFamily::binary:
      return build_binary(spec.p_one);
    case SourceFamily::gaussian:
      return build_gaussian(spec.effective_grid(), spec.sigma);
    case SourceFamily::laplacian:
      return build_laplacian(spec.effective_grid(), spec.sigma);
    case SourceFamily::bifurcation:
      return build_bifurcation_fixture();
    case SourceFamily::file:
      return io::read_problem(spec.path, spec.renormalize);
  }
  throw std::logic_error("unknown source family");
}

SolverKind parse_solver(const std::string& value) {
  if (value == "as") return SolverKind::as;
  if (value == "ba") return SolverKind::ba;
  if (value == "both") return SolverKind::both;
  throw std::invalid_argument("unknown solver '" + value + "' (expected as, ba or both)");
}

std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::as:
      return "as";
    case SolverKind::ba:
      return "ba";
    case SolverKind::both:
      return "both";
  }
  return "?";
}

void SweepGrid::validate() const {
  if (!(lo < hi)) throw std::invalid_argument("sweep grid needs lo < hi");
  if (points < 2) throw std::invalid_argument("sweep grid needs at least 2 points");
}

std::vector<double> SweepGrid::values() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(points));
  const double step = (hi - lo) / (points - 1);
  for (int k = 0; k < points; ++k) out[static_cast<std::size_t>(k)] = lo + k * step;
  out.back() = hi;
  return out;
}

SweepGrid parse_sweep(const std::string& value) {
  SweepGrid g;
  char c1 = 0, c2 = 0;
  std::istringstream is(value);
  if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.points) || c1 != ':' || c2 != ':')
    throw std::invalid_argument("expected lo:hi:points, got '" + value + "'");
  g.validate();
  return g;
}

std::vector<CompareCase> benchmark_cases() {
  SourceSpec binary;
  SourceSpec gaussian;
  gaussian.family = SourceFamily::gaussian;
  SourceSpec laplacian;
  laplacian.family = SourceFamily::laplacian;
  return {{"binary", binary, 0.1},         {"binary", binary, 0.4},
          {"gaussian", gaussian, 0.5},     {"gaussian", gaussian, 1.0},
          {"laplacian", laplacian, 0.5},   {"laplacian", laplacian, 1.0}};
}

SolverOptions benchmark_options() {
  SolverOptions opts;
  opts.as.max_iter = 1000;
  opts.ba.max_iter = 1000;
  opts.ba.tol = 1e-13;
  opts.ba.slope_search_tol = 1e-11;
  return opts;
}

CommandResult cmd_solve(const ExperimentConfig& config) {
  CommandResult out;
  io::Json& doc = out.document;
  if (!config.distortion) {
    doc["error"] = "solve needs a single distortion target";
    out.status = kInvalidInput;
    return out;
  }
  const double D = *config.distortion;
  doc["source"] = config.source.label();
  doc["solver"] = solver_name(config.solver);
  doc["distortion_target"] = D;

  RDProblem problem;
  try {
    problem = build_source(config.source);
  } catch (const InvalidProblem& e) {
    doc["error"] = e.what();
    doc["violations"] = violations_to_json(e.violations());
    out.status = kInvalidInput;
    return out;
  } catch (const std::invalid_argument& e) {
    doc["error"] = e.what();
    out.status = kInvalidInput;
    return out;
  } catch (const DomainError& e) {
    doc["error"] = e.what();
    out.status = kInvalidInput;
    return out;
  }
  if (!(D > 0.0)) {
    doc["error"] = "distortion must be positive";
    out.status = kInvalidInput;
    return out;
  }

  doc["warnings"] = io::Json::array();
  const double d_max = zero_rate_distortion(problem);
  if (D >= d_max) doc["warnings"].push_back("distortion constraint inactive");

  bool converged = true;
  std::optional<double> rate_as, rate_ba;
  if (config.solver != SolverKind::ba) {
    double seconds = 0.0;
    const RDSolution sol = timed([&] { return solve_as(problem, D, config.as); }, seconds);
    doc["as"] = io::solution_to_json(sol, config.include_matrices);
    doc["as"]["wall_time_s"] = seconds;
    converged = converged && sol.converged;
    rate_as = sol.rate;
  }
  if (config.solver != SolverKind::as) {
    if (D >= d_max) {
      doc["ba"] = {{"rate_nats", 0.0}, {"rate_bits", 0.0}, {"lambda", 0.0},
                   {"distortion", d_max}, {"converged", true}, {"search_steps", 0}};
      rate_ba = 0.0;
    } else {
      double seconds = 0.0;
      const SlopeSearchResult res =
          timed([&] { return ba_search_slope(problem, D, config.ba); }, seconds);
      doc["ba"] = io::ba_result_to_json(res.solution, config.include_matrices);
      doc["ba"]["lambda_D"] = res.lambda;
      doc["ba"]["search_steps"] = res.search_steps;
      doc["ba"]["search_converged"] = res.converged;
      doc["ba"]["linear_segment"] = res.linear_segment;
      doc["ba"]["wall_time_s"] = seconds;
      if (res.linear_segment) doc["warnings"].push_back("target lies on a linear segment");
      converged = converged && res.converged;
      rate_ba = res.solution.rate;
    }
  }
  if (rate_as && rate_ba) doc["abs_rate_difference"] = std::abs(*rate_as - *rate_ba);
  out.status = converged ? kOk : kNotConverged;
  return out;
}

std::vector<io::CurveRow> cmd_curve(const ExperimentConfig& config) {
  const RDProblem problem = build_source(config.source);
  std::vector<io::CurveRow> rows;

  if (config.solver == SolverKind::as) {
    if (!config.distortion_grid) throw std::invalid_argument("AS curve needs a distortion grid");
    const std::vector<double> ds = config.distortion_grid->values();
    rows.resize(ds.size());
    parallel_for(ds.size(), config.jobs, [&](std::size_t k) {
      try {
        double seconds = 0.0;
        const RDSolution sol = timed([&] { return solve_as(problem, ds[k], config.as); }, seconds);
        io::CurveRow& row = rows[k];
        row.distortion = ds[k];
        row.rate = sol.rate;
        row.lambda = sol.lambda;
        row.iterations = sol.iterations;
        row.converged = sol.converged;
        row.residuals = sol.residuals;
        row.wall_time_s = seconds;
      } catch (const std::exception&) {
        rows[k] = failed_row(ds[k], std::nan(""));
      }
    });
  } else if (config.solver == SolverKind::ba) {
    if (!config.lambda_grid) throw std::invalid_argument("BA curve needs a lambda grid");
    std::vector<double> ls = config.lambda_grid->values();
    rows.resize(ls.size());
    parallel_for(ls.size(), config.jobs, [&](std::size_t k) {
      try {
        double seconds = 0.0;
        const BAResult res =
            timed([&] { return ba_fixed_slope(problem, ls[k], config.ba); }, seconds);
        io::CurveRow& row = rows[k];
        row.distortion = res.distortion;
        row.rate = res.rate;
        row.lambda = ls[k];
        row.iterations = res.iterations;
        row.converged = res.converged;
        row.has_residuals = false;
        row.wall_time_s = seconds;
      } catch (const std::exception&) {
        rows[k] = failed_row(std::nan(""), ls[k]);
      }
    });
  } else {
    throw std::invalid_argument("curve takes --solver as or --solver ba");
  }
  return rows;
}

std::vector<CompareRow> cmd_compare(const ExperimentConfig& config) {
  const std::vector<CompareCase> cases =
      config.cases.empty() ? benchmark_cases() : config.cases;
  const int repeats = std::max(config.repeats, 1);
  std::vector<CompareRow> rows;
  for (const CompareCase& c : cases) {
    const RDProblem problem = build_source(c.source);
    CompareRow row;
    row.name = c.name;
    row.distortion = c.distortion;

    std::vector<double> t_as, t_ba;
    RDSolution sol;
    SlopeSearchResult ba;
    for (int rep = 0; rep < repeats; ++rep) {
      double seconds = 0.0;
      sol = timed([&] { return solve_as(problem, c.distortion, config.as); }, seconds);
      t_as.push_back(seconds);
      ba = timed([&] { return ba_search_slope(problem, c.distortion, config.ba); }, seconds);
      t_ba.push_back(seconds);
    }
    row.lambda_as = sol.lambda;
    row.lambda_ba = ba.lambda;
    row.rate_as = sol.rate;
    row.rate_ba = ba.solution.rate;
    row.abs_difference = std::abs(sol.rate - ba.solution.rate);
    row.mean_time_as = mean(t_as);
    row.mean_time_ba = mean(t_ba);
    row.median_time_as = median(t_as);
    row.median_time_ba = median(t_ba);
    row.speedup = row.mean_time_as > 0.0 ? row.mean_time_ba / row.mean_time_as : 0.0;
    row.search_steps = ba.search_steps;
    row.iterations_as = sol.iterations;
    row.converged_as = sol.converged;
    row.converged_ba = ba.converged;
    rows.push_back(std::move(row));
  }
  return rows;
}

io::Json compare_to_json(std::span<const CompareRow> rows) {
  io::Json out = io::Json::array();
  for (const CompareRow& r : rows) {
    out.push_back({{"case", r.name},
                   {"D", r.distortion},
                   {"lambda_as", r.lambda_as},
                   {"lambda_D", r.lambda_ba},
                   {"rate_as_nats", r.rate_as},
                   {"rate_ba_nats", r.rate_ba},
                   {"abs_difference", r.abs_difference},
                   {"mean_time_as_s", r.mean_time_as},
                   {"mean_time_ba_s", r.mean_time_ba},
                   {"median_time_as_s", r.median_time_as},
                   {"median_time_ba_s", r.median_time_ba},
                   {"speedup", r.speedup},
                   {"search_steps", r.search_steps},
                   {"iterations_as", r.iterations_as},
                   {"converged_as", r.converged_as},
                   {"converged_ba", r.converged_ba}});
  }
  return out;
}

ResidualRun cmd_residuals(const ExperimentConfig& config) {
  if (!config.distortion) throw std::invalid_argument("residuals needs a single distortion target");
  const RDProblem problem = build_source(config.source);
  ASOptions opts = config.as;
  opts.record_trace = true;

  ResidualRun run;
  run.trace.push_back(kkt_residuals(SolverState::initial(problem), problem, *config.distortion));
  run.solution = solve_as(problem, *config.distortion, opts);
  for (const ResidualRecord& rec : run.solution.trace) run.trace.push_back(rec);
  return run;
}

io::Json fixtures_document() {
  const GridSpec g_gauss{8.0, 0.5};
  const GridSpec g_lap{14.0, 0.2};
  return io::Json::array({
      {{"name", "binary"},
       {"description", "binary source, Hamming distortion"},
       {"parameters", {{"p", 0.5}}},
       {"alphabet", {2, 2}}},
      {{"name", "gaussian"},
       {"description", "truncated Gaussian, squared-error distortion"},
       {"parameters", {{"sigma", 2.0}, {"grid_m", g_gauss.half_width}, {"grid_delta", g_gauss.delta}}},
       {"alphabet", {g_gauss.cells(), g_gauss.cells()}}},
      {{"name", "laplacian"},
       {"description", "truncated Laplacian, absolute-error distortion"},
       {"parameters", {{"sigma", 2.0}, {"grid_m", g_lap.half_width}, {"grid_delta", g_lap.delta}}},
       {"alphabet", {g_lap.cells(), g_lap.cells()}}},
      {{"name", "bifurcation"},
       {"description", "2x3 instance with a linear segment between two bifurcations"},
       {"parameters", {{"p", {0.4, 0.6}}, {"d", {{1.0, 0.0, 0.3}, {0.0, 1.0, 0.3}}}}},
       {"alphabet", {2, 3}}},
  });
}

}  // namespace commot
