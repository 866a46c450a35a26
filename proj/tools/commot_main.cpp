// commot: rate-distortion functions by alternating Sinkhorn, with a
// Blahut-Arimoto baseline.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "commot/commands.hpp"

using namespace commot;

namespace {

struct Flags {
  std::string source = "binary";
  double p_one = 0.5;
  double sigma = 2.0;
  double grid_m = 0.0;
  double grid_delta = 0.0;
  double distortion = 0.0;
  double dmin = 0.0;
  double dmax = 0.0;
  int points = 25;
  std::string lambda_grid;
  std::string solver = "as";
  int max_iter = 0;
  double tol = 0.0;
  double slope_tol = 0.0;
  int repeats = 1;
  std::string out;
  std::string format;
  bool bits = false;
  bool include_matrices = false;
  bool renormalize = false;
  int jobs = 1;
  unsigned seed = 0;
};

void add_source_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--source", f.source,
                  "binary, gaussian, laplacian, bifurcation, or a problem JSON file");
  cmd->add_option("--p", f.p_one, "P(X = 1) for the binary source");
  cmd->add_option("--sigma", f.sigma, "scale of the Gaussian or Laplacian source");
  cmd->add_option("--grid-m", f.grid_m, "truncation half-width M");
  cmd->add_option("--grid-delta", f.grid_delta, "grid spacing");
  cmd->add_flag("--renormalize", f.renormalize, "rescale p from a file instead of rejecting it");
}

void add_solver_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--max-iter", f.max_iter, "iteration limit for both solvers");
  cmd->add_option("--tol", f.tol, "AS stopping tolerance on the KKT residuals");
  cmd->add_option("--slope-tol", f.slope_tol, "BA slope search tolerance on |D - target|");
  cmd->add_option("--jobs", f.jobs, "worker threads for sweeps");
  cmd->add_option("--seed", f.seed, "reserved; all solvers are deterministic");
}

// The default format differs per subcommand and is filled in after parsing,
// since all subcommands share one Flags.
void add_output_flags(CLI::App* cmd, Flags& f, const std::string& default_format) {
  cmd->add_option("--out", f.out, "output path (stdout when omitted)");
  cmd->add_option("--format", f.format, "csv or json (default " + default_format + ")")
      ->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig make_config(const Flags& f, const SolverOptions& defaults = {}) {
  ExperimentConfig cfg;
  cfg.as = defaults.as;
  cfg.ba = defaults.ba;
  cfg.source = parse_source(f.source);
  cfg.source.p_one = f.p_one;
  cfg.source.sigma = f.sigma;
  cfg.source.renormalize = f.renormalize;
  if (f.grid_m > 0.0 || f.grid_delta > 0.0) {
    GridSpec g = cfg.source.effective_grid();
    if (f.grid_m > 0.0) g.half_width = f.grid_m;
    if (f.grid_delta > 0.0) g.delta = f.grid_delta;
    cfg.source.grid = g;
  }
  cfg.solver = parse_solver(f.solver);
  if (f.max_iter > 0) {
    cfg.as.max_iter = f.max_iter;
    cfg.ba.max_iter = f.max_iter;
  }
  if (f.tol > 0.0) cfg.as.residual_tol = f.tol;
  if (f.slope_tol > 0.0) cfg.ba.slope_search_tol = f.slope_tol;
  cfg.repeats = f.repeats;
  cfg.include_matrices = f.include_matrices;
  cfg.jobs = f.jobs;
  cfg.seed = f.seed;
  return cfg;
}

// Writes to --out or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void convert_to_bits(io::Json& doc) {
  for (const char* key : {"as", "ba"}) {
    if (!doc.contains(key)) continue;
    io::Json& part = doc[key];
    if (part.contains("rate_nats")) part["rate"] = part["rate_bits"];
    part["rate_unit"] = "bits";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-distortion functions by alternating Sinkhorn with a Blahut-Arimoto baseline"};
  app.require_subcommand(1);
  Flags f;

  auto* solve = app.add_subcommand("solve", "R(D) at a single distortion target");
  add_source_flags(solve, f);
  add_solver_flags(solve, f);
  add_output_flags(solve, f, "json");
  solve->add_option("--distortion", f.distortion, "distortion target D")->required();
  solve->add_option("--solver", f.solver, "as, ba or both");
  solve->add_flag("--bits", f.bits, "also report the headline rate in bits");
  solve->add_flag("--include-matrices", f.include_matrices, "emit w and r");

  auto* curve = app.add_subcommand("curve", "sweep R(D) over a grid");
  add_source_flags(curve, f);
  add_solver_flags(curve, f);
  add_output_flags(curve, f, "csv");
  curve->add_option("--solver", f.solver, "as (distortion grid) or ba (lambda grid)");
  curve->add_option("--dmin", f.dmin, "first distortion of the AS grid");
  curve->add_option("--dmax", f.dmax, "last distortion of the AS grid");
  curve->add_option("--points", f.points, "number of grid points");
  curve->add_option("--lambda-grid", f.lambda_grid, "BA slope grid lo:hi:points");

  auto* compare = app.add_subcommand("compare", "AS against slope-searched BA");
  add_solver_flags(compare, f);
  add_output_flags(compare, f, "json");
  compare->add_option("--repeats", f.repeats, "timing repetitions per case");
  compare->add_option("--source", f.source, "restrict to one family (default: all cases)");
  compare->add_option("--distortion", f.distortion, "single target (with --source)");

  auto* residuals = app.add_subcommand("residuals", "per-iteration KKT residual trace");
  add_source_flags(residuals, f);
  add_solver_flags(residuals, f);
  add_output_flags(residuals, f, "csv");
  residuals->add_option("--distortion", f.distortion, "distortion target D")->required();

  auto* fixtures = app.add_subcommand("fixtures", "list the built-in problems");
  add_output_flags(fixtures, f, "json");

  CLI11_PARSE(app, argc, argv);
  if (f.format.empty()) f.format = (*curve || *residuals) ? "csv" : "json";

  try {
    if (*fixtures) {
      Sink sink(f.out);
      const io::Json doc = fixtures_document();
      if (f.format == "json") {
        sink.stream() << doc.dump(2) << '\n';
      } else {
        sink.stream() << "name,description\n";
        for (const auto& fx : doc) {
          sink.stream() << fx["name"].get<std::string>() << ','
                        << fx["description"].get<std::string>() << '\n';
        }
      }
      return kOk;
    }

    ExperimentConfig cfg;
    try {
      // AS/BA agreement is only meaningful at the tightened BA settings
      const bool paired = *compare || (*solve && f.solver == "both");
      cfg = make_config(f, paired ? benchmark_options() : SolverOptions{});
    } catch (const std::invalid_argument& e) {
      std::cerr << "commot: " << e.what() << '\n';
      return kInvalidInput;
    }

    if (*solve) {
      cfg.distortion = f.distortion;
      CommandResult res = cmd_solve(cfg);
      if (f.bits) convert_to_bits(res.document);
      Sink sink(f.out);
      if (f.format == "json") {
        sink.stream() << res.document.dump(2) << '\n';
      } else {
        std::vector<io::CurveRow> rows;
        if (res.document.contains("as")) {
          const auto& a = res.document["as"];
          io::CurveRow row;
          row.distortion = a["distortion"];
          row.rate = a["rate_nats"];
          row.lambda = a["lambda"];
          row.iterations = a["iterations"];
          row.converged = a["converged"];
          row.residuals.r_psi = a["residuals"]["r_psi"];
          row.residuals.r_phi = a["residuals"]["r_phi"];
          row.residuals.r_lambda = a["residuals"]["r_lambda"];
          row.residuals.r_eta = a["residuals"]["r_eta"];
          row.wall_time_s = a["wall_time_s"];
          rows.push_back(row);
        }
        io::write_curve_csv(sink.stream(), rows);
      }
      if (res.status == kInvalidInput) std::cerr << "commot: " << res.document["error"] << '\n';
      return res.status;
    }

    if (*curve) {
      if (cfg.solver == SolverKind::as) {
        if (!(f.dmax > f.dmin) || f.dmin <= 0.0) {
          std::cerr << "commot: AS curve needs 0 < --dmin < --dmax\n";
          return kInvalidInput;
        }
        cfg.distortion_grid = SweepGrid{f.dmin, f.dmax, f.points};
      } else if (!f.lambda_grid.empty()) {
        cfg.lambda_grid = parse_sweep(f.lambda_grid);
      }
      const auto rows = cmd_curve(cfg);
      Sink sink(f.out);
      if (f.format == "json")
        sink.stream() << io::curve_to_json(rows).dump(2) << '\n';
      else
        io::write_curve_csv(sink.stream(), rows);
      bool all = true;
      for (const auto& r : rows) all = all && r.converged;
      return all ? kOk : kNotConverged;
    }

    if (*compare) {
      if (compare->count("--source")) {
        const SourceSpec spec = parse_source(f.source);
        if (compare->count("--distortion")) {
          cfg.cases.push_back({f.source, spec, f.distortion});
        } else {
          for (const auto& c : benchmark_cases())
            if (c.name == f.source) cfg.cases.push_back(c);
        }
      }
      const auto rows = cmd_compare(cfg);
      Sink sink(f.out);
      if (f.format == "json") {
        sink.stream() << compare_to_json(rows).dump(2) << '\n';
      } else {
        sink.stream() << "case,D,lambda_as,lambda_D,rate_as_nats,rate_ba_nats,abs_difference,"
                         "mean_time_as_s,mean_time_ba_s,speedup,search_steps\n";
        sink.stream().precision(10);
        for (const auto& r : rows)
          sink.stream() << r.name << ',' << r.distortion << ',' << r.lambda_as << ','
                        << r.lambda_ba << ',' << r.rate_as << ',' << r.rate_ba << ','
                        << r.abs_difference << ',' << r.mean_time_as << ',' << r.mean_time_ba
                        << ',' << r.speedup << ',' << r.search_steps << '\n';
      }
      // AS is capped at the benchmark budget, so only a failed slope search counts
      bool all = true;
      for (const auto& r : rows) all = all && r.converged_ba;
      return all ? kOk : kNotConverged;
    }

    if (*residuals) {
      cfg.distortion = f.distortion;
      const ResidualRun run = cmd_residuals(cfg);
      Sink sink(f.out);
      if (f.format == "json")
        sink.stream() << io::trace_to_json(run.trace).dump(2) << '\n';
      else
        io::write_residual_csv(sink.stream(), run.trace);
      return run.solution.converged ? kOk : kNotConverged;
    }
  } catch (const InvalidProblem& e) {
    std::cerr << "commot: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "commot: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DomainError& e) {
    std::cerr << "commot: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "commot: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
