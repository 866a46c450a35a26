#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "commot/commands.hpp"
#include "commot/diagnostics.hpp"

namespace py = pybind11;
using namespace commot;

namespace {

RDProblem to_problem(const Vector& p, const Matrix& d, bool renormalize) {
  return make_problem(p, d, renormalize);
}

py::dict solution_dict(const RDSolution& sol) {
  py::dict out;
  out["rate"] = sol.rate;
  out["distortion"] = sol.distortion;
  out["lambda"] = sol.lambda;
  out["eta"] = sol.eta;
  out["w"] = sol.w.w;
  out["r"] = sol.r;
  out["iterations"] = sol.iterations;
  out["converged"] = sol.converged;
  out["lambda_capped"] = sol.lambda_capped;
  out["constraint_inactive"] = sol.constraint_inactive;
  out["residuals"] = sol.residuals;
  out["trace"] = sol.trace;
  return out;
}

py::dict ba_dict(const BAResult& res) {
  py::dict out;
  out["rate"] = res.rate;
  out["distortion"] = res.distortion;
  out["lambda"] = res.lambda;
  out["w"] = res.w.w;
  out["r"] = res.r;
  out["iterations"] = res.iterations;
  out["converged"] = res.converged;
  return out;
}

}  // namespace

PYBIND11_MODULE(_commot, m) {
  m.doc() = "Rate-distortion functions by alternating Sinkhorn";

  auto base = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InvalidProblem>(m, "InvalidProblem", PyExc_ValueError);
  py::register_exception<TargetUnreachable>(m, "TargetUnreachable", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  (void)base;

  py::class_<ResidualRecord>(m, "ResidualRecord")
      .def_readonly("iteration", &ResidualRecord::iteration)
      .def_readonly("r_psi", &ResidualRecord::r_psi)
      .def_readonly("r_phi", &ResidualRecord::r_phi)
      .def_readonly("r_lambda", &ResidualRecord::r_lambda)
      .def_readonly("r_eta", &ResidualRecord::r_eta)
      .def("max", &ResidualRecord::max)
      .def("__repr__", [](const ResidualRecord& r) {
        return "ResidualRecord(iteration=" + std::to_string(r.iteration) +
               ", max=" + std::to_string(r.max()) + ")";
      });

  py::class_<RDProblem>(m, "Problem")
      .def(py::init(&to_problem), py::arg("p"), py::arg("d"), py::arg("renormalize") = false)
      .def_readonly("p", &RDProblem::p)
      .def_readonly("d", &RDProblem::d)
      .def_property_readonly("zero_rate_distortion", &zero_rate_distortion)
      .def_static("binary", &build_binary, py::arg("p_one") = 0.5)
      .def_static(
          "gaussian",
          [](double half_width, double delta, double sigma) {
            return build_gaussian(GridSpec{half_width, delta}, sigma);
          },
          py::arg("half_width") = 8.0, py::arg("delta") = 0.5, py::arg("sigma") = 2.0)
      .def_static(
          "laplacian",
          [](double half_width, double delta, double sigma) {
            return build_laplacian(GridSpec{half_width, delta}, sigma);
          },
          py::arg("half_width") = 14.0, py::arg("delta") = 0.2, py::arg("sigma") = 2.0)
      .def_static("bifurcation", &build_bifurcation_fixture)
      .def_static("from_json", [](const std::string& path, bool renormalize) {
        return io::read_problem(path, renormalize);
      }, py::arg("path"), py::arg("renormalize") = false)
      .def("to_json", [](const RDProblem& p, const std::string& path) { io::write_problem(p, path); });

  m.def(
      "solve",
      [](const RDProblem& problem, double D, int max_iter, double tol, bool trace) {
        ASOptions opts;
        opts.max_iter = max_iter;
        opts.residual_tol = tol;
        opts.record_trace = trace;
        return solution_dict(solve_as(problem, D, opts));
      },
      py::arg("problem"), py::arg("distortion"), py::arg("max_iter") = 1000,
      py::arg("tol") = 1e-9, py::arg("trace") = false,
      "R(D) by alternating Sinkhorn; rate in nats");

  m.def(
      "ba_fixed_slope",
      [](const RDProblem& problem, double lambda, int max_iter, double tol) {
        BAOptions opts;
        opts.max_iter = max_iter;
        opts.tol = tol;
        return ba_dict(ba_fixed_slope(problem, lambda, opts));
      },
      py::arg("problem"), py::arg("lam"), py::arg("max_iter") = 1000, py::arg("tol") = 1e-10);

  m.def(
      "ba_search",
      [](const RDProblem& problem, double D, int max_iter, double tol, double slope_tol) {
        BAOptions opts;
        opts.max_iter = max_iter;
        opts.tol = tol;
        opts.slope_search_tol = slope_tol;
        const SlopeSearchResult res = ba_search_slope(problem, D, opts);
        py::dict out = ba_dict(res.solution);
        out["lambda"] = res.lambda;
        out["search_steps"] = res.search_steps;
        out["converged"] = res.converged;
        out["linear_segment"] = res.linear_segment;
        return out;
      },
      py::arg("problem"), py::arg("distortion"), py::arg("max_iter") = 1000,
      py::arg("tol") = 1e-10, py::arg("slope_tol") = 1e-6);

  m.def(
      "curve",
      [](const RDProblem& problem, const std::vector<double>& distortions, int max_iter) {
        ASOptions opts;
        opts.max_iter = max_iter;
        py::list rows;
        for (double D : distortions) rows.append(solution_dict(solve_as(problem, D, opts)));
        return rows;
      },
      py::arg("problem"), py::arg("distortions"), py::arg("max_iter") = 1000);

  m.def(
      "linear_segments",
      [](const std::vector<double>& D, const std::vector<double>& R, double tol) {
        if (D.size() != R.size()) throw DomainError("linear_segments: D and R differ in length");
        RDCurve curve;
        for (std::size_t k = 0; k < D.size(); ++k) curve.points.push_back({D[k], R[k], 0.0});
        py::list out;
        for (const auto& s : detect_linear_segment(curve, tol))
          out.append(py::make_tuple(s.d_start, s.d_end, s.slope));
        return out;
      },
      py::arg("distortions"), py::arg("rates"), py::arg("tol") = kSegmentTolerance);

  m.def(
      "compare",
      [](int repeats) {
        ExperimentConfig cfg;
        const SolverOptions opts = benchmark_options();
        cfg.as = opts.as;
        cfg.ba = opts.ba;
        cfg.repeats = repeats;
        return compare_to_json(cmd_compare(cfg)).dump();
      },
      py::arg("repeats") = 1, "benchmark cases as a JSON string");

  m.def("analytic_rd_binary", &analytic_rd_binary, py::arg("p_one"), py::arg("distortion"));
  m.def("analytic_rd_gaussian", &analytic_rd_gaussian, py::arg("sigma"), py::arg("distortion"));
  m.def("analytic_rd_laplacian", &analytic_rd_laplacian, py::arg("sigma"), py::arg("distortion"));
}
