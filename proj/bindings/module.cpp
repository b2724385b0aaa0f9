#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "adaprox/diagnostics.hpp"
#include "adaprox/estimates.hpp"
#include "adaprox/io.hpp"
#include "adaprox/problems.hpp"
#include "adaprox/solver.hpp"

namespace py = pybind11;
using namespace adaprox;

namespace {

py::dict estimates_dict(const LocalEstimates& est) {
  py::dict d;
  d["ell"] = est.ell;
  d["L"] = est.big_l;
  d["c"] = est.c;
  d["step_norm"] = est.step_norm;
  d["scaled_ell"] = est.scaled_ell;
  d["scaled_L"] = est.scaled_big_l;
  d["scaled_lambda"] = est.scaled_lambda;
  return d;
}

py::dict trace_dict(const Trace& trace) {
  const long n = trace.iterations();
  Vector gamma(n), rho(n), ell(n), big_l(n), c(n), residual(n), best(n), objective(n),
      cumavg(n);
  std::vector<std::string> branch;
  branch.reserve(static_cast<size_t>(n));
  for (long k = 1; k <= n; ++k) {
    const StepRecord& rec = trace.row(k);
    gamma[k - 1] = rec.gamma;
    rho[k - 1] = rec.rho;
    ell[k - 1] = rec.ell;
    big_l[k - 1] = rec.big_l;
    c[k - 1] = rec.c;
    residual[k - 1] = rec.residual;
    best[k - 1] = rec.best_residual;
    objective[k - 1] = rec.objective;
    cumavg[k - 1] = rec.gamma_cumavg;
    branch.emplace_back(branch_name(rec.branch));
  }
  py::dict d;
  d["problem"] = trace.problem_id;
  d["rule"] = trace.rule;
  d["status"] = status_name(trace.status);
  d["iterations"] = n;
  d["gradient_evals"] = trace.gradient_evals;
  d["x"] = trace.x_final;
  d["objective"] = trace.final_objective;
  d["gamma"] = gamma;
  d["rho"] = rho;
  d["ell"] = ell;
  d["L"] = big_l;
  d["c"] = c;
  d["residual"] = residual;
  d["best_residual"] = best;
  d["objective_trace"] = objective;
  d["gamma_cumavg"] = cumavg;
  d["branch"] = branch;
  d["nu"] = trace.nu;
  d["pi"] = trace.pi;
  return d;
}

py::dict report_dict(const RecipeReport& report) {
  py::dict d;
  d["p1_min_slack"] = report.p1_min_slack;
  d["p2_min_slack"] = report.p2_min_slack;
  d["p3_empirical_lambda_min"] = report.p3_empirical_lambda_min;
  d["p3_decrease_events"] = report.p3_decrease_events;
  d["rate_checked"] = report.rate_checked;
  d["rate_bound_holds"] = report.rate_bound_holds;
  d["lyapunov_checked"] = report.lyapunov_checked;
  d["lyapunov_monotone"] = report.lyapunov_monotone;
  d["pass"] = report.passed();
  return d;
}

py::dict solve_py(const std::string& family, int rows, int cols, std::uint64_t seed,
                  const std::string& rule, double pi, std::optional<double> nu, int memory,
                  double gamma0, double tol, long max_iters, std::optional<double> lam,
                  double sparsity, double noise, double cubic_m, double p,
                  const std::string& aa_nu_mode, bool snapshots,
                  std::optional<Vector> x0, const std::string& data, bool check) {
  RunSpec spec;
  spec.family = family_from_name(family);
  spec.data_path = data;
  spec.instance.rows = rows;
  spec.instance.cols = cols;
  spec.instance.seed = seed;
  spec.instance.sparsity = sparsity;
  spec.instance.noise = noise;
  spec.instance.cubic_m = cubic_m;
  spec.instance.p = p;
  if (lam) spec.instance.lambda = *lam;
  spec.solver.rule = rule_from_name(rule);
  spec.solver.pi = pi;
  if (nu) {
    spec.solver.nu = *nu;
    spec.nu_explicit = true;
  }
  spec.solver.memory = memory;
  spec.solver.gamma0 = gamma0;
  spec.solver.tol = tol;
  spec.solver.max_iters = max_iters;
  spec.solver.record_snapshots = snapshots || check;
  if (aa_nu_mode == "aggregate") {
    spec.solver.aa_nu_mode = AaNuMode::Aggregate;
  } else if (aa_nu_mode == "per-pair") {
    spec.solver.aa_nu_mode = AaNuMode::PerPair;
  } else {
    throw ConfigError("aa_nu_mode must be 'aggregate' or 'per-pair'");
  }
  if (x0) spec.solver.x0 = *x0;
  if (data.empty() && (rows < 1 || cols < 1)) {
    throw ConfigError("synthetic instances need positive rows and cols");
  }

  const CompositeProblem problem = instantiate_problem(spec);
  SolverConfig config = spec.solver;
  config.nu = effective_nu(spec, problem);
  const Trace trace = run(problem, config);
  py::dict result = trace_dict(trace);
  if (check) {
    const ReferenceOptimum ref = presolve_reference(problem, config.tol);
    result["report"] = report_dict(check_trace(trace, config.pi, config.nu, ref));
    result["optimum_objective"] = ref.objective;
  }
  return result;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Safeguarded adaptive proximal-gradient solver";

  py::register_exception<Error>(m, "SolverError");

  m.def(
      "local_estimates",
      [](const Vector& s, const Vector& y, double gamma, double nu) {
        return estimates_dict(local_estimates(s, y, gamma, nu));
      },
      py::arg("s"), py::arg("y"), py::arg("gamma") = 1.0, py::arg("nu") = 1.0,
      "Local curvature estimates (ell, L, c and their Holder-scaled forms) of one "
      "displacement/gradient-difference pair.");

  m.def("adapg_candidate", &adapg_candidate, py::arg("gamma_k"), py::arg("gamma_prev"),
        py::arg("ell"), py::arg("L"), py::arg("pi") = 1.2,
        "Plain adaptive stepsize candidate (the safeguard value).");

  m.def(
      "safeguarded_gamma",
      [](double safe, double fast) {
        const auto [gamma, branch] = safeguarded_gamma(safe, fast);
        return py::make_tuple(gamma, std::string(branch_name(branch)));
      },
      py::arg("gamma_safe"), py::arg("gamma_fast"),
      "min of the safeguard and oracle proposals plus the branch tag.");

  m.def(
      "fixed_point_residual",
      [](const Vector& s, const Vector& y, double gamma) {
        return fixed_point_residual(s, y, gamma);
      },
      py::arg("s"), py::arg("y"), py::arg("gamma"),
      "||s/gamma - y||, the optimality surrogate tracked by the solver.");

  m.def("solve", &solve_py, py::arg("family"), py::arg("rows") = 0, py::arg("cols") = 0,
        py::arg("seed") = 42, py::arg("rule") = "adapg", py::arg("pi") = 1.2,
        py::arg("nu") = py::none(), py::arg("memory") = 4, py::arg("gamma0") = 0.0,
        py::arg("tol") = 1e-10, py::arg("max_iters") = 100000,
        py::arg("lam") = py::none(), py::arg("sparsity") = 0.1, py::arg("noise") = 0.01,
        py::arg("cubic_m") = 0.01, py::arg("p") = 1.5,
        py::arg("aa_nu_mode") = "aggregate", py::arg("snapshots") = false,
        py::arg("x0") = py::none(), py::arg("data") = "", py::arg("check") = false,
        "Solve one problem instance (synthetic, or from a LIBSVM file via data=...) "
        "with one stepsize rule; check=True adds a certificate report against a "
        "tighter pre-solve.");

  m.attr("__version__") = "0.1.0";
  m.attr("RULES") = std::vector<std::string>{"adapg",    "bb-long", "bb-short",
                                             "martinez", "lnse",    "aa"};
  m.attr("FAMILIES") = std::vector<std::string>{"lasso", "logreg", "cubic", "pnorm"};
}
