#include "adaprox/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adaprox/diagnostics.hpp"
#include "adaprox/io.hpp"
#include "adaprox/problems.hpp"
#include "adaprox/solver.hpp"

namespace adaprox {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMaxIters = 2;

std::string fmt(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string fmt_short(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

/// Problem and solver flags shared by run/compare; values are merged over
/// a --spec file when one is given, explicit flags winning.
struct CommonFlags {
  std::string spec_path;
  std::string family;
  std::string data_path;
  std::string rule;
  std::string aa_nu_mode;
  std::optional<int> rows, cols, memory;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda, sparsity, noise, cubic_m, p;
  std::optional<double> pi, nu, gamma0, tol;
  std::optional<long> max_iters;
  bool snapshots = false;

  void add_to(CLI::App* cmd, bool with_rule) {
    cmd->add_option("--spec", spec_path, "JSON run configuration (flags override it)");
    cmd->add_option("--problem", family, "problem family: lasso | logreg | cubic | pnorm");
    cmd->add_option("--data", data_path, "LIBSVM dataset path (otherwise synthetic)");
    if (with_rule) {
      cmd->add_option("--rule", rule,
                      "stepsize rule: adapg | bb-long | bb-short | martinez | lnse | aa");
    }
    cmd->add_option("--rows", rows, "synthetic instance rows");
    cmd->add_option("--cols", cols, "synthetic instance cols");
    cmd->add_option("--seed", seed, "synthetic instance seed");
    cmd->add_option("--lambda", lambda, "l1 weight (default: family-specific)");
    cmd->add_option("--sparsity", sparsity, "planted-signal density");
    cmd->add_option("--noise", noise, "measurement noise scale");
    cmd->add_option("--cubic-m", cubic_m, "cubic regularization weight M");
    cmd->add_option("--p", p, "p-norm exponent in (1, 2]");
    cmd->add_option("--pi", pi, "safeguard parameter in [1, 2]");
    cmd->add_option("--nu", nu, "Holder exponent in (0, 1] (default: problem hint)");
    cmd->add_option("--memory", memory, "pair window m for the aa rule");
    cmd->add_option("--gamma0", gamma0, "initial stepsize (<= 0: automatic probe)");
    cmd->add_option("--tol", tol, "fixed-point residual tolerance");
    cmd->add_option("--max-iters", max_iters, "iteration cap");
    cmd->add_option("--aa-nu-mode", aa_nu_mode,
                    "nu < 1 averaging for aa: aggregate | per-pair");
    cmd->add_flag("--snapshots", snapshots, "record per-iteration iterates");
  }

  RunSpec to_spec() const {
    RunSpec spec;
    if (!spec_path.empty()) spec = read_run_spec_json(spec_path);
    if (!family.empty()) spec.family = family_from_name(family);
    if (!data_path.empty()) spec.data_path = data_path;
    if (!rule.empty()) spec.solver.rule = rule_from_name(rule);
    if (rows) spec.instance.rows = *rows;
    if (cols) spec.instance.cols = *cols;
    if (seed) spec.instance.seed = *seed;
    if (lambda) spec.instance.lambda = *lambda;
    if (sparsity) spec.instance.sparsity = *sparsity;
    if (noise) spec.instance.noise = *noise;
    if (cubic_m) spec.instance.cubic_m = *cubic_m;
    if (p) spec.instance.p = *p;
    if (pi) spec.solver.pi = *pi;
    if (nu) {
      spec.solver.nu = *nu;
      spec.nu_explicit = true;
    }
    if (memory) spec.solver.memory = *memory;
    if (gamma0) spec.solver.gamma0 = *gamma0;
    if (tol) spec.solver.tol = *tol;
    if (max_iters) spec.solver.max_iters = *max_iters;
    if (!aa_nu_mode.empty()) {
      if (aa_nu_mode == "aggregate") {
        spec.solver.aa_nu_mode = AaNuMode::Aggregate;
      } else if (aa_nu_mode == "per-pair") {
        spec.solver.aa_nu_mode = AaNuMode::PerPair;
      } else {
        throw ConfigError("--aa-nu-mode must be 'aggregate' or 'per-pair'");
      }
    }
    if (snapshots) {
      spec.snapshots = true;
      spec.solver.record_snapshots = true;
    }
    if (spec.data_path.empty() && (spec.instance.rows < 1 || spec.instance.cols < 1)) {
      throw ConfigError("synthetic instances need --rows and --cols (or a --spec/--data file)");
    }
    return spec;
  }
};

Trace solve_spec(const RunSpec& spec, const CompositeProblem& problem) {
  SolverConfig config = spec.solver;
  config.nu = effective_nu(spec, problem);
  return run(problem, config);
}

void print_run_summary(std::ostream& out, const Trace& trace) {
  const StepRecord* last = trace.records.empty() ? nullptr : &trace.records.back();
  out << "rule=" << trace.rule << " problem=" << trace.problem_id
      << " status=" << status_name(trace.status) << " iterations=" << trace.iterations()
      << " gradient_evals=" << trace.gradient_evals
      << " residual=" << fmt_short(last ? last->residual : kNaN)
      << " best_residual=" << fmt_short(last ? last->best_residual : kNaN)
      << " objective=" << fmt_short(trace.final_objective)
      << " gamma_cumavg=" << fmt_short(last ? last->gamma_cumavg : kNaN) << '\n';
}

int cmd_run(const CommonFlags& flags, const std::string& out_path,
            const std::string& optimum_out, std::ostream& out, std::ostream& err) {
  const RunSpec spec_base = flags.to_spec();
  RunSpec spec = spec_base;
  if (!out_path.empty()) spec.output_path = out_path;
  std::string warning;
  const CompositeProblem problem = instantiate_problem(spec, &warning);
  if (!warning.empty()) err << "warning: " << warning << '\n';

  const Trace trace = solve_spec(spec, problem);
  if (!spec.output_path.empty()) write_trace_csv(trace, spec.output_path);
  if (!optimum_out.empty()) {
    const ReferenceOptimum ref = presolve_reference(problem, spec.solver.tol);
    write_optimum_json(ref, optimum_out);
    long support = 0;
    for (Eigen::Index i = 0; i < ref.x.size(); ++i) support += ref.x[i] != 0.0;
    out << "optimum objective=" << fmt_short(ref.objective) << " support=" << support
        << " written to " << optimum_out << '\n';
  }
  print_run_summary(out, trace);
  return trace.status == TerminationStatus::Converged ? kExitOk : kExitMaxIters;
}

struct CompareResult {
  RuleKind rule;
  std::string error;
  Trace trace;
};

int cmd_compare(const CommonFlags& flags, std::vector<std::string> rule_names,
                const std::string& prefix, int parallel, std::ostream& out,
                std::ostream& err) {
  const RunSpec spec_base = flags.to_spec();
  std::string warning;
  const CompositeProblem problem = instantiate_problem(spec_base, &warning);
  if (!warning.empty()) err << "warning: " << warning << '\n';

  if (rule_names.empty()) {
    for (RuleKind rule : all_rules()) rule_names.push_back(rule_name(rule));
  }
  std::vector<CompareResult> results(rule_names.size());
  for (size_t i = 0; i < rule_names.size(); ++i) {
    results[i].rule = rule_from_name(rule_names[i]);
  }

  const int workers =
      std::max(1, std::min<int>(parallel, static_cast<int>(rule_names.size())));
  std::mutex next_mutex;
  size_t next = 0;
  auto worker = [&]() {
    for (;;) {
      size_t i;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= results.size()) return;
        i = next++;
      }
      try {
        RunSpec spec = spec_base;
        spec.solver.rule = results[i].rule;
        results[i].trace = solve_spec(spec, problem);
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  std::vector<double> decades;
  for (int d = 1; d <= 12; ++d) decades.push_back(std::pow(10.0, -d));

  const std::string summary_path = prefix + "_summary.csv";
  std::ofstream summary(summary_path);
  if (!summary) throw Error("cannot open '" + summary_path + "' for writing");
  summary << "rule,status,iterations,final_best_residual,final_objective";
  for (int d = 1; d <= 12; ++d) summary << ",evals_1e-" << d;
  summary << '\n';

  bool all_ok = true;
  for (CompareResult& result : results) {
    const char* name = rule_name(result.rule);
    if (!result.error.empty()) {
      all_ok = false;
      err << "rule " << name << " failed: " << result.error << '\n';
      summary << name << ",error,0,nan,nan";
      for (size_t d = 0; d < decades.size(); ++d) summary << ",-1";
      summary << '\n';
      continue;
    }
    const Trace& trace = result.trace;
    write_trace_csv(trace, prefix + "_" + name + ".csv");
    const double best =
        trace.records.empty() ? kNaN : trace.records.back().best_residual;
    summary << name << ','
            << (trace.status == TerminationStatus::Converged ? "converged" : "maxiter")
            << ',' << trace.iterations() << ',' << fmt(best) << ','
            << fmt(trace.final_objective);
    for (double threshold : decades) summary << ',' << evals_to_residual(trace, threshold);
    summary << '\n';
    out << "rule=" << name << " status="
        << (trace.status == TerminationStatus::Converged ? "converged" : "maxiter")
        << " iterations=" << trace.iterations() << " best_residual=" << fmt_short(best)
        << " objective=" << fmt_short(trace.final_objective) << '\n';
  }
  out << "summary written to " << summary_path << '\n';
  return all_ok ? kExitOk : kExitError;
}

int cmd_check(const std::string& trace_path, double pi, double nu,
              const std::string& optimum_path, bool want_lyapunov, bool as_json,
              std::ostream& out, std::ostream& err) {
  const Trace trace = read_trace_csv(trace_path);
  std::optional<ReferenceOptimum> ref;
  if (!optimum_path.empty()) ref = read_optimum_json(optimum_path);

  if (want_lyapunov) {
    if (!ref) {
      err << "error: the Lyapunov check needs --optimum <path>\n";
      return kExitError;
    }
    if (!trace.has_snapshots) {
      err << "error: the Lyapunov check needs iterate snapshots; rerun with --snapshots "
             "so '" << trace_path << ".snapshots' exists\n";
      return kExitError;
    }
  }

  const RecipeReport report = check_trace(trace, pi, nu, ref);
  const bool pass = report.passed();

  if (as_json) {
    nlohmann::json doc;
    doc["trace"] = trace_path;
    doc["rows"] = trace.iterations();
    doc["pi"] = pi;
    doc["nu"] = nu;
    doc["p1_min_slack"] = report.p1_min_slack;
    doc["p1_argmin"] = report.p1_argmin;
    doc["p2_min_slack"] = report.p2_min_slack;
    doc["p2_argmin"] = report.p2_argmin;
    doc["p3_empirical_lambda_min"] = report.p3_empirical_lambda_min;
    doc["p3_decrease_events"] = report.p3_decrease_events;
    doc["rate_checked"] = report.rate_checked;
    doc["rate_bound_holds"] = report.rate_bound_holds;
    doc["rate_worst_gap"] = report.rate_worst_gap;
    if (std::isfinite(report.rate_tail_slope)) {
      doc["rate_tail_slope"] = report.rate_tail_slope;
    }
    doc["lyapunov_checked"] = report.lyapunov_checked;
    doc["lyapunov_monotone"] = report.lyapunov_monotone;
    doc["lyapunov_worst_violation"] = report.lyapunov_worst_violation;
    doc["pass"] = pass;
    out << doc.dump(2) << '\n';
  } else {
    out << "rows=" << trace.iterations() << " pi=" << fmt_short(pi)
        << " nu=" << fmt_short(nu) << '\n';
    out << "P1 min slack " << fmt(report.p1_min_slack) << " at k=" << report.p1_argmin
        << (report.p1_min_slack >= -1e-12 ? " (pass)" : " (FAIL)") << '\n';
    out << "P2 min slack " << fmt(report.p2_min_slack) << " at k=" << report.p2_argmin
        << (report.p2_min_slack >= -1e-12 ? " (pass)" : " (FAIL)") << '\n';
    out << "P3 empirical lambda_min " << fmt(report.p3_empirical_lambda_min) << " over "
        << report.p3_decrease_events << " decrease events"
        << (report.p3_empirical_lambda_min > 0.0 ? " (pass)" : " (FAIL)") << '\n';
    if (report.rate_checked) {
      out << "rate bound worst gap " << fmt(report.rate_worst_gap)
          << (report.rate_bound_holds ? " (pass)" : " (FAIL)") << '\n';
      if (std::isfinite(report.rate_tail_slope)) {
        out << "rate tail slope " << fmt(report.rate_tail_slope) << '\n';
      }
    } else {
      out << "rate bound skipped (no --optimum)\n";
    }
    if (report.lyapunov_checked) {
      out << "Lyapunov worst violation " << fmt(report.lyapunov_worst_violation)
          << (report.lyapunov_monotone ? " (pass)" : " (FAIL)") << '\n';
    } else {
      out << "Lyapunov skipped (needs --optimum and snapshots)\n";
    }
    out << "verdict " << (pass ? "pass" : "FAIL") << '\n';
  }
  return pass ? kExitOk : kExitError;
}

int cmd_generate(const CommonFlags& flags, const std::string& out_path, std::ostream& out) {
  RunSpec spec = flags.to_spec();
  if (!spec.data_path.empty()) {
    throw ConfigError("generate builds synthetic instances; --data is not accepted");
  }
  if (out_path.empty()) throw ConfigError("generate needs --out <path>");
  if (spec.family == ProblemFamily::Logreg || spec.family == ProblemFamily::Cubic) {
    const ClassificationData data = make_classification_data(spec.instance);
    write_libsvm(data.a, data.labels, out_path);
    long pos = 0;
    for (Eigen::Index i = 0; i < data.labels.size(); ++i) pos += data.labels[i] > 0;
    out << "wrote " << data.a.rows() << "x" << data.a.cols() << " "
        << family_name(spec.family) << " instance (" << pos << " positive labels) to "
        << out_path << '\n';
  } else {
    const SyntheticData data = make_regression_data(spec.instance);
    write_libsvm(data.a, data.b, out_path);
    long planted = 0;
    for (Eigen::Index i = 0; i < data.x_true.size(); ++i) planted += data.x_true[i] != 0.0;
    out << "wrote " << data.a.rows() << "x" << data.a.cols() << " "
        << family_name(spec.family) << " instance (planted support " << planted
        << ") to " << out_path << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Safeguarded adaptive proximal-gradient benchmark"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string run_out, run_optimum_out;
  CLI::App* run_cmd = app.add_subcommand("run", "solve one problem with one rule");
  run_flags.add_to(run_cmd, true);
  run_cmd->add_option("--out", run_out, "trace CSV output path");
  run_cmd->add_option("--optimum-out", run_optimum_out,
                      "also pre-solve tighter and write the optimum as JSON");

  CommonFlags compare_flags;
  std::vector<std::string> compare_rules;
  std::string compare_prefix = "compare";
  int compare_parallel = 6;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run every rule on one problem and summarize");
  compare_flags.add_to(compare_cmd, false);
  compare_cmd->add_option("--rules", compare_rules, "subset of rules (default: all six)")
      ->delimiter(',');
  compare_cmd->add_option("--out-prefix", compare_prefix, "prefix for per-rule traces");
  compare_cmd->add_option("--parallel", compare_parallel, "max concurrent solves");

  std::string check_trace_path, check_optimum;
  double check_pi = 1.2;
  double check_nu = 1.0;
  bool check_lyapunov = false;
  bool check_json = false;
  CLI::App* check_cmd =
      app.add_subcommand("check", "verify certificate inequalities on a saved trace");
  check_cmd->add_option("--trace", check_trace_path, "trace CSV to verify")->required();
  check_cmd->add_option("--pi", check_pi, "safeguard parameter the trace was run with");
  check_cmd->add_option("--nu", check_nu, "Holder exponent the trace was run with");
  check_cmd->add_option("--optimum", check_optimum,
                        "reference optimum JSON enabling rate/Lyapunov checks");
  check_cmd->add_flag("--lyapunov", check_lyapunov,
                      "require the Lyapunov check (errors without snapshots)");
  check_cmd->add_flag("--json", check_json, "emit the report as JSON");

  CommonFlags generate_flags;
  std::string generate_out;
  CLI::App* generate_cmd =
      app.add_subcommand("generate", "write a synthetic instance as a LIBSVM file");
  generate_flags.add_to(generate_cmd, false);
  generate_cmd->add_option("--out", generate_out, "LIBSVM output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_flags, run_out, run_optimum_out, out, err);
    if (compare_cmd->parsed()) {
      return cmd_compare(compare_flags, compare_rules, compare_prefix, compare_parallel,
                         out, err);
    }
    if (check_cmd->parsed()) {
      return cmd_check(check_trace_path, check_pi, check_nu, check_optimum,
                       check_lyapunov, check_json, out, err);
    }
    if (generate_cmd->parsed()) return cmd_generate(generate_flags, generate_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  err << "error: no subcommand selected\n";
  return kExitError;
}

}  // namespace adaprox
