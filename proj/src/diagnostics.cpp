#include "adaprox/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace adaprox {

namespace {

void need_rows(const Trace& trace, long n) {
  if (trace.iterations() < n) {
    throw InsufficientTraceError("trace has " + std::to_string(trace.iterations()) +
                                 " rows, need at least " + std::to_string(n));
  }
}

// ||s^j|| for rows j = 1..N, from step norms when recorded, snapshot
// differences otherwise; identically 1 when nu = 1 (the exponent 1 - nu
// removes the dependence).
std::vector<double> step_norms_for_p3(const Trace& trace, double nu) {
  const long n = trace.iterations();
  std::vector<double> norms(static_cast<size_t>(n), 1.0);
  if (nu == 1.0) return norms;
  for (long j = 1; j <= n; ++j) {
    const StepRecord& rec = trace.row(j);
    if (std::isfinite(rec.step_norm)) {
      norms[static_cast<size_t>(j - 1)] = rec.step_norm;
    } else if (rec.snapshot && (j == 1 ? trace.x0.size() > 0 : bool(trace.row(j - 1).snapshot))) {
      const Vector& prev = j == 1 ? trace.x0 : *trace.row(j - 1).snapshot;
      norms[static_cast<size_t>(j - 1)] = (*rec.snapshot - prev).norm();
    } else {
      throw MissingIteratesError(
          "step norms unavailable for the stepsize lower-bound scan with nu < 1; "
          "rerun with snapshots");
    }
  }
  return norms;
}

}  // namespace

std::vector<double> p1_slacks(const Trace& trace, double pi) {
  const long n = trace.iterations();
  std::vector<double> slacks;
  if (n < 2) return slacks;
  slacks.reserve(static_cast<size_t>(n - 1));
  for (long k = 1; k < n; ++k) {
    const double rho_k = trace.row(k).rho;
    const double rho_next = trace.row(k + 1).rho;
    slacks.push_back(1.0 + pi * rho_k - pi * rho_next * rho_next);
  }
  return slacks;
}

std::vector<double> p2_slacks(const Trace& trace, double pi) {
  const long n = trace.iterations();
  std::vector<double> slacks;
  if (n < 2) return slacks;
  slacks.reserve(static_cast<size_t>(n - 1));
  for (long k = 1; k < n; ++k) {
    const StepRecord& cur = trace.row(k);
    const double rho_next = trace.row(k + 1).rho;
    const double bracket = cur.gamma * cur.gamma * cur.big_l * cur.big_l -
                           (2.0 - pi) * cur.gamma * cur.ell + 1.0 - pi;
    slacks.push_back(0.5 - rho_next * rho_next * bracket);
  }
  return slacks;
}

RecipeReport check_recipe(const Trace& trace, double pi, double nu) {
  need_rows(trace, 2);
  RecipeReport report;

  const std::vector<double> p1 = p1_slacks(trace, pi);
  const std::vector<double> p2 = p2_slacks(trace, pi);
  for (size_t i = 0; i < p1.size(); ++i) {
    if (p1[i] < report.p1_min_slack) {
      report.p1_min_slack = p1[i];
      report.p1_argmin = static_cast<long>(i) + 1;
    }
    if (p2[i] < report.p2_min_slack) {
      report.p2_min_slack = p2[i];
      report.p2_argmin = static_cast<long>(i) + 1;
    }
  }

  const long n = trace.iterations();
  std::vector<double> weights;  // ||s^j||^(nu - 1), so larger is better
  weights.reserve(static_cast<size_t>(n));
  std::vector<double> norms = step_norms_for_p3(trace, nu);
  for (double d : norms) {
    weights.push_back(nu == 1.0 ? 1.0 : std::pow(d, nu - 1.0));
  }

  for (long k = 1; k < n; ++k) {
    const double gamma_next = trace.row(k + 1).gamma;
    if (gamma_next >= trace.row(k).gamma) continue;
    ++report.p3_decrease_events;
    double witness = 0.0;
    for (long j = 1; j <= k; ++j) {
      const double floor_j =
          std::min(trace.row(j).gamma, gamma_next) * weights[static_cast<size_t>(j - 1)];
      witness = std::max(witness, floor_j);
    }
    report.p3_empirical_lambda_min = std::min(report.p3_empirical_lambda_min, witness);
  }
  return report;
}

ReferenceOptimum presolve_reference(const CompositeProblem& problem, double tol,
                                    double tol_scale, long max_iters) {
  SolverConfig config;
  config.rule = RuleKind::Anderson;
  config.nu = problem.holder_exponent_hint;
  config.tol = tol * tol_scale;
  config.max_iters = max_iters;
  const Trace trace = run(problem, config);
  ReferenceOptimum ref;
  ref.x = trace.x_final;
  ref.objective = trace.final_objective;
  return ref;
}

std::vector<double> lyapunov_sequence(const Trace& trace, const ReferenceOptimum& ref,
                                      double pi) {
  need_rows(trace, 1);
  const long n = trace.iterations();
  if (trace.x0.size() == 0) throw MissingIteratesError("trace has no initial point");
  std::vector<double> u;
  u.reserve(static_cast<size_t>(n));
  const Vector* prev = &trace.x0;
  double phi_prev = trace.phi0;
  for (long k = 1; k <= n; ++k) {
    const StepRecord& rec = trace.row(k);
    if (!rec.snapshot) {
      throw MissingIteratesError("iterate snapshots required for the Lyapunov sequence");
    }
    const Vector& xk = *rec.snapshot;
    const double value = 0.5 * (xk - ref.x).squaredNorm() +
                         0.5 * (xk - *prev).squaredNorm() +
                         rec.gamma * (1.0 + pi * rec.rho) * (phi_prev - ref.objective);
    u.push_back(value);
    prev = &xk;
    phi_prev = rec.objective;
  }
  return u;
}

double lyapunov_u1(const Trace& trace, const ReferenceOptimum& ref, double pi) {
  need_rows(trace, 1);
  if (trace.x0.size() == 0 || trace.x1.size() == 0) {
    throw MissingIteratesError("trace lacks the stored x0/x1 pair");
  }
  const StepRecord& rec = trace.row(1);
  return 0.5 * (trace.x1 - ref.x).squaredNorm() +
         0.5 * (trace.x1 - trace.x0).squaredNorm() +
         rec.gamma * (1.0 + pi * rec.rho) * (trace.phi0 - ref.objective);
}

RateReport check_rate_bounds(const Trace& trace, double u1, double phi_star, double nu) {
  need_rows(trace, 2);
  RateReport report;
  report.u1 = u1;
  report.expected_exponent = -nu;

  const long n = trace.iterations();
  double gamma_sum = trace.row(1).gamma;
  double p_min = kInf;
  std::vector<double> ks;
  std::vector<double> values;
  ks.reserve(static_cast<size_t>(n - 1));
  values.reserve(static_cast<size_t>(n - 1));
  for (long big_k = 1; big_k < n; ++big_k) {
    p_min = std::min(p_min, trace.row(big_k).objective - phi_star);
    gamma_sum += trace.row(big_k + 1).gamma;
    const double gap = p_min * gamma_sum - u1;
    if (gap > report.worst_gap) {
      report.worst_gap = gap;
      report.worst_k = big_k;
    }
    if (p_min > 0.0) {
      ks.push_back(static_cast<double>(big_k));
      values.push_back(p_min);
    }
  }
  report.holds = report.worst_gap <= 1e-9 * std::max(u1, 0.0) + 1e-18;

  // Slope over the trailing two decades of K.
  if (!ks.empty()) {
    const double k_hi = ks.back();
    std::vector<double> tail_k;
    std::vector<double> tail_v;
    for (size_t i = 0; i < ks.size(); ++i) {
      if (ks[i] >= k_hi / 100.0) {
        tail_k.push_back(ks[i]);
        tail_v.push_back(values[i]);
      }
    }
    report.tail_slope = loglog_slope(tail_k, tail_v);
  }
  return report;
}

double loglog_slope(const std::vector<double>& ks, const std::vector<double>& values) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long n = 0;
  for (size_t i = 0; i < ks.size() && i < values.size(); ++i) {
    if (!(ks[i] > 0.0) || !(values[i] > 0.0)) continue;
    const double lx = std::log(ks[i]);
    const double ly = std::log(values[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return kNaN;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return kNaN;
  return (n * sxy - sx * sy) / denom;
}

long evals_to_residual(const Trace& trace, double threshold) {
  for (const StepRecord& rec : trace.records) {
    if (rec.best_residual <= threshold) return rec.k;
  }
  return -1;
}

RecipeReport check_trace(const Trace& trace, double pi, double nu,
                         const std::optional<ReferenceOptimum>& ref) {
  RecipeReport report = check_recipe(trace, pi, nu);
  if (!ref) return report;

  const double u1 = lyapunov_u1(trace, *ref, pi);
  const RateReport rate = check_rate_bounds(trace, u1, ref->objective, nu);
  report.rate_checked = true;
  report.rate_bound_holds = rate.holds;
  report.rate_worst_gap = rate.worst_gap;
  report.rate_tail_slope = rate.tail_slope;

  const bool snapshots_complete =
      trace.iterations() > 0 && bool(trace.row(trace.iterations()).snapshot) &&
      bool(trace.row(1).snapshot);
  if (snapshots_complete) {
    const std::vector<double> u = lyapunov_sequence(trace, *ref, pi);
    report.lyapunov_checked = true;
    report.lyapunov_monotone = true;
    double worst = -kInf;
    for (size_t i = 0; i + 1 < u.size(); ++i) {
      const double violation = u[i + 1] - u[i] - 1e-9 * (1.0 + u[i]);
      worst = std::max(worst, violation);
      if (violation > 0.0) report.lyapunov_monotone = false;
    }
    report.lyapunov_worst_violation = u.size() > 1 ? worst : 0.0;
  }
  return report;
}

}  // namespace adaprox
