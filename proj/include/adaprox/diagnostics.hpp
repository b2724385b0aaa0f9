#pragma once

#include <optional>
#include <vector>

#include "adaprox/problem.hpp"
#include "adaprox/solver.hpp"
#include "adaprox/trace.hpp"
#include "adaprox/types.hpp"

namespace adaprox {

/// Slack of the stepsize-ratio condition 1 + pi rho_k - pi rho_{k+1}^2 for
/// each consecutive row pair; all entries must be >= 0 (up to round-off)
/// for the convergence guarantee to apply.
std::vector<double> p1_slacks(const Trace& trace, double pi);

/// Slack of the curvature condition
/// 1/2 - rho_{k+1}^2 [gamma_k^2 L_k^2 - (2-pi) gamma_k ell_k + 1 - pi]
/// for each consecutive row pair.
std::vector<double> p2_slacks(const Trace& trace, double pi);

struct ReferenceOptimum {
  Vector x;
  double objective = kNaN;
};

struct RecipeReport {
  double p1_min_slack = kInf;
  double p2_min_slack = kInf;
  long p1_argmin = -1;  // row k achieving the minimum, -1 when empty
  long p2_argmin = -1;
  /// Empirical constant for the stepsize lower-bound condition: over every
  /// iteration where the stepsize decreased, the best historical floor
  /// max_j min{gamma_j, gamma_{k+1}} / ||s^j||^(1-nu).  +inf when the
  /// stepsize never decreased.
  double p3_empirical_lambda_min = kInf;
  long p3_decrease_events = 0;

  // Filled by check_trace when a reference optimum (and, for the Lyapunov
  // part, iterate snapshots) is available.
  bool lyapunov_checked = false;
  bool lyapunov_monotone = false;
  double lyapunov_worst_violation = 0.0;  // max of U_{k+1} - U_k - slack_k
  bool rate_checked = false;
  bool rate_bound_holds = false;
  double rate_worst_gap = -kInf;   // max_K P_K^min sum gamma - U_1
  double rate_tail_slope = kNaN;   // log-log decay of P_K^min, trailing decades

  bool passed() const {
    return p1_min_slack >= -1e-12 && p2_min_slack >= -1e-12 &&
           p3_empirical_lambda_min > 0.0 &&
           (!lyapunov_checked || lyapunov_monotone) &&
           (!rate_checked || rate_bound_holds);
  }
};

/// Verifies the certificate inequalities on a finished trace.  Uses
/// in-memory step norms when present, snapshot differences otherwise;
/// with nu = 1 the step norms drop out of the lower-bound scan entirely.
RecipeReport check_recipe(const Trace& trace, double pi, double nu);

/// check_recipe plus the Lyapunov and rate-bound checks against a
/// reference optimum; the Lyapunov part needs snapshots and is skipped
/// (lyapunov_checked = false) when they are absent.
RecipeReport check_trace(const Trace& trace, double pi, double nu,
                         const std::optional<ReferenceOptimum>& ref);

/// Solves the problem to a tolerance tol_scale times tighter than tol to
/// serve as the reference optimum for the Lyapunov and rate checks.
ReferenceOptimum presolve_reference(const CompositeProblem& problem, double tol,
                                    double tol_scale = 0.01, long max_iters = 1000000);

/// U_k = 0.5 ||x^k - x*||^2 + 0.5 ||x^k - x^(k-1)||^2
///       + gamma_k (1 + pi rho_k) (phi(x^(k-1)) - phi(x*)), k = 1..N.
/// Requires snapshots (the stored x0/x1 pair covers only k = 1).
std::vector<double> lyapunov_sequence(const Trace& trace, const ReferenceOptimum& ref,
                                      double pi);

/// U_1 alone, computable without snapshots from the stored x0/x1 pair.
double lyapunov_u1(const Trace& trace, const ReferenceOptimum& ref, double pi);

struct RateReport {
  /// max over K of P_K^min * sum_{k<=K+1} gamma_k - U_1; the bound holds
  /// when this stays <= 1e-9 * U_1.
  double worst_gap = -kInf;
  long worst_k = -1;
  double u1 = kNaN;
  bool holds = false;
  /// Log-log slope of K -> P_K^min over the trailing two decades of K,
  /// to compare against the expected exponent -nu.
  double tail_slope = kNaN;
  double expected_exponent = kNaN;
};

/// Checks P_K^min <= U_1 / sum_{k=1}^{K+1} gamma_k for every K = 1..N-1.
RateReport check_rate_bounds(const Trace& trace, double u1, double phi_star, double nu);

/// Least-squares slope of log(values) against log(ks); NaN with < 2
/// usable (positive) points.
double loglog_slope(const std::vector<double>& ks, const std::vector<double>& values);

/// First iteration k with best_residual <= threshold, or -1 if the trace
/// never reaches it.  Gradient evaluations equal the iteration count.
long evals_to_residual(const Trace& trace, double threshold);

}  // namespace adaprox
