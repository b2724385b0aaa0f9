#include "adaprox/solver.hpp"

#include <algorithm>
#include <cmath>

#include "adaprox/estimates.hpp"

namespace adaprox {

namespace {

void validate(const SolverConfig& config, const CompositeProblem& problem) {
  if (!(config.pi >= 1.0 && config.pi <= 2.0)) {
    throw ConfigError("pi must lie in [1, 2]");
  }
  if (!(config.nu > 0.0 && config.nu <= 1.0)) {
    throw ConfigError("nu must lie in (0, 1]");
  }
  if (config.memory < 1) throw ConfigError("memory must be >= 1");
  if (!(config.tol >= 0.0)) throw ConfigError("tol must be >= 0");
  if (config.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (problem.dimension <= 0) throw ConfigError("problem dimension must be positive");
  if (config.x0 && config.x0->size() != problem.dimension) {
    throw DimensionError("initial point size does not match problem dimension");
  }
}

}  // namespace

double adapg_candidate(double gamma_k, double gamma_prev, double ell, double big_l,
                       double pi) {
  const double growth = gamma_k * std::sqrt(1.0 / pi + gamma_k / gamma_prev);
  const double bracket =
      gamma_k * gamma_k * big_l * big_l - (2.0 - pi) * gamma_k * ell + 1.0 - pi;
  if (bracket <= 0.0) return growth;
  return std::min(growth, gamma_k / std::sqrt(2.0 * bracket));
}

std::pair<double, Branch> safeguarded_gamma(double gamma_safe, double gamma_fast) {
  if (gamma_fast < gamma_safe) return {gamma_fast, Branch::Fast};
  if (gamma_safe < gamma_fast) return {gamma_safe, Branch::Safe};
  return {gamma_safe, Branch::Tie};
}

Vector prox_gradient_step(const CompositeProblem& problem, const Vector& x,
                          const Vector& gradient, double gamma) {
  return problem.prox(x - gamma * gradient, gamma);
}

double fixed_point_residual(const Vector& s, const Vector& y, double gamma) {
  return (s / gamma - y).norm();
}

double auto_initial_stepsize(const CompositeProblem& problem, const Vector& x0) {
  const Vector g0 = problem.smooth_gradient(x0);
  const double g0_norm = g0.norm();
  if (!(g0_norm > 0.0) || !std::isfinite(g0_norm)) return 1e-2;
  const double eps = 1e-6 * (1.0 + x0.norm());
  const Vector ge = problem.smooth_gradient(x0 - eps * g0);
  const double denom = (g0 - ge).norm();
  if (!(denom > 0.0) || !std::isfinite(denom)) return 1e-2;
  return eps * g0_norm / denom;
}

Trace run(const CompositeProblem& problem, const SolverConfig& config) {
  validate(config, problem);

  Trace trace;
  trace.problem_id = problem.name;
  trace.rule = rule_name(config.rule);
  trace.pi = config.pi;
  trace.nu = config.nu;
  trace.tol = config.tol;
  trace.has_snapshots = config.record_snapshots;

  Vector x_prev = config.x0 ? *config.x0 : Vector(Vector::Zero(problem.dimension));
  Vector grad_prev = problem.smooth_gradient(x_prev);
  if (!x_prev.allFinite() || !grad_prev.allFinite()) {
    throw NonFiniteIterateError("initial point or its gradient is not finite");
  }
  trace.x0 = x_prev;
  trace.phi0 = problem.objective(x_prev);

  const double gamma0 =
      config.gamma0 > 0.0 ? config.gamma0 : auto_initial_stepsize(problem, x_prev);
  // gamma_{-1} := gamma_0, so the first ratio rho_1 is 1.
  double gamma_prev = gamma0;
  double gamma_curr = gamma0;

  PairHistory history(config.memory);
  Branch branch = Branch::Init;  // how gamma_curr was chosen
  double best_residual = kInf;
  double gamma_sum = 0.0;
  trace.status = TerminationStatus::MaxIterations;
  trace.records.reserve(static_cast<size_t>(std::min<long>(config.max_iters, 1 << 20)));

  for (long k = 1; k <= config.max_iters; ++k) {
    const double gamma = gamma_curr;
    Vector x = prox_gradient_step(problem, x_prev, grad_prev, gamma);
    if (!x.allFinite()) {
      throw NonFiniteIterateError("iterate " + std::to_string(k) + " is not finite");
    }
    const Vector s = x - x_prev;

    StepRecord rec;
    rec.k = k;
    rec.gamma = gamma;
    rec.rho = gamma / gamma_prev;
    gamma_sum += gamma;
    rec.gamma_cumavg = gamma_sum / static_cast<double>(k);
    rec.branch = branch;
    if (config.record_snapshots) rec.snapshot = x;

    if (s.norm() == 0.0) {
      // Proximal fixed point: optimal for convex objectives.
      rec.residual = 0.0;
      rec.best_residual = 0.0;
      rec.objective = problem.objective(x);
      rec.step_norm = 0.0;
      trace.records.push_back(std::move(rec));
      if (k == 1) trace.x1 = x;
      trace.x_final = x;
      trace.final_objective = trace.records.back().objective;
      trace.status = TerminationStatus::Converged;
      break;
    }

    Vector grad = problem.smooth_gradient(x);
    if (!grad.allFinite()) {
      throw NonFiniteIterateError("gradient at iterate " + std::to_string(k) +
                                  " is not finite");
    }
    const Vector y = grad - grad_prev;
    const LocalEstimates est = local_estimates(s, y, gamma, config.nu);
    const double residual = fixed_point_residual(s, y, gamma);
    best_residual = std::min(best_residual, residual);

    rec.ell = est.ell;
    rec.big_l = est.big_l;
    rec.c = est.c;
    rec.residual = residual;
    rec.best_residual = best_residual;
    rec.objective = problem.objective(x);
    rec.step_norm = est.step_norm;

    const double gamma_safe =
        adapg_candidate(gamma, gamma_prev, est.ell, est.big_l, config.pi);
    history.push(s, y, gamma);
    const double gamma_fast =
        propose_fast(config.rule, history, est, gamma, config.nu, config.aa_nu_mode);
    history.record_bb(bb_long(est), bb_short(est, config.nu));
    rec.gamma_safe = gamma_safe;
    rec.gamma_fast = gamma_fast;
    trace.records.push_back(std::move(rec));
    if (k == 1) trace.x1 = x;

    if (residual <= config.tol) {
      trace.x_final = x;
      trace.final_objective = trace.records.back().objective;
      trace.status = TerminationStatus::Converged;
      break;
    }

    const auto [gamma_next, next_branch] = safeguarded_gamma(gamma_safe, gamma_fast);
    branch = next_branch;
    gamma_prev = gamma;
    gamma_curr = gamma_next;
    x_prev = std::move(x);
    grad_prev = std::move(grad);
  }

  if (trace.status == TerminationStatus::MaxIterations && !trace.records.empty()) {
    trace.x_final = x_prev;
    trace.final_objective = trace.records.back().objective;
  }
  trace.gradient_evals = trace.iterations();
  return trace;
}

}  // namespace adaprox
