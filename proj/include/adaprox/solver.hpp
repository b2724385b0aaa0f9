#pragma once

#include <optional>
#include <utility>

#include "adaprox/problem.hpp"
#include "adaprox/stepsizes.hpp"
#include "adaprox/trace.hpp"
#include "adaprox/types.hpp"

namespace adaprox {

struct SolverConfig {
  RuleKind rule = RuleKind::AdaPG;
  double pi = 1.2;
  double nu = 1.0;           // Holder exponent used for scaling
  int memory = 4;            // window m for the Anderson rule
  double gamma0 = 0.0;       // <= 0 requests the automatic probe
  double tol = 1e-10;        // on the fixed-point residual
  long max_iters = 100000;
  AaNuMode aa_nu_mode = AaNuMode::Aggregate;
  bool record_snapshots = false;
  std::optional<Vector> x0;  // defaults to the zero vector
};

/// Plain adaptive stepsize candidate: the smaller of the growth bound
///   gamma_k sqrt(1/pi + rho_k)
/// and the curvature bound
///   gamma_k / sqrt(2 [gamma_k^2 L^2 - (2-pi) gamma_k ell + 1 - pi]_+),
/// where the second term is +inf when the bracket clips to zero.
double adapg_candidate(double gamma_k, double gamma_prev, double ell, double big_l, double pi);

/// min{gamma_safe, gamma_fast} with the branch tag: Safe when the safeguard
/// is strictly smaller, Fast when the oracle is, Tie on exact equality.
std::pair<double, Branch> safeguarded_gamma(double gamma_safe, double gamma_fast);

/// x_next = prox_{gamma g}(x - gamma grad_f(x)).
Vector prox_gradient_step(const CompositeProblem& problem, const Vector& x,
                          const Vector& gradient, double gamma);

/// ||s/gamma - y|| for s = x_next - x, y = grad_next - grad.
double fixed_point_residual(const Vector& s, const Vector& y, double gamma);

/// Probes the gradient at x0 and at a small perturbation along it to seed
/// gamma_0 near 1/L locally; falls back to 1e-2 on degenerate problems.
double auto_initial_stepsize(const CompositeProblem& problem, const Vector& x0);

/// Runs the safeguarded adaptive proximal-gradient iteration until the
/// fixed-point residual drops below tol or max_iters is reached.
Trace run(const CompositeProblem& problem, const SolverConfig& config);

}  // namespace adaprox
