#pragma once

#include <cstdint>
#include <string>

#include "adaprox/problem.hpp"
#include "adaprox/types.hpp"

namespace adaprox {

/// Synthetic instance parameters shared by the generators.  rows/cols are
/// the design matrix shape; seed drives a deterministic generator so the
/// same parameters always produce the same instance.  lambda = NaN selects
/// the family default: 0.1 for lasso, 0.1/rows for logistic, 0 for p-norm.
struct InstanceParams {
  int rows = 0;
  int cols = 0;
  std::uint64_t seed = 42;
  double sparsity = 0.1;   // fraction of nonzeros in the planted signal
  double noise = 0.01;     // measurement noise scale
  double lambda = kNaN;    // l1 weight
  double cubic_m = 0.01;   // cubic-regularization weight M
  double p = 1.5;          // exponent of the p-norm residual loss
};

/// Dense design matrix with i.i.d. standard normal entries and a planted
/// sparse signal; b = A x_true + noise.  Deterministic in (rows, cols, seed).
struct SyntheticData {
  Matrix a;
  Vector b;
  Vector x_true;
};

SyntheticData make_regression_data(const InstanceParams& params);

/// Labels in {-1, +1} drawn from the logistic model at the planted signal.
struct ClassificationData {
  Matrix a;
  Vector labels;
  Vector x_true;
};

ClassificationData make_classification_data(const InstanceParams& params);

/// f(x) = 0.5 ||Ax - b||^2, g = lambda ||.||_1 with soft-threshold prox.
CompositeProblem make_lasso(const Matrix& a, const Vector& b, double lambda);
CompositeProblem make_lasso(const InstanceParams& params);

/// l1-regularized logistic loss over labels in {-1, +1}:
/// f(x) = sum_i log(1 + exp(-b_i <a_i, x>)), g = lambda ||.||_1.
/// Uses log1p / logistic-sigmoid forms that stay finite for large margins.
CompositeProblem make_logistic(const Matrix& a, const Vector& labels, double lambda);
CompositeProblem make_logistic(const InstanceParams& params);

/// Cubic-regularized model
/// f(x) = <bvec, x> + 0.5 <Hx, x> + (M/6) ||x||^3,
/// grad f(x) = bvec + Hx + (M/2) ||x|| x, g = 0.
CompositeProblem make_cubic(const Matrix& h, const Vector& bvec, double m_weight);
/// Convenience builder: H and bvec are the Hessian A^T A / 4 and gradient
/// -A^T labels / 2 of the logistic loss at zero.
CompositeProblem make_cubic(const InstanceParams& params);

/// f(x) = (1/p) sum_i |<a_i, x> - b_i|^p with 1 < p <= 2, g = lambda ||.||_1.
/// The gradient is Holder continuous with exponent nu = p - 1; p = 2
/// reduces exactly to the lasso objective.
CompositeProblem make_pnorm(const Matrix& a, const Vector& b, double p, double lambda);
CompositeProblem make_pnorm(const InstanceParams& params);

/// Family selector, matching the CLI strings lasso | logreg | cubic | pnorm.
enum class ProblemFamily { Lasso, Logreg, Cubic, Pnorm };

ProblemFamily family_from_name(const std::string& name);
const char* family_name(ProblemFamily family);

/// The l1 weight actually applied for a family given the params.
double effective_lambda(ProblemFamily family, const InstanceParams& params);

CompositeProblem make_problem(ProblemFamily family, const InstanceParams& params);

}  // namespace adaprox
