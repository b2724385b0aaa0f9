#include "adaprox/problems.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <vector>

namespace adaprox {

namespace {

// Deterministic scalar generator: fixed uniform-to-double mapping and a
// hand-rolled Box-Muller transform so instances are bit-stable across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

Vector planted_signal(Rng& rng, int cols, double sparsity) {
  const int nnz = std::max(1, static_cast<int>(std::lround(sparsity * cols)));
  std::vector<int> idx(static_cast<size_t>(cols));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = cols - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.raw() % static_cast<std::uint64_t>(i + 1));
    std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
  }
  Vector x = Vector::Zero(cols);
  for (int i = 0; i < nnz && i < cols; ++i) {
    x[idx[static_cast<size_t>(i)]] = rng.normal();
  }
  return x;
}

Matrix normal_matrix(Rng& rng, int rows, int cols) {
  Matrix a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = rng.normal();
  }
  return a;
}

void check_design(const InstanceParams& params) {
  if (params.rows < 1 || params.cols < 1) {
    throw ConfigError("instance needs positive rows and cols");
  }
}

double resolve_lambda(ProblemFamily family, double lambda, int rows) {
  if (!std::isnan(lambda)) {
    if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
    return lambda;
  }
  switch (family) {
    case ProblemFamily::Lasso:
      return 0.1;
    case ProblemFamily::Logreg:
      return 0.1 / static_cast<double>(rows);
    default:
      return 0.0;
  }
}

Vector soft_threshold(const Vector& v, double threshold) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double vi = v[i];
    if (vi > threshold) {
      out[i] = vi - threshold;
    } else if (vi < -threshold) {
      out[i] = vi + threshold;
    } else {
      out[i] = 0.0;
    }
  }
  return out;
}

void attach_l1(CompositeProblem& problem, double lambda) {
  problem.nonsmooth_value = [lambda](const Vector& x) { return lambda * x.lpNorm<1>(); };
  problem.prox = [lambda](const Vector& x, double gamma) {
    return soft_threshold(x, gamma * lambda);
  };
}

// sigma(-m) = 1 / (1 + e^m), computed without overflow on either tail.
double sigma_neg(double m) {
  if (m >= 0.0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

// log(1 + e^{-m}) without overflow on either tail.
double softplus_neg(double m) {
  if (m >= 0.0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

}  // namespace

SyntheticData make_regression_data(const InstanceParams& params) {
  check_design(params);
  Rng rng(params.seed);
  SyntheticData data;
  data.a = normal_matrix(rng, params.rows, params.cols);
  data.x_true = planted_signal(rng, params.cols, params.sparsity);
  data.b = data.a * data.x_true;
  for (Eigen::Index i = 0; i < data.b.size(); ++i) {
    data.b[i] += params.noise * rng.normal();
  }
  return data;
}

ClassificationData make_classification_data(const InstanceParams& params) {
  check_design(params);
  Rng rng(params.seed);
  ClassificationData data;
  data.a = normal_matrix(rng, params.rows, params.cols);
  data.x_true = planted_signal(rng, params.cols, params.sparsity);
  const Vector margins = data.a * data.x_true;
  data.labels = Vector(params.rows);
  for (int i = 0; i < params.rows; ++i) {
    const double prob_pos = 1.0 - sigma_neg(-margins[i]);  // sigma(margin)
    data.labels[i] = rng.uniform() < prob_pos ? 1.0 : -1.0;
  }
  return data;
}

CompositeProblem make_lasso(const Matrix& a, const Vector& b, double lambda) {
  if (a.rows() != b.size()) throw DimensionError("design rows and target size differ");
  lambda = resolve_lambda(ProblemFamily::Lasso, lambda, static_cast<int>(a.rows()));
  auto a_ptr = std::make_shared<const Matrix>(a);
  auto b_ptr = std::make_shared<const Vector>(b);
  CompositeProblem problem;
  problem.dimension = static_cast<int>(a.cols());
  problem.holder_exponent_hint = 1.0;
  problem.name = "lasso";
  problem.smooth_value = [a_ptr, b_ptr](const Vector& x) {
    return 0.5 * (*a_ptr * x - *b_ptr).squaredNorm();
  };
  problem.smooth_gradient = [a_ptr, b_ptr](const Vector& x) {
    return Vector(a_ptr->transpose() * (*a_ptr * x - *b_ptr));
  };
  attach_l1(problem, lambda);
  return problem;
}

CompositeProblem make_lasso(const InstanceParams& params) {
  const SyntheticData data = make_regression_data(params);
  return make_lasso(data.a, data.b,
                    resolve_lambda(ProblemFamily::Lasso, params.lambda, params.rows));
}

CompositeProblem make_logistic(const Matrix& a, const Vector& labels, double lambda) {
  if (a.rows() != labels.size()) throw DimensionError("design rows and label size differ");
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) {
      throw ConfigError("logistic labels must be -1 or +1");
    }
  }
  lambda = resolve_lambda(ProblemFamily::Logreg, lambda, static_cast<int>(a.rows()));
  auto a_ptr = std::make_shared<const Matrix>(a);
  auto b_ptr = std::make_shared<const Vector>(labels);
  CompositeProblem problem;
  problem.dimension = static_cast<int>(a.cols());
  problem.holder_exponent_hint = 1.0;
  problem.name = "logreg";
  problem.smooth_value = [a_ptr, b_ptr](const Vector& x) {
    const Vector margins = (*a_ptr * x).cwiseProduct(*b_ptr);
    double value = 0.0;
    for (Eigen::Index i = 0; i < margins.size(); ++i) value += softplus_neg(margins[i]);
    return value;
  };
  problem.smooth_gradient = [a_ptr, b_ptr](const Vector& x) {
    const Vector margins = (*a_ptr * x).cwiseProduct(*b_ptr);
    Vector weights(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
      weights[i] = -(*b_ptr)[i] * sigma_neg(margins[i]);
    }
    return Vector(a_ptr->transpose() * weights);
  };
  attach_l1(problem, lambda);
  return problem;
}

CompositeProblem make_logistic(const InstanceParams& params) {
  const ClassificationData data = make_classification_data(params);
  return make_logistic(data.a, data.labels,
                       resolve_lambda(ProblemFamily::Logreg, params.lambda, params.rows));
}

CompositeProblem make_cubic(const Matrix& h, const Vector& bvec, double m_weight) {
  if (h.rows() != h.cols()) throw DimensionError("cubic model matrix must be square");
  if (h.rows() != bvec.size()) throw DimensionError("cubic model matrix and vector sizes differ");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ConfigError("cubic model matrix must be symmetric");
  }
  if (!(m_weight > 0.0)) throw ConfigError("cubic weight M must be positive");
  auto h_ptr = std::make_shared<const Matrix>(h);
  auto b_ptr = std::make_shared<const Vector>(bvec);
  CompositeProblem problem;
  problem.dimension = static_cast<int>(h.rows());
  problem.holder_exponent_hint = 1.0;
  problem.name = "cubic";
  problem.smooth_value = [h_ptr, b_ptr, m_weight](const Vector& x) {
    const double norm = x.norm();
    return b_ptr->dot(x) + 0.5 * x.dot(*h_ptr * x) + m_weight / 6.0 * norm * norm * norm;
  };
  problem.smooth_gradient = [h_ptr, b_ptr, m_weight](const Vector& x) {
    return Vector(*b_ptr + *h_ptr * x + (m_weight / 2.0) * x.norm() * x);
  };
  problem.nonsmooth_value = [](const Vector&) { return 0.0; };
  problem.prox = [](const Vector& x, double) { return x; };
  return problem;
}

CompositeProblem make_cubic(const InstanceParams& params) {
  const ClassificationData data = make_classification_data(params);
  // Hessian and gradient of the unregularized logistic loss at zero.
  const Matrix h = 0.25 * (data.a.transpose() * data.a);
  const Vector bvec = -0.5 * (data.a.transpose() * data.labels);
  return make_cubic(h, bvec, params.cubic_m);
}

CompositeProblem make_pnorm(const Matrix& a, const Vector& b, double p, double lambda) {
  if (a.rows() != b.size()) throw DimensionError("design rows and target size differ");
  if (!(p > 1.0 && p <= 2.0)) throw ConfigError("p must lie in (1, 2]");
  if (p == 2.0) {
    // Exact specialization: identical oracles to the quadratic loss.
    CompositeProblem problem = make_lasso(a, b, std::isnan(lambda) ? 0.0 : lambda);
    problem.name = "pnorm";
    return problem;
  }
  lambda = resolve_lambda(ProblemFamily::Pnorm, lambda, static_cast<int>(a.rows()));
  auto a_ptr = std::make_shared<const Matrix>(a);
  auto b_ptr = std::make_shared<const Vector>(b);
  CompositeProblem problem;
  problem.dimension = static_cast<int>(a.cols());
  problem.holder_exponent_hint = p - 1.0;
  problem.name = "pnorm";
  problem.smooth_value = [a_ptr, b_ptr, p](const Vector& x) {
    const Vector r = *a_ptr * x - *b_ptr;
    double value = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) value += std::pow(std::abs(r[i]), p);
    return value / p;
  };
  problem.smooth_gradient = [a_ptr, b_ptr, p](const Vector& x) {
    const Vector r = *a_ptr * x - *b_ptr;
    Vector w(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double ri = r[i];
      w[i] = ri == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(ri), p - 1.0), ri);
    }
    return Vector(a_ptr->transpose() * w);
  };
  attach_l1(problem, lambda);
  return problem;
}

CompositeProblem make_pnorm(const InstanceParams& params) {
  const SyntheticData data = make_regression_data(params);
  return make_pnorm(data.a, data.b, params.p,
                    resolve_lambda(ProblemFamily::Pnorm, params.lambda, params.rows));
}

ProblemFamily family_from_name(const std::string& name) {
  if (name == "lasso") return ProblemFamily::Lasso;
  if (name == "logreg") return ProblemFamily::Logreg;
  if (name == "cubic") return ProblemFamily::Cubic;
  if (name == "pnorm") return ProblemFamily::Pnorm;
  throw ConfigError("unknown problem family '" + name +
                    "' (expected lasso, logreg, cubic, or pnorm)");
}

const char* family_name(ProblemFamily family) {
  switch (family) {
    case ProblemFamily::Lasso:
      return "lasso";
    case ProblemFamily::Logreg:
      return "logreg";
    case ProblemFamily::Cubic:
      return "cubic";
    case ProblemFamily::Pnorm:
      return "pnorm";
  }
  return "lasso";
}

double effective_lambda(ProblemFamily family, const InstanceParams& params) {
  return resolve_lambda(family, params.lambda, params.rows);
}

CompositeProblem make_problem(ProblemFamily family, const InstanceParams& params) {
  switch (family) {
    case ProblemFamily::Lasso:
      return make_lasso(params);
    case ProblemFamily::Logreg:
      return make_logistic(params);
    case ProblemFamily::Cubic:
      return make_cubic(params);
    case ProblemFamily::Pnorm:
      return make_pnorm(params);
  }
  throw ConfigError("unhandled problem family");
}

}  // namespace adaprox
