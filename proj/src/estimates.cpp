#include "adaprox/estimates.hpp"

#include <cmath>

namespace adaprox {

LocalEstimates local_estimates(const Vector& s, const Vector& y, double gamma, double nu) {
  if (s.size() != y.size()) {
    throw DimensionError("displacement and gradient difference sizes differ");
  }
  const double norm_s = s.norm();
  if (norm_s == 0.0) {
    throw ZeroStepError("zero displacement: iterate is a proximal fixed point");
  }
  const double norm_y = y.norm();
  const double dot_sy = y.dot(s);

  LocalEstimates est;
  est.step_norm = norm_s;
  est.ell = dot_sy / (norm_s * norm_s);
  est.big_l = norm_y / norm_s;
  est.c = dot_sy == 0.0 ? kInf : norm_y * norm_y / dot_sy;

  // d^(1-nu) = 1 exactly when nu = 1, so the scaled quantities reduce to
  // the plain ones without a floating-point detour.
  const double scale = nu == 1.0 ? 1.0 : std::pow(norm_s, 1.0 - nu);
  est.scaled_ell = est.ell * scale;
  est.scaled_big_l = est.big_l * scale;
  est.scaled_lambda = gamma / scale;
  return est;
}

}  // namespace adaprox
