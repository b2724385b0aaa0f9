#pragma once

#include "adaprox/types.hpp"

namespace adaprox {

/// Local curvature estimates of the smooth part over one displacement /
/// gradient-difference pair (s, y), together with their Holder-scaled
/// counterparts.  With d = ||s||:
///   ell = <y,s> / d^2,  L = ||y|| / d,  c = ||y||^2 / <y,s>,
///   scaled_ell = ell d^(1-nu),  scaled_big_l = L d^(1-nu),
///   scaled_lambda = gamma / d^(1-nu).
/// c is +inf when <y,s> = 0.  For finite positive c the chain
/// ell <= L <= c and the identity ell * c = L^2 hold.
struct LocalEstimates {
  double ell = 0.0;
  double big_l = 0.0;
  double c = kInf;
  double step_norm = 0.0;
  double scaled_ell = 0.0;
  double scaled_big_l = 0.0;
  double scaled_lambda = 0.0;
};

/// Throws ZeroStepError when ||s|| = 0; the caller must treat the iterate
/// as a proximal fixed point.
LocalEstimates local_estimates(const Vector& s, const Vector& y, double gamma, double nu);

}  // namespace adaprox
