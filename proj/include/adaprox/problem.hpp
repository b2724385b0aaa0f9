#pragma once

#include <functional>
#include <string>

#include "adaprox/types.hpp"

namespace adaprox {

/// Composite objective phi = f + g given through four oracles: value and
/// gradient of the smooth part f, value and proximal mapping of the
/// nonsmooth part g.  All oracles must be safe for concurrent read-only
/// evaluation.
struct CompositeProblem {
  std::function<double(const Vector&)> smooth_value;
  std::function<Vector(const Vector&)> smooth_gradient;
  /// May return +inf outside dom g.
  std::function<double(const Vector&)> nonsmooth_value;
  /// prox(x, gamma) minimizes w -> g(w) + ||w - x||^2 / (2 gamma).
  std::function<Vector(const Vector&, double)> prox;
  int dimension = 0;
  /// Holder exponent nu in (0, 1] declared by the problem; 1 = Lipschitz.
  double holder_exponent_hint = 1.0;
  std::string name;

  double objective(const Vector& x) const { return smooth_value(x) + nonsmooth_value(x); }
};

}  // namespace adaprox
