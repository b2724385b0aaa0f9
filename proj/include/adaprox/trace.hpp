#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adaprox/types.hpp"

namespace adaprox {

/// Per-iteration record.  Row k describes iterate x^k: the stepsize that
/// produced it, the local curvature estimates of the pair (s^k, y^k), the
/// fixed-point residual, and which safeguard branch chose gamma_k.
struct StepRecord {
  long k = 0;
  double gamma = 0.0;
  double rho = 0.0;  // gamma_k / gamma_{k-1}
  double ell = kNaN;
  double big_l = kNaN;
  double c = kNaN;
  double residual = kNaN;
  double best_residual = kNaN;
  double objective = kNaN;
  double gamma_cumavg = 0.0;
  Branch branch = Branch::Init;

  // In-memory extras, not serialized to CSV.
  double step_norm = kNaN;      // ||x^k - x^(k-1)||
  double gamma_safe = kInf;     // safeguard candidate for gamma_{k+1}
  double gamma_fast = kInf;     // oracle candidate for gamma_{k+1}
  std::optional<Vector> snapshot;  // x^k when snapshot recording is on
};

/// Full run history, sufficient to recompute the certificate checks.
struct Trace {
  std::string problem_id;
  std::string rule;
  double pi = 1.2;
  double nu = 1.0;
  double tol = 1e-10;
  TerminationStatus status = TerminationStatus::MaxIterations;
  long gradient_evals = 0;

  Vector x0;
  double phi0 = kNaN;  // objective at x^0
  Vector x1;           // first iterate, needed for the Lyapunov seed
  Vector x_final;
  double final_objective = kNaN;

  std::vector<StepRecord> records;  // records[i] holds row k = i + 1
  bool has_snapshots = false;

  long iterations() const { return static_cast<long>(records.size()); }
  const StepRecord& row(long k) const;  // 1-based, throws DimensionError
};

}  // namespace adaprox
