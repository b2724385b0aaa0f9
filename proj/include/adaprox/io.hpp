#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "adaprox/diagnostics.hpp"
#include "adaprox/problems.hpp"
#include "adaprox/solver.hpp"
#include "adaprox/trace.hpp"
#include "adaprox/types.hpp"

namespace adaprox {

/// Trace CSV schema, one row per iteration k = 1..N:
///   k,gamma,rho,ell,L,c,residual,best_residual,objective,gamma_cumavg,branch
/// Values are written with 17 significant digits; non-finite values as
/// "inf", "-inf", "nan"; branch as init|safe|fast|tie.
extern const char* const kTraceCsvHeader;

void write_trace_csv(const Trace& trace, const std::string& path);
void write_trace_csv(const Trace& trace, std::ostream& out);

/// Reads a trace CSV back into records; metadata fields that are not part
/// of the CSV (x0, x1, snapshots) stay empty unless the companion snapshot
/// file <path>.snapshots exists, in which case it is loaded too.
Trace read_trace_csv(const std::string& path);

/// Companion snapshot file: header k,objective,x0,...,x{n-1}; row k = 0
/// carries the initial point, rows 1..N the iterates.
void write_snapshots_csv(const Trace& trace, const std::string& path);
void read_snapshots_csv(Trace& trace, const std::string& path);

/// LIBSVM format: one sample per line,
///   <label> <index>:<value> <index>:<value> ...
/// with 1-based, strictly increasing indices; '#' starts a comment.
/// Dimensions are inferred from the largest index.
struct LibsvmData {
  Matrix a;
  Vector labels;
};

LibsvmData read_libsvm(const std::string& path);
LibsvmData read_libsvm(std::istream& in, const std::string& origin = "<stream>");
void write_libsvm(const Matrix& a, const Vector& labels, const std::string& path);

/// Reference optimum JSON: {"objective": <phi*>, "x": [...]}.
void write_optimum_json(const ReferenceOptimum& ref, const std::string& path);
ReferenceOptimum read_optimum_json(const std::string& path);

/// Run configuration, loadable from JSON.  Unknown keys are rejected with
/// their full path so typos fail loudly.
struct RunSpec {
  ProblemFamily family = ProblemFamily::Lasso;
  std::string data_path;   // LIBSVM file; empty means synthetic
  InstanceParams instance;
  SolverConfig solver;
  bool nu_explicit = false;  // config pinned nu; otherwise inherit the
                             // problem family's Holder hint
  std::string output_path;
  bool snapshots = false;
  int parallel_runs = 1;
};

RunSpec read_run_spec_json(const std::string& path);
RunSpec parse_run_spec_json(const std::string& text, const std::string& origin);

/// Builds the problem named by the spec, loading data when a path is given.
/// Logistic labels outside {-1, +1} are remapped (minimum label to -1, the
/// rest to +1); when that happens and warning is non-null, it receives a
/// printable note.
CompositeProblem instantiate_problem(const RunSpec& spec, std::string* warning = nullptr);

/// Effective Holder exponent for the run: the configured nu when pinned,
/// otherwise the problem's hint.
double effective_nu(const RunSpec& spec, const CompositeProblem& problem);

}  // namespace adaprox
