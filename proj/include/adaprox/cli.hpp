#pragma once

#include <iosfwd>

namespace adaprox {

/// Entry point for the command-line tool.  Subcommands:
///   run       solve one problem with one rule, write a trace CSV
///   compare   run every rule on the same instance, write a summary table
///   check     verify the certificate inequalities on a saved trace
///   generate  emit a synthetic instance as a LIBSVM file
/// Returns 0 on success/convergence, 1 on error, 2 when the iteration
/// budget ran out before the tolerance was met.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace adaprox
