#include "adaprox/types.hpp"

namespace adaprox {

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::Init:
      return "init";
    case Branch::Safe:
      return "safe";
    case Branch::Fast:
      return "fast";
    case Branch::Tie:
      return "tie";
  }
  return "init";
}

Branch branch_from_name(const std::string& name) {
  if (name == "init") return Branch::Init;
  if (name == "safe") return Branch::Safe;
  if (name == "fast") return Branch::Fast;
  if (name == "tie") return Branch::Tie;
  throw ConfigError("unknown branch tag '" + name + "'");
}

const char* status_name(TerminationStatus s) {
  return s == TerminationStatus::Converged ? "converged" : "max_iterations";
}

}  // namespace adaprox
