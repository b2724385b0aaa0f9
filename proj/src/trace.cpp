#include "adaprox/trace.hpp"

namespace adaprox {

const StepRecord& Trace::row(long k) const {
  if (k < 1 || k > iterations()) {
    throw DimensionError("trace row " + std::to_string(k) + " out of range 1.." +
                         std::to_string(iterations()));
  }
  return records[static_cast<size_t>(k - 1)];
}

}  // namespace adaprox
