#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace adaprox {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The displacement between consecutive iterates is exactly zero; the
/// iterate is a fixed point of the proximal-gradient map.
struct ZeroStepError : Error {
  using Error::Error;
};

/// An iterate acquired a non-finite coordinate (divergence or a bad oracle).
struct NonFiniteIterateError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(long line_number, const std::string& reason)
      : Error("parse error at line " + std::to_string(line_number) + ": " + reason),
        line(line_number) {}
  long line;
};

struct InsufficientTraceError : Error {
  using Error::Error;
};

struct MissingIteratesError : Error {
  using Error::Error;
};

struct MissingOptimumError : Error {
  using Error::Error;
};

/// Which side of the safeguard produced a stepsize.
enum class Branch { Init, Safe, Fast, Tie };

const char* branch_name(Branch b);
Branch branch_from_name(const std::string& name);

enum class TerminationStatus { Converged, MaxIterations };

const char* status_name(TerminationStatus s);

}  // namespace adaprox
