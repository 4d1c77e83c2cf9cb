#pragma once

#include <stdexcept>
#include <string>

namespace knt {

// Broad failure category carried by every library exception so callers can
// branch on the class of problem without parsing messages.
enum class ErrorKind {
  InvalidData,      // malformed input (asymmetric gram, NaNs, too few rows)
  InvalidArgument,  // out-of-range configuration value
  Parameter,        // invalid distribution parameter (non-PSD covariance, ...)
  Precondition,     // mathematical precondition violated (e.g. eigenvalue >= 1)
  RankDeficiency,   // requested rank exceeds the positive spectrum
  Representation,   // object not representable in the chosen coordinates
  SingularOperator, // shifted operator not invertible
  Numerical,        // numeric breakdown (value far below a clamp tolerance)
  DegenerateData,   // data carries no usable variation
  Unsupported,      // configuration outside the supported envelope
  Io,               // file parsing / serialization failure
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidData: return "invalid data";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Parameter: return "invalid parameter";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::RankDeficiency: return "rank deficiency";
    case ErrorKind::Representation: return "unrepresentable value";
    case ErrorKind::SingularOperator: return "singular operator";
    case ErrorKind::Numerical: return "numerical breakdown";
    case ErrorKind::DegenerateData: return "degenerate data";
    case ErrorKind::Unsupported: return "unsupported configuration";
    case ErrorKind::Io: return "i/o failure";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace knt
