#pragma once

#include <stdexcept>
#include <string>

namespace logbn {

enum class ErrorKind {
  usage,
  degenerate_domain,
  shape,
  io,
  invalid_field,
  convergence,
  bracket,
  scaling,
  accuracy,
  resolution,
  regime,
};

/// Every failure raised by the library carries a kind; the CLI maps kinds to
/// exit codes (see exit_code).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(ErrorKind::convergence, what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

// 0 ok, 2 usage, 3 convergence, 4 numerical accuracy, 5 regime
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage:
    case ErrorKind::degenerate_domain:
    case ErrorKind::shape:
    case ErrorKind::io:
      return 2;
    case ErrorKind::convergence:
    case ErrorKind::bracket:
    case ErrorKind::scaling:
      return 3;
    case ErrorKind::invalid_field:
    case ErrorKind::accuracy:
    case ErrorKind::resolution:
      return 4;
    case ErrorKind::regime:
      return 5;
  }
  return 1;
}

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::degenerate_domain: return "degenerate-domain";
    case ErrorKind::shape: return "shape";
    case ErrorKind::io: return "io";
    case ErrorKind::invalid_field: return "invalid-field";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::bracket: return "bracket";
    case ErrorKind::scaling: return "scaling";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::regime: return "regime";
  }
  return "unknown";
}

}  // namespace logbn
