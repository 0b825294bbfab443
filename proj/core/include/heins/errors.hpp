#pragma once

#include <stdexcept>
#include <string>

namespace heins {

/// Error categories. The numeric value is the process exit code used by the CLI.
enum class ErrorKind : int {
  usage = 1,
  geometry = 2,
  numeric = 3,
  precondition = 4,
  invariant = 5,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::invariant: return "invariant";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};
struct GeometryError : Error {
  explicit GeometryError(const std::string& what) : Error(ErrorKind::geometry, what) {}
};
struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};
/// Raised when an operation's input lies outside its stated domain
/// (also used for arguments like z = 0 that the geometry excludes).
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::precondition, what) {}
};
struct InvariantViolation : Error {
  explicit InvariantViolation(const std::string& what) : Error(ErrorKind::invariant, what) {}
};

}  // namespace heins
