#pragma once

#include <stdexcept>
#include <string>

namespace spartlab {

/// Failure categories. Each maps to one CLI exit code.
enum class ErrorKind {
  kValidation,  // bad input or violated precondition
  kPrecision,   // certification failed at the maximum working precision
  kHypothesis,  // a theorem hypothesis does not hold for the input
  kEffortCap,   // factoring gave up under the configured effort
  kInternal,    // an invariant that is a theorem was violated
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::kValidation, what) {}
};

class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& what)
      : Error(ErrorKind::kPrecision, what) {}
};

class HypothesisError : public Error {
 public:
  explicit HypothesisError(const std::string& what)
      : Error(ErrorKind::kHypothesis, what) {}
};

class EffortCapError : public Error {
 public:
  explicit EffortCapError(const std::string& what)
      : Error(ErrorKind::kEffortCap, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what)
      : Error(ErrorKind::kInternal, what) {}
};

/// 0 success, 2 config/validation, 3 precision, 4 hypothesis, 5 effort cap.
int exit_code(ErrorKind kind) noexcept;

}  // namespace spartlab
