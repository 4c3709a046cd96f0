#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace diffgram {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the offending
/// token in the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Invalid or inconsistent system specification document.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Arithmetic failure during expression evaluation (division by zero,
/// unbound variable).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Operation requires a model component that is absent (typically the
/// feedback k) or the model dimensions are inconsistent.
class ModelError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  enum class Kind { kBlowUp, kStepUnderflow, kMaxSteps };

  IntegrationError(Kind kind, double time, const std::string& message)
      : Error(message), kind_(kind), time_(time) {}

  Kind kind() const { return kind_; }
  /// Time at which the integrator gave up (the escape time for blow-ups).
  double time() const { return time_; }

 private:
  Kind kind_;
  double time_;
};

/// An improper integral did not settle after the maximum number of horizon
/// doublings; the integrand does not decay.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, double horizon)
      : Error(message), horizon_(horizon) {}

  double horizon() const { return horizon_; }

 private:
  double horizon_;
};

/// An extrapolation table failed to settle within tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace diffgram
