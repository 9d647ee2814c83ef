#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mub {

enum class ErrorKind {
  OutOfRegion,
  ConstructionFailure,
  SigmaZero,
  DimensionTooLarge,
  NotRepresentable,
  WrongSource,
  DimensionMismatch,
  ModeMismatch,
  ResourceBudgetExceeded,
  NotZeroDimensional,
  PrecisionExhausted,
  Undecidable,
  UndecidablePair,
  NoConvergence,
  IOFailure,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` carries the error class so
/// callers (the sweep harness in particular) can record failures by class.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mub
