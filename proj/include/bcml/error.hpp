#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bcml {

enum class ErrorKind {
  InvalidInput,
  NonPrime,
  ContextMismatch,
  NonUnit,
  InsufficientPrecision,
  PrecisionExhausted,
  DivisionNotExact,
  NotOnVariety,
  AllCoefficientsIndistinguishableFromZero,
  UncertifiedRegion,
  BadReduction,
  LatticeMismatch,
  AtPrecisionZero,
  NotInHolomorphicPlusP,
  RangeNotCertified,
  UnsupportedDisc,
  HypothesisViolated,
  NotIndependent,
  DegenerateRankLocus,
};

std::string_view to_string(ErrorKind kind);

/// Process exit status for a failure of the given kind:
/// 1 input/parse, 2 mathematical hypothesis, 3 precision, 4 internal.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace bcml
