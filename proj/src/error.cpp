#include "bcml/error.hpp"

namespace bcml {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NonPrime: return "NonPrime";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::NonUnit: return "NonUnit";
    case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::DivisionNotExact: return "DivisionNotExact";
    case ErrorKind::NotOnVariety: return "NotOnVariety";
    case ErrorKind::AllCoefficientsIndistinguishableFromZero:
      return "AllCoefficientsIndistinguishableFromZero";
    case ErrorKind::UncertifiedRegion: return "UncertifiedRegion";
    case ErrorKind::BadReduction: return "BadReduction";
    case ErrorKind::LatticeMismatch: return "LatticeMismatch";
    case ErrorKind::AtPrecisionZero: return "AtPrecisionZero";
    case ErrorKind::NotInHolomorphicPlusP: return "NotInHolomorphicPlusP";
    case ErrorKind::RangeNotCertified: return "RangeNotCertified";
    case ErrorKind::UnsupportedDisc: return "UnsupportedDisc";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::NotIndependent: return "NotIndependent";
    case ErrorKind::DegenerateRankLocus: return "DegenerateRankLocus";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::NonPrime:
    case ErrorKind::ContextMismatch:
      return 1;
    case ErrorKind::NonUnit:
    case ErrorKind::NotOnVariety:
    case ErrorKind::BadReduction:
    case ErrorKind::LatticeMismatch:
    case ErrorKind::NotInHolomorphicPlusP:
    case ErrorKind::UnsupportedDisc:
    case ErrorKind::HypothesisViolated:
    case ErrorKind::NotIndependent:
    case ErrorKind::DegenerateRankLocus:
      return 2;
    case ErrorKind::InsufficientPrecision:
    case ErrorKind::PrecisionExhausted:
    case ErrorKind::AllCoefficientsIndistinguishableFromZero:
    case ErrorKind::UncertifiedRegion:
    case ErrorKind::AtPrecisionZero:
    case ErrorKind::RangeNotCertified:
      return 3;
    case ErrorKind::DivisionNotExact:
      return 4;
  }
  return 4;
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace bcml
