#pragma once

// Error taxonomy for the ncm library.
//
// Every failure the library can diagnose is thrown as an ncm::Error carrying a
// stable machine-readable code (used by the CLI to pick exit codes) plus a
// human-readable message with a concrete witness where one exists.

#include <stdexcept>
#include <string>

namespace ncm {

enum class ErrorCode {
  BadField,          // characteristic is not 0 or a prime
  BadDimension,      // malformed shapes / out-of-range indices
  NotAssociative,    // structure constants fail associativity (witness triple)
  UnitNotTwoSided,   // claimed unit is not a two-sided unit
  NotAMap,           // matrix is not multiplicative/unital/module-linear
  NotIdempotent,     // element fails e*e = e
  NotNilpotent,      // ideal fails to be nilpotent
  NotSurjective,     // map expected to be onto is not
  NotAComplex,       // differentials do not square to zero
  NotChainMap,       // levelwise maps fail to commute with differentials
  NotEquivalence,    // morphism expected to be a quasi-isomorphism is not
  AlgebraMismatch,   // operands live over different algebras
  SourceMismatch,    // morphism source disagrees with the expected object
  KernelNotSquareZero, // kernel of the surjection fails I*I = 0
  HypothesisUnmet,   // flag-guarded precondition not established
  GeneratorsNotStable, // presented cosimplicial input leaves the covered class
  BudgetExceeded,    // enumeration walked past its node budget
  ParseError,        // malformed input file
  Unsupported,       // operation outside the implemented fragment
  InvariantViolation // internal cross-check failed (always a bug if thrown)
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::BadField: return "BadField";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::NotAssociative: return "NotAssociative";
    case ErrorCode::UnitNotTwoSided: return "UnitNotTwoSided";
    case ErrorCode::NotAMap: return "NotAMap";
    case ErrorCode::NotIdempotent: return "NotIdempotent";
    case ErrorCode::NotNilpotent: return "NotNilpotent";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::NotAComplex: return "NotAComplex";
    case ErrorCode::NotChainMap: return "NotChainMap";
    case ErrorCode::NotEquivalence: return "NotEquivalence";
    case ErrorCode::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorCode::SourceMismatch: return "SourceMismatch";
    case ErrorCode::KernelNotSquareZero: return "KernelNotSquareZero";
    case ErrorCode::HypothesisUnmet: return "HypothesisUnmet";
    case ErrorCode::GeneratorsNotStable: return "GeneratorsNotStable";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool ok, ErrorCode code, const std::string& message) {
  if (!ok) fail(code, message);
}

}  // namespace ncm
