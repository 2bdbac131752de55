#pragma once

#include <stdexcept>
#include <string>

namespace eeio {

enum class ErrorCode {
  // ingest
  MalformedHeader,
  SchemaVersionMismatch,
  DuplicateCode,
  EmptyClassification,
  NonNumericCell,
  NegativeCell,
  UnknownUnit,
  NegativeAmount,
  DuplicateRecord,
  WeightSumViolation,
  OrphanFineCode,
  DuplicateFineCode,
  DuplicateIndicator,
  UnknownLevel,
  EmptyCharacterization,
  IncompleteLevel,
  MissingFile,
  // assemble
  ZeroOutputSector,
  NonProductive,
  AxisMismatch,
  MissingConcordanceEntry,
  DivisionByZeroOutput,
  ValidationFailed,
  // solve / analyze
  SingularSystem,
  UnknownSector,
  UnknownScope,
  DegenerateX,
  TooFewPoints,
  ZeroPopulation,
  AllZero,
};

const char* to_string(ErrorCode code);

/// Returns the process exit code for an error: 2 for input/validation
/// failures, 1 for runtime/numeric failures.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eeio
