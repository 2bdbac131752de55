#include "eeio/errors.hpp"

namespace eeio {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::DuplicateCode: return "DuplicateCode";
    case ErrorCode::EmptyClassification: return "EmptyClassification";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::NegativeCell: return "NegativeCell";
    case ErrorCode::UnknownUnit: return "UnknownUnit";
    case ErrorCode::NegativeAmount: return "NegativeAmount";
    case ErrorCode::DuplicateRecord: return "DuplicateRecord";
    case ErrorCode::WeightSumViolation: return "WeightSumViolation";
    case ErrorCode::OrphanFineCode: return "OrphanFineCode";
    case ErrorCode::DuplicateFineCode: return "DuplicateFineCode";
    case ErrorCode::DuplicateIndicator: return "DuplicateIndicator";
    case ErrorCode::UnknownLevel: return "UnknownLevel";
    case ErrorCode::EmptyCharacterization: return "EmptyCharacterization";
    case ErrorCode::IncompleteLevel: return "IncompleteLevel";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::ZeroOutputSector: return "ZeroOutputSector";
    case ErrorCode::NonProductive: return "NonProductive";
    case ErrorCode::AxisMismatch: return "AxisMismatch";
    case ErrorCode::MissingConcordanceEntry: return "MissingConcordanceEntry";
    case ErrorCode::DivisionByZeroOutput: return "DivisionByZeroOutput";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::UnknownSector: return "UnknownSector";
    case ErrorCode::UnknownScope: return "UnknownScope";
    case ErrorCode::DegenerateX: return "DegenerateX";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::ZeroPopulation: return "ZeroPopulation";
    case ErrorCode::AllZero: return "AllZero";
  }
  return "UnknownError";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularSystem:
      return 1;
    default:
      return 2;
  }
}

}  // namespace eeio
