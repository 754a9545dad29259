#include "core/error.hpp"

namespace tomgen {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidFlow: return "invalid-flow";
    case ErrorCode::InvalidOrder: return "invalid-order";
    case ErrorCode::ClosureViolation: return "closure-violation";
    case ErrorCode::SelectionOutOfBlock: return "selection-out-of-block";
    case ErrorCode::CapExceedsPopulation: return "cap-exceeds-population";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::IoError: return "io-error";
    case ErrorCode::MissingPrediction: return "missing-prediction";
    case ErrorCode::DuplicatePrediction: return "duplicate-prediction";
    case ErrorCode::UnknownContainer: return "unknown-container";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace tomgen
