#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tomgen {

enum class ErrorCode {
  InvalidConfig,
  InvalidArgument,
  InvalidFlow,
  InvalidOrder,
  ClosureViolation,
  SelectionOutOfBlock,
  CapExceedsPopulation,
  ParseError,
  IoError,
  MissingPrediction,
  DuplicatePrediction,
  UnknownContainer,
  Internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace tomgen
