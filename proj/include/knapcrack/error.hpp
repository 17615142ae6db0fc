#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace knapcrack {

enum class ErrorCode {
  DependentColumns,
  IndexOutOfRange,
  InvalidAlpha,
  DimensionMismatch,
  InvalidInstance,
  RankDeficient,
  EscalationExhausted,
  SingularE,
  InvalidN,
  InvalidBigInts,
  InvalidParams,
  InvalidRow,
  SizeLimit,
  NotASolution,
  NotNeighbours,
  GenerationBudgetExceeded,
  TooLarge,
  ParseError,
  IoFailure,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (CLI exit codes, tests) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace knapcrack
