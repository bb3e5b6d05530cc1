#pragma once

#include <stdexcept>
#include <string>

namespace linkguard {

enum class ErrorCode {
  DimensionMismatch,
  InvalidInput,
  NotHurwitz,
  SingularSolve,
  NotStabilizing,
  RiccatiFailure,
  LostStabilizability,
  MaxIterations,
  LineSearchFailure,
  PatternNotStabilizable,
  EmptySweep,
  InvalidAssumption,
  IndexOutOfRange,
  InfeasibleOutcome,
  UnknownFormat,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (notably the CLI) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace linkguard
