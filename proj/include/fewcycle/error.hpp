#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fewcycle {

enum class ErrorCode {
  InvalidArgument,
  GridTooCoarse,
  Overflow,
  WrongEnvelope,
  StepLimitExceeded,
  NormDrift,
  NotConverged,
  Diverged,
  NearSingularArea,
  GridMismatch,
  ZeroNorm,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::WrongEnvelope: return "WrongEnvelope";
    case ErrorCode::StepLimitExceeded: return "StepLimitExceeded";
    case ErrorCode::NormDrift: return "NormDrift";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::NearSingularArea: return "NearSingularArea";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
  }
  return "Unknown";
}

/// Error raised by every numerical routine in the library. The code is the
/// stable, machine-readable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fewcycle
