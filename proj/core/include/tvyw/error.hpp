#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tvyw {

enum class ErrorCode {
  InvalidArgument,
  ZeroTaper,
  NumericalSingularity,
  DimensionMismatch,
  WindowOutOfRange,
  OddBandwidth,
  InvalidPacf,
  NonFiniteSample,
  DegenerateRegression,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

//! Single exception type for the library; callers branch on code().
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what)
    , code_(code)
  {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline std::string_view
to_string(ErrorCode code) noexcept
{
  switch (code) {
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
    case ErrorCode::ZeroTaper:
      return "ZeroTaper";
    case ErrorCode::NumericalSingularity:
      return "NumericalSingularity";
    case ErrorCode::DimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::WindowOutOfRange:
      return "WindowOutOfRange";
    case ErrorCode::OddBandwidth:
      return "OddBandwidth";
    case ErrorCode::InvalidPacf:
      return "InvalidPacf";
    case ErrorCode::NonFiniteSample:
      return "NonFiniteSample";
    case ErrorCode::DegenerateRegression:
      return "DegenerateRegression";
    case ErrorCode::ConfigError:
      return "ConfigError";
  }
  return "Unknown";
}

} // namespace tvyw
