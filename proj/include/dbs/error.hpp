#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dbs {

enum class ErrorKind {
  NonDivisiblePhase,
  PeriodTooShort,
  InvalidArgument,
  Divergence,
  LengthMismatch,
  NotPowerOfTwo,
  SegmentTooLong,
  NoPulses,
  UnknownArm,
  InsufficientData,
  LastArm,
  ConfigError,
  IoError,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonDivisiblePhase: return "NonDivisiblePhase";
    case ErrorKind::PeriodTooShort: return "PeriodTooShort";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Divergence: return "Divergence";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorKind::SegmentTooLong: return "SegmentTooLong";
    case ErrorKind::NoPulses: return "NoPulses";
    case ErrorKind::UnknownArm: return "UnknownArm";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::LastArm: return "LastArm";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dbs
