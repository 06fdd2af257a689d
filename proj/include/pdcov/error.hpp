#pragma once

#include <stdexcept>
#include <string>

namespace pdcov {

enum class ErrorKind {
  NonFinite,
  DivByZero,
  DimMismatch,
  InvalidArgument,
  NewtonFailed,
  TooFewSamples,
  ZeroVariance,
  NotCorrelation,
  NotPsd,
  BadDim,
  ZeroTruth,
  Parse,
  Io,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` lets callers
// branch without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DivByZero: return "DivByZero";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NewtonFailed: return "NewtonFailed";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::NotCorrelation: return "NotCorrelation";
    case ErrorKind::NotPsd: return "NotPsd";
    case ErrorKind::BadDim: return "BadDim";
    case ErrorKind::ZeroTruth: return "ZeroTruth";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace pdcov
