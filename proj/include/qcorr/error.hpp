// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

enum class ErrorCode {
  NonHermitianInput,
  ConvergenceFailure,
  DimensionMismatch,
  DimensionOverflow,
  InvalidDensityMatrix,
  NotHermitian,
  NotUnitTrace,
  NotPositive,
  NotUnitary,
  InvalidRank,
  InvalidCoefficients,
  InvalidArgument,
  ParseError,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::InvalidDensityMatrix: return "InvalidDensityMatrix";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotUnitTrace: return "NotUnitTrace";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::InvalidCoefficients: return "InvalidCoefficients";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// All library failures are reported through this type. The message names
// the violated precondition and, where it applies, the measured violation
// magnitude.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }
  const char* code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace qcorr
