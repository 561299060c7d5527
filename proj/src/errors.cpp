// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#include "nvcavity/errors.hpp"

namespace nvcavity {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::InvalidCombination: return "InvalidCombination";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoPeakFound: return "NoPeakFound";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotConverged:
    case ErrorCode::IllConditioned:
    case ErrorCode::NoPeakFound:
      return 3;
    case ErrorCode::IoError:
      return 4;
    default:
      return 2;
  }
}

}  // namespace nvcavity
