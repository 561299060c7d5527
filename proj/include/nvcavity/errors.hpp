// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nvcavity {

/// Error categories used across the library. The numeric grouping matters
/// only for process exit codes, see exit_code_for().
enum class ErrorCode {
  NegativeRate,
  NonFiniteInput,
  NotConverged,
  IllConditioned,
  InvalidProbability,
  InvalidCombination,
  DimensionMismatch,
  NoPeakFound,
  InvalidInput,
  OutOfRange,
  ParseError,
  InvariantViolation,
  IoError,
};

const char* error_code_name(ErrorCode code);

/// Exit-code classes: 2 validation, 3 non-convergence, 4 I/O.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace nvcavity
