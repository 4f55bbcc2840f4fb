// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DBP_ERROR_HPP
#define DBP_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace dbp {

enum class ErrorCode {
  DimensionMismatch,
  NotPositiveDefinite,
  StaleCache,
  InvalidVariance,
  DegenerateColumn,
  LengthError,
  InvalidParameter,
  UnknownPipeline,
  WidthError,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Numeric and contract errors raised by the core. ConfigError carries the
// offending configuration key.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string key = {})
      : std::runtime_error(message), code_(code), key_(std::move(key)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& key() const noexcept { return key_; }

  // True for failures of the linear algebra itself (as opposed to misuse
  // or bad input files).
  bool is_numeric() const noexcept {
    return code_ == ErrorCode::NotPositiveDefinite ||
           code_ == ErrorCode::InvalidVariance ||
           code_ == ErrorCode::DegenerateColumn;
  }

 private:
  ErrorCode code_;
  std::string key_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool ok, ErrorCode code, const char* message) {
  if (!ok) throw Error(code, message);
}

}  // namespace dbp

#endif  // DBP_ERROR_HPP
