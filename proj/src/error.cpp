// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/error.hpp"

namespace dbp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::StaleCache: return "StaleCache";
    case ErrorCode::InvalidVariance: return "InvalidVariance";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::LengthError: return "LengthError";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::UnknownPipeline: return "UnknownPipeline";
    case ErrorCode::WidthError: return "WidthError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace dbp
