// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DBP_VERIFY_HPP
#define DBP_VERIFY_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dbp/channel.hpp"

namespace dbp {

enum class CheckStatus { Pass, Fail, Error };
std::string_view to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  std::size_t instances = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::Pass;
  // An Error is acceptable when the check exists to exercise an error path.
  bool error_expected = false;
  std::string note;

  bool ok() const {
    return status == CheckStatus::Pass || (status == CheckStatus::Error && error_expected);
  }
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_ok() const;
  const CheckResult* find(std::string_view name) const;
};

struct VerifyOptions {
  std::size_t instances = 100;
  std::uint64_t seed = 1;
  double snr_db = 10.0;
};

// Runs the algebraic equivalence checks on random instances drawn from cfg:
// PD and centralized agreement, implicit and explicit inversion agreement,
// downlink reuse against fresh computation (bit-exact), the transmit power
// constraint, ZF noise-free recovery, the C = 1 collapse, and the FD-ZF
// rank-deficient error path. Numeric failures are recorded, never thrown.
VerifyReport verify_equivalences(const SystemConfig& cfg, const VerifyOptions& options = {});

}  // namespace dbp

#endif  // DBP_VERIFY_HPP
