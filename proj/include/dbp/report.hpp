// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DBP_REPORT_HPP
#define DBP_REPORT_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "dbp/cost.hpp"
#include "dbp/harness.hpp"
#include "dbp/verify.hpp"

namespace dbp {

// 12 significant digits ("%.12g"); non-finite values print as nan, inf, -inf.
std::string format_number(double v);

inline constexpr std::string_view kBerHeader =
    "snr_db,scheme,architecture,algorithm,inversion,precision,trials,bit_errors,ber";
inline constexpr std::string_view kVerifyHeader =
    "check,instances,max_deviation,tolerance,status,note";

std::string tradeoff_header();

std::string ber_csv(std::span<const BerRecord> records);
std::string tradeoff_csv(std::span<const CostReport> rows);
std::string verify_csv(const VerifyReport& report);

// Writes the whole file or throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace dbp

#endif  // DBP_REPORT_HPP
