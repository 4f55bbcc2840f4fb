// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DBP_CONFIG_HPP
#define DBP_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dbp/channel.hpp"

namespace dbp {

// Contents of a run configuration file (JSON object). Recognized keys:
//   B, U, C, n_coh, modulation, e_s, p_tx, snr_db (list; "inf" allowed),
//   trials, seed, detectors (list of scheme names), precision (name or list),
//   n_coh_list (list, trade-off reports), threads, early_stop_errors,
//   mmse_unbiased (bool, default true: MMSE estimates are rescaled by their
//   bias factor before slicing and fusion).
// Any other key is a ConfigError naming it.
struct RunConfig {
  SystemConfig system;
  std::vector<double> snr_db{0.0};
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::vector<std::string> detectors{"ul-pd-mmse", "ul-fd-mmse"};
  std::vector<std::string> precisions{"fp32"};
  std::vector<std::size_t> n_coh_list;
  unsigned threads = 0;  // 0: hardware concurrency
  std::uint64_t early_stop_errors = 0;
  bool mmse_unbiased = true;

  void validate() const;
};

RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

// key=value override; the value is read as JSON when it parses, otherwise as
// a plain string. Flags win over file contents.
void apply_override(RunConfig& cfg, std::string_view key, std::string_view value);
// "key=value" form.
void apply_override(RunConfig& cfg, std::string_view assignment);

// Canonical JSON with every key spelled out.
std::string to_json(const RunConfig& cfg);

}  // namespace dbp

#endif  // DBP_CONFIG_HPP
