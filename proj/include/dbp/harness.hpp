// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DBP_HARNESS_HPP
#define DBP_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbp/channel.hpp"
#include "dbp/cost.hpp"
#include "dbp/downlink.hpp"
#include "dbp/quant.hpp"
#include "dbp/uplink.hpp"

namespace dbp {

struct RunConfig;

// A detection or precoding chain, named "<link>-<arch>-<algorithm>[-<inversion>]",
// e.g. "ul-pd-mmse", "ul-fd-zf-explicit", "dl-pd-wf", "dl-c-zf".
// link: ul | dl; arch: c | pd | fd; algorithm: mmse | zf | mrc (ul), wf | zf (dl);
// inversion defaults to implicit. Without a link prefix, wf implies dl and
// everything else ul.
struct Scheme {
  Link link = Link::Uplink;
  Architecture architecture = Architecture::PD;
  Detector detector = Detector::MMSE;     // uplink
  Precoder precoder = Precoder::WF;       // downlink
  Inversion inversion = Inversion::Implicit;

  static Scheme parse(std::string_view name);
  std::string label() const;
  std::string_view algorithm_name() const;
};

struct Precision {
  std::string name;
  MinifloatFormat format;
  static Precision parse(std::string_view name) {
    return {std::string(name), MinifloatFormat::parse(name)};
  }
};

struct SweepSpec {
  SystemConfig config;
  std::vector<double> snr_db;
  std::uint64_t trials = 1;  // symbol transmissions per SNR point
  std::vector<Scheme> schemes;
  std::vector<Precision> precisions;
  std::uint64_t seed = 1;
  unsigned threads = 0;                 // 0: hardware concurrency
  std::uint64_t early_stop_errors = 0;  // 0: disabled
  std::uint64_t blocks_per_chunk = 0;   // 0: automatic
  bool mmse_unbiased = true;            // see DetectorConfig::unbiased

  static SweepSpec from(const RunConfig& cfg);
  void validate() const;
};

struct BerRecord {
  double snr_db = 0;
  Scheme scheme;
  std::string precision;
  std::uint64_t trials = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0;
  std::optional<std::string> failure;  // set when the chain hit a numeric error
};

// Block-fading Monte Carlo: a new channel every N_coh symbols, every scheme
// and precision evaluated on the same (H, x, n) realizations, and the same
// normalized draws reused across SNR points. Records are ordered by SNR, then
// scheme, then precision. The output depends only on the SweepSpec, not on the
// number of threads.
std::vector<BerRecord> run_ber_sweep(const SweepSpec& spec);

// Downlink noise variance for a given SNR: P_tx / 10^(snr_db / 10).
double downlink_noise(const SystemConfig& cfg, double snr_db);

// Cost-model rows for each coherence length.
std::vector<CostReport> run_tradeoff_report(const SystemConfig& cfg,
                                            const std::vector<std::size_t>& coherence_list);

}  // namespace dbp

#endif  // DBP_HARNESS_HPP
