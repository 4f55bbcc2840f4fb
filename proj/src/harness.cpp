// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "dbp/config.hpp"
#include "dbp/error.hpp"
#include "dbp/rng.hpp"

namespace dbp {

// ---------------------------------------------------------------------------
// Scheme names

Scheme Scheme::parse(std::string_view name) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : name) {
    if (ch == '-' || ch == '_') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  parts.push_back(cur);
  auto bad = [&](const std::string& why) -> Error {
    return Error(ErrorCode::InvalidParameter,
                 "scheme '" + std::string(name) + "': " + why);
  };

  Scheme s;
  std::size_t i = 0;
  std::optional<Link> link;
  if (i < parts.size() && (parts[i] == "ul" || parts[i] == "dl")) {
    link = parts[i] == "ul" ? Link::Uplink : Link::Downlink;
    ++i;
  }
  if (i >= parts.size()) throw bad("missing architecture");
  if (parts[i] == "c" || parts[i] == "centralized") s.architecture = Architecture::Centralized;
  else if (parts[i] == "pd") s.architecture = Architecture::PD;
  else if (parts[i] == "fd") s.architecture = Architecture::FD;
  else throw bad("unknown architecture '" + parts[i] + "'");
  ++i;
  if (i >= parts.size()) throw bad("missing algorithm");
  const std::string alg = parts[i++];
  if (!link) link = alg == "wf" ? Link::Downlink : Link::Uplink;
  s.link = *link;
  if (s.link == Link::Uplink) {
    if (alg == "mmse") s.detector = Detector::MMSE;
    else if (alg == "zf") s.detector = Detector::ZF;
    else if (alg == "mrc") s.detector = Detector::MRC;
    else throw bad("unknown uplink algorithm '" + alg + "'");
  } else {
    if (alg == "wf") s.precoder = Precoder::WF;
    else if (alg == "zf") s.precoder = Precoder::ZF;
    else throw bad("unknown downlink algorithm '" + alg + "'");
  }
  if (i < parts.size()) {
    if (parts[i] == "explicit") s.inversion = Inversion::Explicit;
    else if (parts[i] == "implicit") s.inversion = Inversion::Implicit;
    else throw bad("unknown inversion '" + parts[i] + "'");
    ++i;
  }
  if (i != parts.size()) throw bad("trailing components");
  return s;
}

std::string_view Scheme::algorithm_name() const {
  return link == Link::Uplink ? to_string(detector) : to_string(precoder);
}

std::string Scheme::label() const {
  std::string arch;
  switch (architecture) {
    case Architecture::Centralized: arch = "c"; break;
    case Architecture::PD: arch = "pd"; break;
    case Architecture::FD: arch = "fd"; break;
  }
  std::string alg(algorithm_name());
  std::transform(alg.begin(), alg.end(), alg.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return std::string(link == Link::Uplink ? "ul" : "dl") + "-" + arch + "-" + alg + "-" +
         std::string(to_string(inversion));
}

// ---------------------------------------------------------------------------
// SweepSpec

SweepSpec SweepSpec::from(const RunConfig& cfg) {
  SweepSpec s;
  s.config = cfg.system;
  s.snr_db = cfg.snr_db;
  s.trials = cfg.trials;
  for (const auto& d : cfg.detectors) s.schemes.push_back(Scheme::parse(d));
  for (const auto& p : cfg.precisions) s.precisions.push_back(Precision::parse(p));
  s.seed = cfg.seed;
  s.threads = cfg.threads;
  s.early_stop_errors = cfg.early_stop_errors;
  s.mmse_unbiased = cfg.mmse_unbiased;
  return s;
}

void SweepSpec::validate() const {
  config.validate();
  require(!snr_db.empty(), ErrorCode::InvalidParameter, "sweep needs at least one SNR point");
  require(trials >= 1, ErrorCode::InvalidParameter, "sweep needs at least one trial");
  require(!schemes.empty(), ErrorCode::InvalidParameter, "sweep needs at least one scheme");
  require(!precisions.empty(), ErrorCode::InvalidParameter, "sweep needs a precision");
  for (const auto& p : precisions) p.format.validate();
}

double downlink_noise(const SystemConfig& cfg, double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  return cfg.transmit_power / std::pow(10.0, snr_db / 10.0);
}

namespace {

struct Lane {
  Scheme scheme;
  std::size_t precision = 0;
  const MinifloatFormat* format = nullptr;  // null: no cluster boundary quantization
};

struct LaneTally {
  std::uint64_t symbols = 0;
  std::uint64_t errors = 0;
  std::optional<std::string> failure;
};

// [snr][lane]
using ChunkResult = std::vector<std::vector<LaneTally>>;

struct LaneState {
  std::vector<EqualizerCache> caches;
  std::optional<PrecoderState> precoder;
  double precoder_kappa = -1.0;
};

// Everything about a coherence block that does not depend on the SNR.
struct Block {
  std::uint64_t index = 0;
  std::size_t symbols = 0;
  ChannelRealization real;
  std::vector<ComplexMatrix> cluster_grams;
  ComplexMatrix global_gram;
  std::vector<ComplexMatrix> dl_clusters;
  ComplexMatrix h_dl;
  ReciprocityStore store;
  std::vector<std::optional<ComplexMatrix>> fused_by_precision;
  std::optional<ComplexMatrix> fused_raw;

  std::vector<std::vector<unsigned>> ul_labels;
  std::vector<ComplexVector> hx;
  std::vector<ComplexVector> ul_noise;
  std::vector<std::vector<unsigned>> dl_labels;
  std::vector<ComplexVector> s;
  std::vector<ComplexVector> dl_noise;
};

class SweepRunner {
 public:
  explicit SweepRunner(const SweepSpec& spec)
      : spec_(spec), cfg_(spec.config), mod_(spec.config.modulation) {
    for (const auto& scheme : spec.schemes)
      for (std::size_t p = 0; p < spec.precisions.size(); ++p) {
        Lane lane{scheme, p, nullptr};
        if (scheme.architecture != Architecture::Centralized)
          lane.format = &spec_.precisions[p].format;
        lanes_.push_back(lane);
        any_ul_ |= scheme.link == Link::Uplink;
        any_dl_ |= scheme.link == Link::Downlink;
        any_central_ul_ |= scheme.link == Link::Uplink &&
                           scheme.architecture == Architecture::Centralized;
      }
    for (double snr : spec.snr_db) {
      ul_noise_.push_back(snr_to_noise(cfg_, snr));
      dl_noise_.push_back(downlink_noise(cfg_, snr));
    }
    blocks_ = (spec.trials + cfg_.coherence - 1) / cfg_.coherence;
    per_chunk_ = spec.blocks_per_chunk ? spec.blocks_per_chunk
                                       : std::max<std::uint64_t>(1, (blocks_ + 255) / 256);
    chunks_ = (blocks_ + per_chunk_ - 1) / per_chunk_;
    results_.resize(chunks_);
    done_.assign(chunks_, false);
    satisfied_at_.assign(spec.snr_db.size(), std::numeric_limits<std::uint64_t>::max());
  }

  std::vector<BerRecord> run() {
    unsigned threads = spec_.threads ? spec_.threads : std::thread::hardware_concurrency();
    threads = static_cast<unsigned>(
        std::clamp<std::uint64_t>(threads, 1, std::max<std::uint64_t>(chunks_, 1)));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
      for (std::uint64_t k = next++; k < chunks_; k = next++) run_chunk(k);
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return merge();
  }

 private:
  bool snr_satisfied_before(std::size_t snr, std::uint64_t chunk) {
    if (!spec_.early_stop_errors) return false;
    std::lock_guard lock(mutex_);
    return satisfied_at_[snr] < chunk;
  }

  bool satisfied(const std::vector<LaneTally>& acc) const {
    for (const auto& t : acc)
      if (!t.failure && t.errors < spec_.early_stop_errors) return false;
    return true;
  }

  void mark_done(std::uint64_t chunk) {
    if (!spec_.early_stop_errors) return;
    std::lock_guard lock(mutex_);
    done_[chunk] = true;
    for (std::size_t i = 0; i < spec_.snr_db.size(); ++i) {
      if (satisfied_at_[i] != std::numeric_limits<std::uint64_t>::max()) continue;
      std::vector<LaneTally> acc(lanes_.size());
      for (std::uint64_t k = 0; k < chunks_ && done_[k]; ++k) {
        accumulate(acc, results_[k][i]);
        if (satisfied(acc)) {
          satisfied_at_[i] = k;
          break;
        }
      }
    }
  }

  static void accumulate(std::vector<LaneTally>& acc, const std::vector<LaneTally>& part) {
    for (std::size_t l = 0; l < acc.size(); ++l) {
      if (acc[l].failure) continue;
      acc[l].symbols += part[l].symbols;
      acc[l].errors += part[l].errors;
      acc[l].failure = part[l].failure;
    }
  }

  std::vector<BerRecord> merge() const {
    std::vector<BerRecord> out;
    const double bits_per_vector =
        static_cast<double>(cfg_.users) * static_cast<double>(mod_.bits_per_symbol());
    for (std::size_t i = 0; i < spec_.snr_db.size(); ++i) {
      std::vector<LaneTally> acc(lanes_.size());
      for (std::uint64_t k = 0; k < chunks_; ++k) {
        accumulate(acc, results_[k][i]);
        if (spec_.early_stop_errors && satisfied(acc)) break;
      }
      for (std::size_t l = 0; l < lanes_.size(); ++l) {
        BerRecord r;
        r.snr_db = spec_.snr_db[i];
        r.scheme = lanes_[l].scheme;
        r.precision = spec_.precisions[lanes_[l].precision].name;
        r.trials = acc[l].symbols;
        r.bit_errors = acc[l].errors;
        r.failure = acc[l].failure;
        r.ber = r.failure || r.trials == 0
                    ? std::numeric_limits<double>::quiet_NaN()
                    : static_cast<double>(r.bit_errors) /
                          (static_cast<double>(r.trials) * bits_per_vector);
        out.push_back(std::move(r));
      }
    }
    return out;
  }

  std::vector<unsigned> draw_labels(RngStream& rng, ComplexVector& symbols) const {
    const int k = mod_.bits_per_symbol();
    std::vector<unsigned> labels(cfg_.users);
    symbols.resize(cfg_.users);
    for (std::size_t u = 0; u < cfg_.users; ++u) {
      unsigned label = 0;
      for (int b = 0; b < k; ++b) label = (label << 1) | static_cast<unsigned>(rng.bit());
      labels[u] = label;
      symbols[u] = mod_.map_label(label);
    }
    return labels;
  }

  Block make_block(std::uint64_t index) const {
    Block b;
    b.index = index;
    const std::uint64_t first = index * cfg_.coherence;
    b.symbols = static_cast<std::size_t>(std::min<std::uint64_t>(cfg_.coherence, spec_.trials - first));

    RngStream ch(spec_.seed, {0, index, StreamPurpose::Channel});
    b.real = generate_rayleigh(cfg_, ch, index);
    for (const auto& hc : b.real.clusters) b.cluster_grams.push_back(gram(hc));
    if (any_central_ul_) b.global_gram = gram(b.real.h);
    b.fused_by_precision.resize(spec_.precisions.size());

    if (any_ul_) {
      RngStream bits(spec_.seed, {0, index, StreamPurpose::UplinkBits});
      RngStream noise(spec_.seed, {0, index, StreamPurpose::UplinkNoise});
      for (std::size_t t = 0; t < b.symbols; ++t) {
        ComplexVector x;
        b.ul_labels.push_back(draw_labels(bits, x));
        b.hx.push_back(multiply(b.real.h, x));
        ComplexVector w(cfg_.antennas);
        for (cplx& v : w) v = noise.complex_normal(1.0);
        b.ul_noise.push_back(std::move(w));
      }
    }
    if (any_dl_) {
      b.dl_clusters = reciprocal_clusters(b.real.clusters);
      b.h_dl = reciprocal_channel(b.real.h);
      b.store.block_index = index;
      for (const auto& g : b.cluster_grams) b.store.clusters.push_back({g, std::nullopt});
      RngStream bits(spec_.seed, {0, index, StreamPurpose::DownlinkBits});
      RngStream noise(spec_.seed, {0, index, StreamPurpose::DownlinkNoise});
      for (std::size_t t = 0; t < b.symbols; ++t) {
        ComplexVector s;
        b.dl_labels.push_back(draw_labels(bits, s));
        b.s.push_back(std::move(s));
        ComplexVector w(cfg_.users);
        for (cplx& v : w) v = noise.complex_normal(1.0);
        b.dl_noise.push_back(std::move(w));
      }
    }
    return b;
  }

  const ComplexMatrix& fused_gram(Block& b, const Lane& lane) const {
    if (lane.format == nullptr) {
      if (!b.fused_raw) {
        std::vector<LocalPreprocessOutput> locals;
        for (const auto& g : b.cluster_grams) locals.push_back({g, ComplexVector(cfg_.users)});
        b.fused_raw = pd_fuse(locals).gram;
      }
      return *b.fused_raw;
    }
    auto& slot = b.fused_by_precision[lane.precision];
    if (!slot) {
      std::vector<LocalPreprocessOutput> locals;
      for (const auto& g : b.cluster_grams)
        locals.push_back({quantize_hermitian(g, *lane.format), ComplexVector(cfg_.users)});
      slot = pd_fuse(locals).gram;
    }
    return *slot;
  }

  std::uint64_t count_errors(std::span<const cplx> estimate, const std::vector<unsigned>& tx) const {
    std::uint64_t errors = 0;
    for (std::size_t u = 0; u < estimate.size(); ++u)
      errors += static_cast<std::uint64_t>(std::popcount(mod_.slice(estimate[u]) ^ tx[u]));
    return errors;
  }

  ComplexVector detect_uplink(Block& b, const Lane& lane, LaneState& st, double n0,
                              const std::vector<ComplexVector>& y_mrc,
                              const ComplexVector& y_mrc_global) const {
    const DetectorConfig det = DetectorConfig::make(lane.scheme.detector, lane.scheme.architecture,
                                                    lane.scheme.inversion, n0, cfg_.symbol_energy,
                                                    spec_.mmse_unbiased);
    switch (lane.scheme.architecture) {
      case Architecture::Centralized: {
        st.caches.resize(1);
        st.caches[0].refresh(b.index, b.global_gram, det);
        return st.caches[0].apply(y_mrc_global);
      }
      case Architecture::PD: {
        st.caches.resize(1);
        ComplexVector fused(cfg_.users);
        for (const auto& yc : y_mrc) {
          if (lane.format) {
            const ComplexVector q = quantize_payload(yc, *lane.format);
            for (std::size_t u = 0; u < fused.size(); ++u) fused[u] += q[u];
          } else {
            for (std::size_t u = 0; u < fused.size(); ++u) fused[u] += yc[u];
          }
        }
        return detect_pd(fused_gram(b, lane), fused, det, st.caches[0], b.index);
      }
      case Architecture::FD: {
        st.caches.resize(cfg_.clusters);
        std::vector<LocalEstimate> locals;
        locals.reserve(cfg_.clusters);
        for (std::size_t c = 0; c < cfg_.clusters; ++c) {
          LocalEstimate est =
              fd_local_detect(b.cluster_grams[c], y_mrc[c], det, n0, st.caches[c], b.index);
          if (lane.format) est = quantize_payload(est, *lane.format);
          locals.push_back(std::move(est));
        }
        return fd_fuse(locals);
      }
    }
    return {};
  }

  ComplexVector precode_and_receive(Block& b, const Lane& lane, LaneState& st, double n0,
                                    std::size_t t) const {
    const PrecoderConfig pc =
        PrecoderConfig::make(lane.scheme.precoder, lane.scheme.architecture,
                             lane.scheme.inversion, n0, cfg_.users, cfg_.transmit_power);
    if (!st.precoder || st.precoder->block_index() != b.index || st.precoder_kappa != pc.kappa) {
      st.precoder.reset();
      st.precoder = PrecoderState::prepare(b.dl_clusters, pc, b.index, &b.store, lane.format);
      st.precoder_kappa = pc.kappa;
    }
    const PrecodeResult r = st.precoder->apply(b.s[t]);
    ComplexVector y = multiply(b.h_dl, r.x_dl);
    const double sigma = std::sqrt(n0);
    for (std::size_t u = 0; u < y.size(); ++u) {
      if (n0 > 0.0) y[u] += sigma * b.dl_noise[t][u];
      y[u] *= r.beta;
    }
    return y;
  }

  void run_chunk(std::uint64_t k) {
    ChunkResult res(spec_.snr_db.size(), std::vector<LaneTally>(lanes_.size()));
    std::vector<LaneState> states(lanes_.size());
    const std::uint64_t first = k * per_chunk_;
    const std::uint64_t last = std::min(blocks_, first + per_chunk_);
    const std::size_t bc = cfg_.cluster_size();

    std::vector<bool> skip(spec_.snr_db.size(), false);
    for (std::uint64_t blk = first; blk < last; ++blk) {
      Block b = make_block(blk);
      for (std::size_t i = 0; i < spec_.snr_db.size(); ++i) {
        if (skip[i] || (skip[i] = snr_satisfied_before(i, k))) continue;
        const double n0 = ul_noise_[i];
        const double n0_dl = dl_noise_[i];
        const double sigma = std::sqrt(n0);
        for (std::size_t t = 0; t < b.symbols; ++t) {
          std::vector<ComplexVector> y_mrc;
          ComplexVector y_mrc_global;
          if (any_ul_) {
            ComplexVector y = b.hx[t];
            if (n0 > 0.0)
              for (std::size_t r = 0; r < y.size(); ++r) y[r] += sigma * b.ul_noise[t][r];
            for (std::size_t c = 0; c < cfg_.clusters; ++c)
              y_mrc.push_back(adjoint_multiply(b.real.clusters[c],
                                               std::span<const cplx>(y).subspan(c * bc, bc)));
            if (any_central_ul_) y_mrc_global = adjoint_multiply(b.real.h, y);
          }
          for (std::size_t l = 0; l < lanes_.size(); ++l) {
            LaneTally& tally = res[i][l];
            if (tally.failure) continue;
            const Lane& lane = lanes_[l];
            try {
              if (lane.scheme.link == Link::Uplink) {
                const ComplexVector x = detect_uplink(b, lane, states[l], n0, y_mrc, y_mrc_global);
                tally.errors += count_errors(x, b.ul_labels[t]);
              } else {
                const ComplexVector s = precode_and_receive(b, lane, states[l], n0_dl, t);
                tally.errors += count_errors(s, b.dl_labels[t]);
              }
              ++tally.symbols;
            } catch (const Error& e) {
              tally.failure = std::string(to_string(e.code())) + ": " + e.what();
            }
          }
        }
      }
    }
    results_[k] = std::move(res);
    mark_done(k);
  }

  const SweepSpec& spec_;
  const SystemConfig& cfg_;
  ModulationScheme mod_;
  std::vector<Lane> lanes_;
  bool any_ul_ = false;
  bool any_dl_ = false;
  bool any_central_ul_ = false;
  std::vector<double> ul_noise_;
  std::vector<double> dl_noise_;
  std::uint64_t blocks_ = 0;
  std::uint64_t per_chunk_ = 1;
  std::uint64_t chunks_ = 0;
  std::vector<ChunkResult> results_;

  std::mutex mutex_;
  std::vector<bool> done_;
  std::vector<std::uint64_t> satisfied_at_;
};

}  // namespace

std::vector<BerRecord> run_ber_sweep(const SweepSpec& spec) {
  spec.validate();
  return SweepRunner(spec).run();
}

std::vector<CostReport> run_tradeoff_report(const SystemConfig& cfg,
                                            const std::vector<std::size_t>& coherence_list) {
  cfg.validate();
  std::vector<CostReport> rows;
  for (std::size_t n : coherence_list)
    rows.push_back(cost_report(static_cast<double>(cfg.clusters),
                               static_cast<double>(cfg.cluster_size()),
                               static_cast<double>(cfg.users), static_cast<double>(n)));
  return rows;
}

}  // namespace dbp
