// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "dbp/downlink.hpp"
#include "dbp/error.hpp"
#include "dbp/harness.hpp"
#include "dbp/rng.hpp"
#include "dbp/uplink.hpp"

namespace dbp {

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Error: return "error";
  }
  return "unknown";
}

bool VerifyReport::all_ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok(); });
}

const CheckResult* VerifyReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

struct Instance {
  ChannelRealization real;
  ComplexVector y;      // uplink receive vector
  ComplexVector s_dl;   // downlink symbols
};

ComplexVector random_symbols(const ModulationScheme& mod, std::size_t n, RngStream& rng) {
  ComplexVector v(n);
  for (cplx& x : v) {
    unsigned label = 0;
    for (int b = 0; b < mod.bits_per_symbol(); ++b)
      label = (label << 1) | static_cast<unsigned>(rng.bit());
    x = mod.map_label(label);
  }
  return v;
}

std::vector<Instance> make_instances(const SystemConfig& cfg, const VerifyOptions& opt) {
  const ModulationScheme mod(cfg.modulation);
  const double n0 = snr_to_noise(cfg, opt.snr_db);
  std::vector<Instance> out;
  out.reserve(opt.instances);
  for (std::size_t i = 0; i < opt.instances; ++i) {
    RngStream rng(opt.seed, {i, 0, StreamPurpose::Instance});
    Instance inst;
    inst.real = generate_rayleigh(cfg, rng, i);
    const ComplexVector x = random_symbols(mod, cfg.users, rng);
    inst.y = transmit_uplink(inst.real.h, x, n0, rng);
    inst.s_dl = random_symbols(mod, cfg.users, rng);
    out.push_back(std::move(inst));
  }
  return out;
}

// Evaluates dev(i) on every instance; tolerance 0 demands exact equality.
CheckResult run_check(std::string name, double tolerance, std::size_t n,
                      const std::function<double(std::size_t)>& dev) {
  CheckResult r;
  r.name = std::move(name);
  r.tolerance = tolerance;
  bool bad_value = false;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      const double d = dev(i);
      if (std::isnan(d)) bad_value = true;
      else r.max_deviation = std::max(r.max_deviation, d);
      ++r.instances;
    } catch (const Error& e) {
      r.status = CheckStatus::Error;
      r.note = std::string(to_string(e.code())) + ": " + e.what();
      return r;
    }
  }
  const bool within = tolerance == 0.0 ? r.max_deviation == 0.0 : r.max_deviation < tolerance;
  r.status = within && !bad_value ? CheckStatus::Pass : CheckStatus::Fail;
  if (bad_value) r.note = "non-finite deviation";
  return r;
}

ComplexVector uplink_pd(const Instance& inst, const SystemConfig& cfg, const DetectorConfig& det) {
  const auto y_c = partition(inst.y, cfg);
  std::vector<LocalPreprocessOutput> locals;
  for (std::size_t c = 0; c < cfg.clusters; ++c)
    locals.push_back(local_preprocess(inst.real.clusters[c], y_c[c]));
  const FusedPreprocess fused = pd_fuse(locals);
  EqualizerCache cache;
  return detect_pd(fused.gram, fused.y_mrc, det, cache, inst.real.block_index);
}

ComplexVector uplink_fd(const Instance& inst, const SystemConfig& cfg, const DetectorConfig& det,
                        double n0) {
  const auto y_c = partition(inst.y, cfg);
  std::vector<LocalEstimate> locals;
  for (std::size_t c = 0; c < cfg.clusters; ++c) {
    EqualizerCache cache;
    locals.push_back(fd_local_detect(local_preprocess(inst.real.clusters[c], y_c[c]), det, n0,
                                     cache, inst.real.block_index));
  }
  return fd_fuse(locals);
}

PrecodeResult precode(const Instance& inst, const PrecoderConfig& pc,
                      const ReciprocityStore* store = nullptr) {
  const auto h_dl = reciprocal_clusters(inst.real.clusters);
  return PrecoderState::prepare(h_dl, pc, inst.real.block_index, store).apply(inst.s_dl);
}

double result_diff(const PrecodeResult& a, const PrecodeResult& b) {
  return std::max(max_abs_diff(a.x_dl, b.x_dl), std::abs(a.beta - b.beta));
}

// The uplink artifacts a deployment would hold at the end of detection.
ReciprocityStore uplink_store(const Instance& inst, Architecture arch, double rho) {
  ReciprocityStore store;
  store.block_index = inst.real.block_index;
  auto entry = [&](const ComplexMatrix& g) {
    const ComplexMatrix l = cholesky(add_scaled_identity(g, rho));
    return ReciprocityEntry{g, StoredInversion{rho, l, inverse_from_cholesky(l)}};
  };
  switch (arch) {
    case Architecture::Centralized:
      store.global = entry(gram(inst.real.h));
      break;
    case Architecture::PD: {
      std::vector<LocalPreprocessOutput> locals;
      for (const auto& hc : inst.real.clusters) locals.push_back({gram(hc), ComplexVector(hc.cols())});
      store.global = entry(pd_fuse(locals).gram);
      break;
    }
    case Architecture::FD:
      for (const auto& hc : inst.real.clusters) store.clusters.push_back(entry(gram(hc)));
      break;
  }
  return store;
}

}  // namespace

VerifyReport verify_equivalences(const SystemConfig& cfg, const VerifyOptions& opt) {
  cfg.validate();
  require(opt.instances >= 1, ErrorCode::InvalidParameter, "verify needs at least one instance");

  VerifyReport report;
  const auto inst = make_instances(cfg, opt);
  const std::size_t n = inst.size();
  const double n0 = snr_to_noise(cfg, opt.snr_db);
  const double n0_dl = downlink_noise(cfg, opt.snr_db);
  const bool fd_zf_ok = cfg.cluster_size() >= cfg.users;
  const std::vector<Architecture> archs = {Architecture::Centralized, Architecture::PD,
                                           Architecture::FD};
  auto ul = [&](Detector d, Architecture a, Inversion inv) {
    return DetectorConfig::make(d, a, inv, n0, cfg.symbol_energy);
  };
  auto dl = [&](Precoder p, Architecture a, Inversion inv) {
    return PrecoderConfig::make(p, a, inv, n0_dl, cfg.users, cfg.transmit_power);
  };
  auto add = [&](CheckResult r) { report.checks.push_back(std::move(r)); };

  for (Detector d : {Detector::MMSE, Detector::ZF}) {
    const std::string alg = d == Detector::MMSE ? "mmse" : "zf";
    add(run_check("pd_vs_centralized_" + alg, 1e-10, n, [&](std::size_t i) {
      const ComplexVector c =
          detect_centralized(inst[i].real.h, inst[i].y, ul(d, Architecture::Centralized, Inversion::Implicit));
      return max_abs_diff(uplink_pd(inst[i], cfg, ul(d, Architecture::PD, Inversion::Implicit)), c);
    }));
  }
  for (Detector d : {Detector::MMSE, Detector::ZF}) {
    const std::string alg = d == Detector::MMSE ? "mmse" : "zf";
    add(run_check("pd_implicit_vs_explicit_" + alg, 1e-9, n, [&](std::size_t i) {
      return max_abs_diff(uplink_pd(inst[i], cfg, ul(d, Architecture::PD, Inversion::Implicit)),
                          uplink_pd(inst[i], cfg, ul(d, Architecture::PD, Inversion::Explicit)));
    }));
    if (d == Detector::ZF && !fd_zf_ok) continue;
    add(run_check("fd_implicit_vs_explicit_" + alg, 1e-9, n, [&](std::size_t i) {
      return max_abs_diff(uplink_fd(inst[i], cfg, ul(d, Architecture::FD, Inversion::Implicit), n0),
                          uplink_fd(inst[i], cfg, ul(d, Architecture::FD, Inversion::Explicit), n0));
    }));
  }

  for (Architecture a : archs) {
    if (a == Architecture::FD && !fd_zf_ok) continue;
    add(run_check("zf_precoder_implicit_vs_explicit_" + std::string(to_string(a)), 1e-9, n,
                  [&](std::size_t i) {
                    return result_diff(precode(inst[i], dl(Precoder::ZF, a, Inversion::Implicit)),
                                       precode(inst[i], dl(Precoder::ZF, a, Inversion::Explicit)));
                  }));
  }
  add(run_check("pd_wf_vs_centralized_wf", 1e-10, n, [&](std::size_t i) {
    return result_diff(
        precode(inst[i], dl(Precoder::WF, Architecture::PD, Inversion::Implicit)),
        precode(inst[i], dl(Precoder::WF, Architecture::Centralized, Inversion::Implicit)));
  }));

  // Reuse paths against fresh computation, bit for bit. The Gram is reused
  // by WF; ZF (kappa = rho = 0) also reuses the factor or the inverse.
  struct ReuseCase {
    std::string name;
    Precoder precoder;
    Inversion inversion;
  };
  const std::vector<ReuseCase> reuse_cases = {
      {"reuse_gram_vs_fresh", Precoder::WF, Inversion::Implicit},
      {"reuse_cholesky_vs_fresh", Precoder::ZF, Inversion::Implicit},
      {"reuse_inverse_vs_fresh", Precoder::ZF, Inversion::Explicit},
  };
  for (const auto& rc : reuse_cases) {
    add(run_check(rc.name, 0.0, n, [&](std::size_t i) {
      double worst = 0.0;
      for (Architecture a : archs) {
        if (a == Architecture::FD && rc.precoder == Precoder::ZF && !fd_zf_ok) continue;
        const PrecoderConfig pc = dl(rc.precoder, a, rc.inversion);
        const ReciprocityStore store = uplink_store(inst[i], a, pc.kappa);
        worst = std::max(worst, result_diff(precode(inst[i], pc, &store), precode(inst[i], pc)));
      }
      return worst;
    }));
  }

  add(run_check("power_constraint", 1e-10, n, [&](std::size_t i) {
    double worst = 0.0;
    for (Precoder p : {Precoder::WF, Precoder::ZF})
      for (Architecture a : archs)
        for (Inversion inv : {Inversion::Implicit, Inversion::Explicit}) {
          if (a == Architecture::FD && p == Precoder::ZF && !fd_zf_ok) continue;
          const PrecodeResult r = precode(inst[i], dl(p, a, inv));
          worst = std::max(worst, std::abs(squared_norm(r.x_dl) - cfg.transmit_power) /
                                      cfg.transmit_power);
        }
    return worst;
  }));

  add(run_check("zf_noise_free_recovery", 1e-9, n, [&](std::size_t i) {
    const ComplexMatrix h_dl = reciprocal_channel(inst[i].real.h);
    double worst = 0.0;
    for (Architecture a : {Architecture::Centralized, Architecture::PD}) {
      const PrecodeResult r = precode(inst[i], dl(Precoder::ZF, a, Inversion::Implicit));
      ComplexVector y = multiply(h_dl, r.x_dl);
      for (cplx& v : y) v *= r.beta;
      worst = std::max(worst, max_abs_diff(y, inst[i].s_dl));
    }
    return worst;
  }));

  {
    SystemConfig one = cfg;
    one.clusters = 1;
    const auto inst1 = make_instances(one, opt);
    add(run_check("collapse_c1", 1e-10, n, [&](std::size_t i) {
      const ComplexVector c = detect_centralized(
          inst1[i].real.h, inst1[i].y,
          DetectorConfig::make(Detector::MMSE, Architecture::Centralized, Inversion::Implicit, n0,
                               one.symbol_energy));
      const ComplexVector pd = uplink_pd(
          inst1[i], one,
          DetectorConfig::make(Detector::MMSE, Architecture::PD, Inversion::Implicit, n0,
                               one.symbol_energy));
      const ComplexVector fd = uplink_fd(
          inst1[i], one,
          DetectorConfig::make(Detector::MMSE, Architecture::FD, Inversion::Implicit, n0,
                               one.symbol_energy),
          n0);
      return std::max(max_abs_diff(pd, c), max_abs_diff(fd, c));
    }));
  }

  if (cfg.users >= 2) {
    // Two clusters of U - 1 antennas: every local Gram is rank deficient.
    SystemConfig thin = cfg;
    thin.clusters = 2;
    thin.antennas = 2 * (cfg.users - 1);
    VerifyOptions single = opt;
    single.instances = 1;
    const auto inst2 = make_instances(thin, single);
    const double n0_thin = snr_to_noise(thin, opt.snr_db);
    CheckResult r = run_check("fd_zf_rank_deficient", 0.0, 1, [&](std::size_t i) {
      uplink_fd(inst2[i], thin,
                DetectorConfig::make(Detector::ZF, Architecture::FD, Inversion::Implicit, n0_thin,
                                     thin.symbol_energy),
                n0_thin);
      return 0.0;
    });
    if (r.status == CheckStatus::Error && r.note.starts_with("NotPositiveDefinite")) {
      r.error_expected = true;
    } else {
      r.status = CheckStatus::Fail;
      r.note = "expected NotPositiveDefinite for B_c < U";
    }
    add(std::move(r));
  }
  return report;
}

}  // namespace dbp
