// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/downlink.hpp"

#include <cmath>

#include "dbp/channel.hpp"
#include "dbp/error.hpp"

namespace dbp {

std::string_view to_string(Precoder p) { return p == Precoder::WF ? "WF" : "ZF"; }

PrecoderConfig PrecoderConfig::make(Precoder algorithm, Architecture architecture,
                                    Inversion inversion, double noise_variance,
                                    std::size_t users, double transmit_power) {
  PrecoderConfig p;
  p.algorithm = algorithm;
  p.architecture = architecture;
  p.inversion = inversion;
  p.transmit_power = transmit_power;
  p.kappa = algorithm == Precoder::WF
                ? static_cast<double>(users) * noise_variance / transmit_power
                : 0.0;
  return p;
}

ComplexMatrix reciprocal_channel(const ComplexMatrix& h_ul) { return h_ul.transpose(); }

std::vector<ComplexMatrix> reciprocal_clusters(std::span<const ComplexMatrix> h_ul_clusters) {
  std::vector<ComplexMatrix> out;
  out.reserve(h_ul_clusters.size());
  for (const auto& h : h_ul_clusters) out.push_back(h.transpose());
  return out;
}

namespace {

const ReciprocityEntry& entry_for(const ReciprocityStore& store, std::uint64_t block_index,
                                  std::size_t cluster) {
  if (store.block_index != block_index)
    fail(ErrorCode::StaleCache, "reciprocity store belongs to another coherence block");
  if (cluster == kGlobalEntry) {
    if (!store.global) fail(ErrorCode::StaleCache, "reciprocity store has no global entry");
    return *store.global;
  }
  if (cluster >= store.clusters.size())
    fail(ErrorCode::StaleCache, "reciprocity store has no entry for this cluster");
  return store.clusters[cluster];
}

const StoredInversion* matching_inversion(const ReciprocityStore* store,
                                          std::uint64_t block_index, std::size_t cluster,
                                          double kappa) {
  if (store == nullptr) return nullptr;
  const auto& e = entry_for(*store, block_index, cluster);
  if (!e.inversion || e.inversion->regularizer != kappa) return nullptr;
  return &*e.inversion;
}

}  // namespace

ComplexMatrix reuse_gram(const ReciprocityStore& store, std::uint64_t block_index,
                         std::size_t cluster) {
  return entry_for(store, block_index, cluster).gram.transpose();
}

ComplexMatrix reuse_cholesky(const ReciprocityStore& store, std::uint64_t block_index,
                             std::size_t cluster) {
  const auto& e = entry_for(store, block_index, cluster);
  if (!e.inversion || e.inversion->factor.empty())
    fail(ErrorCode::StaleCache, "reciprocity store holds no Cholesky factor");
  return e.inversion->factor.conjugate();
}

ComplexMatrix reuse_inverse(const ReciprocityStore& store, std::uint64_t block_index,
                            std::size_t cluster) {
  const auto& e = entry_for(store, block_index, cluster);
  if (!e.inversion || e.inversion->inverse.empty())
    fail(ErrorCode::StaleCache, "reciprocity store holds no inverse");
  return e.inversion->inverse.transpose();
}

ComplexVector PrecoderState::Whitener::solve(std::span<const cplx> s, Inversion inv) const {
  if (inv == Inversion::Explicit) return multiply(inverse, s);
  return solve_cholesky(factor, s);
}

PrecoderState PrecoderState::prepare(std::span<const ComplexMatrix> h_dl_clusters,
                                     const PrecoderConfig& cfg, std::uint64_t block_index,
                                     const ReciprocityStore* store,
                                     const MinifloatFormat* payload_format) {
  if (h_dl_clusters.empty()) fail(ErrorCode::DimensionMismatch, "precoder: no clusters");
  if (!(cfg.transmit_power > 0.0))
    fail(ErrorCode::InvalidParameter, "precoder: transmit power must be positive");
  if (cfg.kappa < 0.0) fail(ErrorCode::InvalidParameter, "precoder: kappa must be >= 0");
  const std::size_t users = h_dl_clusters.front().rows();
  const std::size_t n_clusters = h_dl_clusters.size();

  PrecoderState st;
  st.cfg_ = cfg;
  st.block_ = block_index;
  if (payload_format) st.fmt_ = *payload_format;
  for (const auto& h : h_dl_clusters) {
    if (h.rows() != users) fail(ErrorCode::DimensionMismatch, "precoder: UE count mismatch");
    st.beamformers_.push_back(h.adjoint());
  }

  const bool cluster_store = store && store->clusters.size() == n_clusters;
  auto cluster_gram = [&](std::size_t c) {
    return cluster_store ? reuse_gram(*store, block_index, c) : gram(st.beamformers_[c]);
  };
  auto make_whitener = [&](const ComplexMatrix& g, std::size_t entry, bool allow_store) {
    const StoredInversion* stored =
        allow_store ? matching_inversion(store, block_index, entry, cfg.kappa) : nullptr;
    Whitener w;
    if (cfg.inversion == Inversion::Implicit) {
      w.factor = stored && !stored->factor.empty()
                     ? stored->factor.conjugate()
                     : cholesky(add_scaled_identity(g, cfg.kappa));
    } else {
      w.inverse = stored && !stored->inverse.empty()
                      ? stored->inverse.transpose()
                      : inverse_from_cholesky(cholesky(add_scaled_identity(g, cfg.kappa)));
    }
    return w;
  };
  const bool global_store = store && store->global.has_value();

  switch (cfg.architecture) {
    case Architecture::Centralized: {
      const ComplexMatrix g = global_store ? reuse_gram(*store, block_index)
                                           : gram(stack(st.beamformers_));
      st.whiteners_.push_back(make_whitener(g, kGlobalEntry, global_store));
      break;
    }
    case Architecture::PD: {
      // Quantized cluster payloads have to be fused here; the stored fused
      // Gram only stands in for unquantized transfers.
      const bool use_global = global_store && !st.fmt_;
      ComplexMatrix g;
      if (use_global) {
        g = reuse_gram(*store, block_index);
      } else {
        g = ComplexMatrix(users, users);
        for (std::size_t c = 0; c < n_clusters; ++c) {
          ComplexMatrix gc = cluster_gram(c);
          if (st.fmt_) gc = quantize_hermitian(gc, *st.fmt_);
          auto dst = g.data();
          auto src = gc.data();
          for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
        }
      }
      st.whiteners_.push_back(make_whitener(g, kGlobalEntry, use_global));
      break;
    }
    case Architecture::FD:
      for (std::size_t c = 0; c < n_clusters; ++c)
        st.whiteners_.push_back(make_whitener(cluster_gram(c), c, cluster_store));
      break;
  }
  return st;
}

PrecodeResult PrecoderState::apply(std::span<const cplx> s) const {
  const std::size_t users = beamformers_.front().cols();
  if (s.size() != users) fail(ErrorCode::DimensionMismatch, "precoder: s length != U");

  std::size_t total = 0;
  for (const auto& bf : beamformers_) total += bf.rows();
  PrecodeResult r;
  r.x_dl.resize(total);

  auto place = [&](std::size_t c, std::size_t offset, const ComplexVector& w, double scale) {
    ComplexVector xc = multiply(beamformers_[c], w);
    for (std::size_t i = 0; i < xc.size(); ++i) r.x_dl[offset + i] = scale * xc[i];
  };

  if (cfg_.architecture == Architecture::FD) {
    const ComplexVector s_b = fmt_ ? quantize_payload(s, *fmt_) : ComplexVector(s.begin(), s.end());
    const double share = 1.0 / static_cast<double>(beamformers_.size());
    std::size_t offset = 0;
    for (std::size_t c = 0; c < beamformers_.size(); ++c) {
      place(c, offset, whiteners_[c].solve(s_b, cfg_.inversion), share);
      offset += beamformers_[c].rows();
    }
  } else {
    ComplexVector w = whiteners_.front().solve(s, cfg_.inversion);
    if (fmt_ && cfg_.architecture == Architecture::PD) quantize_in_place(w, *fmt_);
    std::size_t offset = 0;
    for (std::size_t c = 0; c < beamformers_.size(); ++c) {
      place(c, offset, w, 1.0);
      offset += beamformers_[c].rows();
    }
  }

  const double power = squared_norm(r.x_dl);
  if (!(power > 0.0) || !std::isfinite(power))
    fail(ErrorCode::InvalidParameter, "precoder: transmit vector has no energy");
  r.beta = std::sqrt(power / cfg_.transmit_power);
  for (cplx& v : r.x_dl) v /= r.beta;
  return r;
}

PrecodeResult precode_wf(std::span<const ComplexMatrix> h_dl_clusters, std::span<const cplx> s,
                         const PrecoderConfig& cfg, const ReciprocityStore* store) {
  if (cfg.algorithm != Precoder::WF)
    fail(ErrorCode::InvalidParameter, "precode_wf: configuration is not WF");
  return PrecoderState::prepare(h_dl_clusters, cfg, store ? store->block_index : 0, store)
      .apply(s);
}

PrecodeResult precode_zf(std::span<const ComplexMatrix> h_dl_clusters, std::span<const cplx> s,
                         const PrecoderConfig& cfg, const ReciprocityStore* store) {
  if (cfg.algorithm != Precoder::ZF || cfg.kappa != 0.0)
    fail(ErrorCode::InvalidParameter, "precode_zf: configuration is not ZF");
  return PrecoderState::prepare(h_dl_clusters, cfg, store ? store->block_index : 0, store)
      .apply(s);
}

ComplexVector simulate_downlink(const ComplexMatrix& h_dl, const PrecodeResult& result,
                                double noise_variance, RngStream& rng) {
  ComplexVector y = multiply(h_dl, result.x_dl);
  for (cplx& v : y) {
    const cplx n = rng.complex_normal(1.0);
    if (noise_variance > 0.0) v += std::sqrt(noise_variance) * n;
    v *= result.beta;
  }
  return y;
}

}  // namespace dbp
