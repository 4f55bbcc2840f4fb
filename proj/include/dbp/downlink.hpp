// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DBP_DOWNLINK_HPP
#define DBP_DOWNLINK_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dbp/numerics.hpp"
#include "dbp/quant.hpp"
#include "dbp/rng.hpp"
#include "dbp/uplink.hpp"

namespace dbp {

enum class Precoder { WF, ZF };
std::string_view to_string(Precoder p);

struct PrecoderConfig {
  Precoder algorithm = Precoder::WF;
  Architecture architecture = Architecture::PD;
  Inversion inversion = Inversion::Implicit;
  double kappa = 0.0;           // WF regularizer; 0 for ZF
  double transmit_power = 1.0;  // P_tx

  // WF: kappa = U N_0 / P_tx (shared by every FD cluster). ZF: kappa = 0.
  static PrecoderConfig make(Precoder algorithm, Architecture architecture,
                             Inversion inversion, double noise_variance,
                             std::size_t users, double transmit_power);
};

struct PrecodeResult {
  ComplexVector x_dl;  // stacked per-cluster beamforming vectors, length B
  double beta = 1.0;   // x_dl = x_unscaled / beta, ||x_dl||^2 = P_tx
};

// H_dl = H_ul^T (reciprocity, no conjugation).
ComplexMatrix reciprocal_channel(const ComplexMatrix& h_ul);
// Per-cluster U x B_c downlink blocks from the uplink cluster blocks.
std::vector<ComplexMatrix> reciprocal_clusters(std::span<const ComplexMatrix> h_ul_clusters);

// Uplink artifacts kept for downlink reuse within one coherence block.
struct StoredInversion {
  double regularizer = 0.0;  // the rho the factor / inverse was computed with
  ComplexMatrix factor;      // Cholesky factor of G_ul + rho I (may be empty)
  ComplexMatrix inverse;     // (G_ul + rho I)^-1 (may be empty)
};

struct ReciprocityEntry {
  ComplexMatrix gram;
  std::optional<StoredInversion> inversion;
};

struct ReciprocityStore {
  std::uint64_t block_index = 0;
  std::optional<ReciprocityEntry> global;  // centralized or PD-fused
  std::vector<ReciprocityEntry> clusters;  // per-cluster (FD), may be empty
};

inline constexpr std::size_t kGlobalEntry = static_cast<std::size_t>(-1);

// G_dl = (G_ul)^T. Throws StaleCache on block mismatch or a missing entry.
ComplexMatrix reuse_gram(const ReciprocityStore& store, std::uint64_t block_index,
                         std::size_t cluster = kGlobalEntry);
// conj(L_ul), the Cholesky factor of G_dl + rho I.
ComplexMatrix reuse_cholesky(const ReciprocityStore& store, std::uint64_t block_index,
                             std::size_t cluster = kGlobalEntry);
// ((G_ul + rho I)^-1)^T.
ComplexMatrix reuse_inverse(const ReciprocityStore& store, std::uint64_t block_index,
                            std::size_t cluster = kGlobalEntry);

// Channel-dependent precoder work for one coherence block. Centralized and PD
// whiten centrally (PD from fused cluster Grams) and broadcast w; FD whitens
// per cluster with its local Gram, each cluster scales its beamformer by 1/C,
// and the concatenation is jointly normalized. Artifacts from a store are
// used when present and matching the regularizer; the arithmetic is the same
// as the fresh path, so results are bit-identical.
class PrecoderState {
 public:
  static PrecoderState prepare(std::span<const ComplexMatrix> h_dl_clusters,
                               const PrecoderConfig& cfg, std::uint64_t block_index,
                               const ReciprocityStore* store = nullptr,
                               const MinifloatFormat* payload_format = nullptr);

  PrecodeResult apply(std::span<const cplx> s) const;

  std::uint64_t block_index() const noexcept { return block_; }
  const PrecoderConfig& config() const noexcept { return cfg_; }

 private:
  struct Whitener {
    ComplexMatrix factor;
    ComplexMatrix inverse;
    ComplexVector solve(std::span<const cplx> s, Inversion inv) const;
  };

  PrecoderConfig cfg_;
  std::uint64_t block_ = 0;
  std::optional<MinifloatFormat> fmt_;
  std::vector<ComplexMatrix> beamformers_;  // (H_c^dl)^H, B_c x U
  std::vector<Whitener> whiteners_;         // one (C/PD) or C (FD)
};

PrecodeResult precode_wf(std::span<const ComplexMatrix> h_dl_clusters, std::span<const cplx> s,
                         const PrecoderConfig& cfg, const ReciprocityStore* store = nullptr);
PrecodeResult precode_zf(std::span<const ComplexMatrix> h_dl_clusters, std::span<const cplx> s,
                         const PrecoderConfig& cfg, const ReciprocityStore* store = nullptr);

// y = H_dl x_dl + n, n ~ CN(0, N_0); returns the genie-scaled UE estimates
// beta * y.
ComplexVector simulate_downlink(const ComplexMatrix& h_dl, const PrecodeResult& result,
                                double noise_variance, RngStream& rng);

}  // namespace dbp

#endif  // DBP_DOWNLINK_HPP
