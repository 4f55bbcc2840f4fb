// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DBP_UPLINK_HPP
#define DBP_UPLINK_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "dbp/numerics.hpp"

namespace dbp {

enum class Architecture { Centralized, PD, FD };
enum class Inversion { Explicit, Implicit };
enum class Detector { MMSE, ZF, MRC };

std::string_view to_string(Architecture a);
std::string_view to_string(Inversion i);
std::string_view to_string(Detector d);

struct DetectorConfig {
  Detector algorithm = Detector::MMSE;
  Architecture architecture = Architecture::PD;
  Inversion inversion = Inversion::Implicit;
  double rho = 0.0;  // N_0 / E_s for MMSE, 0 for ZF
  // MMSE only: divide each estimate by its bias factor
  // mu_u = 1 - rho [(G + rho I)^-1]_uu before it is sliced or fused.
  bool unbiased = false;

  // MMSE with rho = N_0 / E_s; ZF and MRC with rho = 0.
  static DetectorConfig make(Detector algorithm, Architecture architecture,
                             Inversion inversion, double noise_variance,
                             double symbol_energy, bool unbiased = false);
};

// Per-cluster payload fused by the PD architecture.
struct LocalPreprocessOutput {
  ComplexMatrix gram;    // G_c = H_c^H H_c
  ComplexVector y_mrc;   // H_c^H y_c
};

// Per-cluster payload fused by the FD architecture.
struct LocalEstimate {
  ComplexVector x_hat;
  RealVector variance;   // per-UE post-equalization error variance
};

LocalPreprocessOutput local_preprocess(const ComplexMatrix& h_c, std::span<const cplx> y_c);

struct FusedPreprocess {
  ComplexMatrix gram;
  ComplexVector y_mrc;
};

// Sums in ascending cluster order.
FusedPreprocess pd_fuse(std::span<const LocalPreprocessOutput> locals);

// x = (H^H H + rho I)^-1 H^H y through a fresh factorization.
ComplexVector detect_centralized(const ComplexMatrix& h, std::span<const cplx> y,
                                 const DetectorConfig& det);

// Channel-only work for one coherence block: the Cholesky factor of
// G + rho I (implicit) or its inverse (explicit), plus the inverse diagonal
// when variances are needed.
class EqualizerCache {
 public:
  // No-op when block, algorithm, inversion and rho all match the cached state.
  void refresh(std::uint64_t block_index, const ComplexMatrix& gram,
               const DetectorConfig& det, bool need_variance = false);

  bool valid_for(std::uint64_t block_index) const {
    return block_.has_value() && *block_ == block_index;
  }
  std::optional<std::uint64_t> block_index() const { return block_; }
  int factorizations() const noexcept { return factorizations_; }

  // (G + rho I)^-1 b with the cached data, divided by the bias factors for
  // unbiased MMSE; MRC divides by diag(G).
  ComplexVector apply(std::span<const cplx> b) const;
  const RealVector& inverse_diagonal() const { return inv_diag_; }
  // mu_u per UE; empty unless the cached detector is unbiased MMSE.
  const RealVector& bias_factors() const { return bias_; }
  const ComplexMatrix& factor() const { return factor_; }
  const ComplexMatrix& inverse() const { return inverse_; }

  void invalidate() { block_.reset(); }

 private:
  std::optional<std::uint64_t> block_;
  Detector algorithm_ = Detector::MMSE;
  Inversion inversion_ = Inversion::Implicit;
  double rho_ = 0.0;
  bool unbiased_ = false;
  ComplexMatrix factor_;
  ComplexMatrix inverse_;
  RealVector inv_diag_;
  RealVector bias_;
  int factorizations_ = 0;
};

// PD central equalization. The cache must already hold block_index
// (StaleCache otherwise); the overload taking G refreshes it first.
ComplexVector detect_pd(std::span<const cplx> y_mrc, const DetectorConfig& det,
                        const EqualizerCache& cache, std::uint64_t block_index);
ComplexVector detect_pd(const ComplexMatrix& gram, std::span<const cplx> y_mrc,
                        const DetectorConfig& det, EqualizerCache& cache,
                        std::uint64_t block_index);

// FD local equalization; variance_u = N_0 [(G_c + rho I)^-1]_uu, or that value
// divided by mu_u for unbiased MMSE (the error variance of the rescaled
// estimate). With N_0 = 0 the unit-noise variance is reported instead, since
// fusion weights only depend on variance ratios.
LocalEstimate fd_local_detect(const LocalPreprocessOutput& prep, const DetectorConfig& det,
                              double noise_variance, EqualizerCache& cache,
                              std::uint64_t block_index);
LocalEstimate fd_local_detect(const ComplexMatrix& gram, std::span<const cplx> y_mrc,
                              const DetectorConfig& det, double noise_variance,
                              EqualizerCache& cache, std::uint64_t block_index);

// Per-UE inverse-variance weighting, normalized after summation.
ComplexVector fd_fuse(std::span<const LocalEstimate> locals);
// lambda_{c,u} from the same rule, exposed for inspection.
std::vector<RealVector> fd_weights(std::span<const LocalEstimate> locals);

// x_u = y_mrc_u / G_uu.
ComplexVector detect_mrc(std::span<const cplx> y_mrc, const ComplexMatrix& gram);

}  // namespace dbp

#endif  // DBP_UPLINK_HPP
