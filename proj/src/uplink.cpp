// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/uplink.hpp"

#include <cmath>

#include "dbp/error.hpp"

namespace dbp {

namespace {

constexpr double kDegenerateColumn = 1e-14;

}  // namespace

std::string_view to_string(Architecture a) {
  switch (a) {
    case Architecture::Centralized: return "C";
    case Architecture::PD: return "PD";
    case Architecture::FD: return "FD";
  }
  return "";
}

std::string_view to_string(Inversion i) {
  return i == Inversion::Explicit ? "explicit" : "implicit";
}

std::string_view to_string(Detector d) {
  switch (d) {
    case Detector::MMSE: return "MMSE";
    case Detector::ZF: return "ZF";
    case Detector::MRC: return "MRC";
  }
  return "";
}

DetectorConfig DetectorConfig::make(Detector algorithm, Architecture architecture,
                                    Inversion inversion, double noise_variance,
                                    double symbol_energy, bool unbiased) {
  DetectorConfig d;
  d.algorithm = algorithm;
  d.architecture = architecture;
  d.inversion = inversion;
  d.rho = algorithm == Detector::MMSE ? noise_variance / symbol_energy : 0.0;
  d.unbiased = unbiased && algorithm == Detector::MMSE;
  return d;
}

LocalPreprocessOutput local_preprocess(const ComplexMatrix& h_c, std::span<const cplx> y_c) {
  if (h_c.rows() != y_c.size())
    fail(ErrorCode::DimensionMismatch, "local_preprocess: y_c length does not match H_c");
  return {gram(h_c), adjoint_multiply(h_c, y_c)};
}

FusedPreprocess pd_fuse(std::span<const LocalPreprocessOutput> locals) {
  if (locals.empty()) fail(ErrorCode::DimensionMismatch, "pd_fuse: no clusters");
  const std::size_t u = locals.front().y_mrc.size();
  FusedPreprocess out{ComplexMatrix(u, u), ComplexVector(u)};
  for (const auto& local : locals) {
    if (local.y_mrc.size() != u || local.gram.rows() != u || local.gram.cols() != u)
      fail(ErrorCode::DimensionMismatch, "pd_fuse: cluster payload size mismatch");
    auto g = out.gram.data();
    auto gc = local.gram.data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += gc[i];
    for (std::size_t i = 0; i < u; ++i) out.y_mrc[i] += local.y_mrc[i];
  }
  return out;
}

ComplexVector detect_centralized(const ComplexMatrix& h, std::span<const cplx> y,
                                 const DetectorConfig& det) {
  if (h.rows() != y.size())
    fail(ErrorCode::DimensionMismatch, "detect_centralized: y length does not match H");
  const ComplexMatrix g = gram(h);
  const ComplexVector y_mrc = adjoint_multiply(h, y);
  if (det.algorithm == Detector::MRC) return detect_mrc(y_mrc, g);
  EqualizerCache cache;
  cache.refresh(0, g, det);
  return cache.apply(y_mrc);
}

void EqualizerCache::refresh(std::uint64_t block_index, const ComplexMatrix& gram,
                             const DetectorConfig& det, bool need_variance) {
  if (valid_for(block_index) && det.algorithm == algorithm_ &&
      det.inversion == inversion_ && det.rho == rho_ && det.unbiased == unbiased_ &&
      (!need_variance || !inv_diag_.empty()))
    return;

  block_.reset();
  algorithm_ = det.algorithm;
  inversion_ = det.inversion;
  rho_ = det.rho;
  unbiased_ = det.unbiased && det.algorithm == Detector::MMSE;
  need_variance = need_variance || unbiased_;
  factor_ = {};
  inverse_ = {};
  inv_diag_.clear();
  bias_.clear();

  const std::size_t u = gram.rows();
  if (det.algorithm == Detector::MRC) {
    inv_diag_.resize(u);
    for (std::size_t i = 0; i < u; ++i) {
      const double d = gram(i, i).real();
      if (!(d > kDegenerateColumn))
        fail(ErrorCode::DegenerateColumn, "MRC: channel column has no energy");
      inv_diag_[i] = 1.0 / d;
    }
  } else {
    const ComplexMatrix a = add_scaled_identity(gram, det.rho);
    factor_ = cholesky(a);
    if (det.inversion == Inversion::Explicit) {
      inverse_ = inverse_from_cholesky(factor_);
      if (need_variance) {
        inv_diag_.resize(u);
        for (std::size_t i = 0; i < u; ++i) inv_diag_[i] = inverse_(i, i).real();
      }
    } else if (need_variance) {
      inv_diag_ = inverse_diagonal_from_cholesky(factor_);
    }
    if (unbiased_) {
      bias_.resize(u);
      for (std::size_t i = 0; i < u; ++i) {
        bias_[i] = 1.0 - det.rho * inv_diag_[i];
        if (!(bias_[i] > kDegenerateColumn))
          fail(ErrorCode::DegenerateColumn, "MMSE: channel column has no energy");
      }
    }
  }
  ++factorizations_;
  block_ = block_index;
}

ComplexVector EqualizerCache::apply(std::span<const cplx> b) const {
  if (!block_) fail(ErrorCode::StaleCache, "equalizer cache is empty");
  if (algorithm_ == Detector::MRC) {
    if (b.size() != inv_diag_.size())
      fail(ErrorCode::DimensionMismatch, "MRC: length mismatch");
    ComplexVector x(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) x[i] = b[i] * inv_diag_[i];
    return x;
  }
  ComplexVector x =
      inversion_ == Inversion::Explicit ? multiply(inverse_, b) : solve_cholesky(factor_, b);
  for (std::size_t i = 0; i < bias_.size(); ++i) x[i] /= bias_[i];
  return x;
}

ComplexVector detect_pd(std::span<const cplx> y_mrc, const DetectorConfig& det,
                        const EqualizerCache& cache, std::uint64_t block_index) {
  (void)det;
  if (!cache.valid_for(block_index))
    fail(ErrorCode::StaleCache, "detect_pd: cache belongs to another coherence block");
  return cache.apply(y_mrc);
}

ComplexVector detect_pd(const ComplexMatrix& gram, std::span<const cplx> y_mrc,
                        const DetectorConfig& det, EqualizerCache& cache,
                        std::uint64_t block_index) {
  cache.refresh(block_index, gram, det);
  return detect_pd(y_mrc, det, cache, block_index);
}

LocalEstimate fd_local_detect(const LocalPreprocessOutput& prep, const DetectorConfig& det,
                              double noise_variance, EqualizerCache& cache,
                              std::uint64_t block_index) {
  return fd_local_detect(prep.gram, prep.y_mrc, det, noise_variance, cache, block_index);
}

LocalEstimate fd_local_detect(const ComplexMatrix& gram, std::span<const cplx> y_mrc,
                              const DetectorConfig& det, double noise_variance,
                              EqualizerCache& cache, std::uint64_t block_index) {
  cache.refresh(block_index, gram, det, /*need_variance=*/true);
  LocalEstimate est;
  est.x_hat = cache.apply(y_mrc);
  const double n0 = noise_variance > 0.0 ? noise_variance : 1.0;
  const RealVector& d = cache.inverse_diagonal();
  est.variance.resize(d.size());
  const RealVector& mu = cache.bias_factors();
  for (std::size_t i = 0; i < d.size(); ++i)
    est.variance[i] = mu.empty() ? n0 * d[i] : n0 * d[i] / mu[i];
  return est;
}

namespace {

void check_locals(std::span<const LocalEstimate> locals) {
  if (locals.empty()) fail(ErrorCode::DimensionMismatch, "fd_fuse: no clusters");
  const std::size_t u = locals.front().x_hat.size();
  for (const auto& l : locals) {
    if (l.x_hat.size() != u || l.variance.size() != u)
      fail(ErrorCode::DimensionMismatch, "fd_fuse: cluster payload size mismatch");
    for (double v : l.variance)
      if (!(v > 0.0) || !std::isfinite(v))
        fail(ErrorCode::InvalidVariance, "fd_fuse: variance must be positive and finite");
  }
}

}  // namespace

ComplexVector fd_fuse(std::span<const LocalEstimate> locals) {
  check_locals(locals);
  const std::size_t u = locals.front().x_hat.size();
  ComplexVector x(u);
  for (std::size_t i = 0; i < u; ++i) {
    double wsum = 0.0;
    cplx acc = 0.0;
    for (const auto& l : locals) {
      const double w = 1.0 / l.variance[i];
      wsum += w;
      acc += w * l.x_hat[i];
    }
    x[i] = acc / wsum;
  }
  return x;
}

std::vector<RealVector> fd_weights(std::span<const LocalEstimate> locals) {
  check_locals(locals);
  const std::size_t u = locals.front().x_hat.size();
  std::vector<RealVector> lambda(locals.size(), RealVector(u));
  for (std::size_t i = 0; i < u; ++i) {
    double wsum = 0.0;
    for (const auto& l : locals) wsum += 1.0 / l.variance[i];
    for (std::size_t c = 0; c < locals.size(); ++c)
      lambda[c][i] = (1.0 / locals[c].variance[i]) / wsum;
  }
  return lambda;
}

ComplexVector detect_mrc(std::span<const cplx> y_mrc, const ComplexMatrix& gram) {
  if (gram.rows() != y_mrc.size())
    fail(ErrorCode::DimensionMismatch, "detect_mrc: size mismatch");
  ComplexVector x(y_mrc.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = gram(i, i).real();
    if (!(d > kDegenerateColumn))
      fail(ErrorCode::DegenerateColumn, "MRC: channel column has no energy");
    x[i] = y_mrc[i] / d;
  }
  return x;
}

}  // namespace dbp
