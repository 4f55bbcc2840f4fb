// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/channel.hpp"

#include <cmath>

#include "dbp/error.hpp"

namespace dbp {

namespace {

unsigned gray_inverse(unsigned g) {
  unsigned n = g;
  for (unsigned shift = 1; shift < 32; shift <<= 1) n ^= n >> shift;
  return n;
}

int bits_for(ModulationKind kind) {
  switch (kind) {
    case ModulationKind::QPSK: return 2;
    case ModulationKind::QAM16: return 4;
    case ModulationKind::QAM64: return 6;
  }
  return 0;
}

[[noreturn]] void config_error(const std::string& key, const std::string& msg) {
  throw Error(ErrorCode::ConfigError, key + ": " + msg, key);
}

}  // namespace

ModulationScheme::ModulationScheme(ModulationKind kind)
    : kind_(kind), bits_(bits_for(kind)), levels_(1U << (bits_for(kind) / 2)) {
  const unsigned half = static_cast<unsigned>(bits_ / 2);
  const double m = static_cast<double>(levels_);
  // Mean energy of a square M^2-QAM grid with odd integer levels.
  const double scale = 1.0 / std::sqrt(2.0 * (m * m - 1.0) / 3.0);

  axis_amplitude_.resize(levels_);
  for (unsigned g = 0; g < levels_; ++g) {
    if (kind == ModulationKind::QPSK) {
      axis_amplitude_[g] = (g == 0 ? 1.0 : -1.0) * scale;
    } else {
      const double n = gray_inverse(g);
      axis_amplitude_[g] = (2.0 * n - (m - 1.0)) * scale;
    }
  }
  points_.resize(std::size_t{1} << bits_);
  for (unsigned label = 0; label < points_.size(); ++label) {
    const unsigned gi = label >> half;
    const unsigned gq = label & (levels_ - 1U);
    points_[label] = {axis_amplitude_[gi], axis_amplitude_[gq]};
  }
}

ModulationScheme ModulationScheme::parse(std::string_view name) {
  if (name == "QPSK" || name == "qpsk" || name == "4QAM")
    return ModulationScheme(ModulationKind::QPSK);
  if (name == "16QAM" || name == "16qam" || name == "QAM16")
    return ModulationScheme(ModulationKind::QAM16);
  if (name == "64QAM" || name == "64qam" || name == "QAM64")
    return ModulationScheme(ModulationKind::QAM64);
  config_error("modulation", "unknown modulation '" + std::string(name) + "'");
}

std::string_view ModulationScheme::name() const noexcept {
  switch (kind_) {
    case ModulationKind::QPSK: return "QPSK";
    case ModulationKind::QAM16: return "16QAM";
    case ModulationKind::QAM64: return "64QAM";
  }
  return "";
}

unsigned ModulationScheme::slice_axis(double v) const {
  unsigned best = 0;
  double best_d = std::abs(v - axis_amplitude_[0]);
  for (unsigned g = 1; g < levels_; ++g) {
    const double d = std::abs(v - axis_amplitude_[g]);
    if (d < best_d) {
      best = g;
      best_d = d;
    }
  }
  return best;
}

unsigned ModulationScheme::slice(cplx v) const {
  const unsigned half = static_cast<unsigned>(bits_ / 2);
  return (slice_axis(v.real()) << half) | slice_axis(v.imag());
}

void SystemConfig::validate() const {
  if (antennas < 1) config_error("B", "must be >= 1");
  if (users < 1) config_error("U", "must be >= 1");
  if (clusters < 1) config_error("C", "must be >= 1");
  if (antennas % clusters != 0)
    config_error("C", "B = " + std::to_string(antennas) +
                          " is not divisible into equal clusters");
  if (coherence < 1) config_error("n_coh", "must be >= 1");
  if (!(symbol_energy > 0.0) || !std::isfinite(symbol_energy))
    config_error("e_s", "must be positive");
  if (!(transmit_power > 0.0) || !std::isfinite(transmit_power))
    config_error("p_tx", "must be positive");
}

ChannelRealization generate_rayleigh(const SystemConfig& cfg, RngStream& rng,
                                     std::uint64_t block_index) {
  ChannelRealization real;
  real.h = ComplexMatrix(cfg.antennas, cfg.users);
  for (cplx& v : real.h.data()) v = rng.complex_normal(1.0);
  real.clusters = partition(real.h, cfg);
  real.block_index = block_index;
  return real;
}

std::vector<ComplexMatrix> partition(const ComplexMatrix& h, const SystemConfig& cfg) {
  if (h.rows() != cfg.antennas || cfg.clusters == 0 ||
      cfg.antennas % cfg.clusters != 0)
    fail(ErrorCode::DimensionMismatch, "partition: channel rows do not match B");
  const std::size_t bc = cfg.cluster_size();
  std::vector<ComplexMatrix> out;
  out.reserve(cfg.clusters);
  for (std::size_t c = 0; c < cfg.clusters; ++c) out.push_back(h.row_block(c * bc, bc));
  return out;
}

std::vector<ComplexVector> partition(std::span<const cplx> y, const SystemConfig& cfg) {
  if (y.size() != cfg.antennas || cfg.clusters == 0 || cfg.antennas % cfg.clusters != 0)
    fail(ErrorCode::DimensionMismatch, "partition: vector length does not match B");
  const std::size_t bc = cfg.cluster_size();
  std::vector<ComplexVector> out;
  for (std::size_t c = 0; c < cfg.clusters; ++c)
    out.emplace_back(y.begin() + static_cast<std::ptrdiff_t>(c * bc),
                     y.begin() + static_cast<std::ptrdiff_t>((c + 1) * bc));
  return out;
}

ComplexMatrix stack(std::span<const ComplexMatrix> blocks) {
  if (blocks.empty()) fail(ErrorCode::DimensionMismatch, "stack: no blocks");
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != blocks.front().cols())
      fail(ErrorCode::DimensionMismatch, "stack: column mismatch");
    rows += b.rows();
  }
  ComplexMatrix out(rows, blocks.front().cols());
  std::size_t r = 0;
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < b.rows(); ++i, ++r)
      for (std::size_t j = 0; j < b.cols(); ++j) out(r, j) = b(i, j);
  return out;
}

ComplexVector modulate(std::span<const std::uint8_t> bits, const ModulationScheme& scheme) {
  const auto k = static_cast<std::size_t>(scheme.bits_per_symbol());
  if (bits.size() % k != 0)
    fail(ErrorCode::LengthError, "modulate: bit count is not a multiple of bits per symbol");
  ComplexVector out(bits.size() / k);
  for (std::size_t s = 0; s < out.size(); ++s) {
    unsigned label = 0;
    for (std::size_t i = 0; i < k; ++i) label = (label << 1) | (bits[s * k + i] & 1U);
    out[s] = scheme.map_label(label);
  }
  return out;
}

Bits demodulate_hard(std::span<const cplx> estimates, const ModulationScheme& scheme) {
  const auto k = static_cast<std::size_t>(scheme.bits_per_symbol());
  Bits out(estimates.size() * k);
  for (std::size_t s = 0; s < estimates.size(); ++s) {
    const unsigned label = scheme.slice(estimates[s]);
    for (std::size_t i = 0; i < k; ++i)
      out[s * k + i] = static_cast<std::uint8_t>((label >> (k - 1 - i)) & 1U);
  }
  return out;
}

ComplexVector transmit_uplink(const ComplexMatrix& h, std::span<const cplx> x,
                              double noise_variance, RngStream& rng) {
  ComplexVector y = multiply(h, x);
  for (cplx& v : y) {
    const cplx n = rng.complex_normal(1.0);
    if (noise_variance > 0.0) v += std::sqrt(noise_variance) * n;
  }
  return y;
}

double snr_to_noise(const SystemConfig& cfg, double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  return static_cast<double>(cfg.users) * cfg.symbol_energy / std::pow(10.0, snr_db / 10.0);
}

}  // namespace dbp
