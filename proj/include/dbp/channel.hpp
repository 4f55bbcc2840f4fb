// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DBP_CHANNEL_HPP
#define DBP_CHANNEL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dbp/numerics.hpp"
#include "dbp/rng.hpp"

namespace dbp {

enum class ModulationKind { QPSK, QAM16, QAM64 };

// Square Gray-mapped constellation with unit average energy.
//
// A label of k bits is split into an in-phase half (the k/2 most significant
// bits) and a quadrature half. Each half selects an amplitude per axis:
//   QPSK:  0 -> +1, 1 -> -1
//   QAM:   Gray label g -> level index n = gray^-1(g), amplitude 2n - (M - 1)
// scaled by 1/sqrt(mean energy). Bit i of a symbol is label bit k-1-i.
class ModulationScheme {
 public:
  explicit ModulationScheme(ModulationKind kind);
  static ModulationScheme parse(std::string_view name);

  ModulationKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;
  int bits_per_symbol() const noexcept { return bits_; }
  // Points indexed by bit label.
  const std::vector<cplx>& constellation() const noexcept { return points_; }

  cplx map_label(unsigned label) const { return points_[label]; }
  // Nearest point by Euclidean distance; ties go to the smaller label.
  unsigned slice(cplx v) const;

 private:
  unsigned slice_axis(double v) const;

  ModulationKind kind_;
  int bits_;
  unsigned levels_;                  // per axis
  std::vector<double> axis_amplitude_;  // by axis label
  std::vector<cplx> points_;
};

struct SystemConfig {
  std::size_t antennas = 128;       // B
  std::size_t users = 16;           // U
  std::size_t clusters = 4;         // C
  std::size_t coherence = 1;        // N_coh, symbols per channel block
  ModulationKind modulation = ModulationKind::QAM16;
  double symbol_energy = 1.0;       // E_s
  double transmit_power = 1.0;      // P_tx

  std::size_t cluster_size() const { return antennas / clusters; }
  // Throws ConfigError naming the first violated field.
  void validate() const;
};

struct ChannelRealization {
  ComplexMatrix h;                       // B x U uplink channel
  std::vector<ComplexMatrix> clusters;   // C blocks of B_c consecutive rows
  std::uint64_t block_index = 0;
};

ChannelRealization generate_rayleigh(const SystemConfig& cfg, RngStream& rng,
                                     std::uint64_t block_index = 0);

std::vector<ComplexMatrix> partition(const ComplexMatrix& h, const SystemConfig& cfg);
std::vector<ComplexVector> partition(std::span<const cplx> y, const SystemConfig& cfg);
ComplexMatrix stack(std::span<const ComplexMatrix> blocks);

using Bits = std::vector<std::uint8_t>;

ComplexVector modulate(std::span<const std::uint8_t> bits, const ModulationScheme& scheme);
Bits demodulate_hard(std::span<const cplx> estimates, const ModulationScheme& scheme);

// y = H x + n with n ~ CN(0, N_0) i.i.d. Noise is always drawn, so streams
// stay aligned across noise levels.
ComplexVector transmit_uplink(const ComplexMatrix& h, std::span<const cplx> x,
                              double noise_variance, RngStream& rng);

// N_0 = U E_s / 10^(snr_db / 10); +inf maps to 0.
double snr_to_noise(const SystemConfig& cfg, double snr_db);

}  // namespace dbp

#endif  // DBP_CHANNEL_HPP
