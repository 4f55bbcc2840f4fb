// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DBP_RNG_HPP
#define DBP_RNG_HPP

#include <cstdint>
#include <random>

#include "dbp/numerics.hpp"

namespace dbp {

enum class StreamPurpose : std::uint32_t {
  Channel = 1,
  UplinkBits = 2,
  UplinkNoise = 3,
  DownlinkBits = 4,
  DownlinkNoise = 5,
  Instance = 6,
};

// (trial, block, purpose) triple naming an independent random stream.
struct StreamId {
  std::uint64_t trial = 0;
  std::uint64_t block = 0;
  StreamPurpose purpose = StreamPurpose::Channel;
};

// Deterministic random stream. The engine is seeded from a SplitMix64 hash
// of (seed, stream id); normals come from Box-Muller on 53-bit uniforms, so
// draws are identical on every conforming standard library.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamId id);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on (0, 1].
  double uniform();
  double normal();
  // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  cplx complex_normal(double variance = 1.0);
  int bit();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
  std::uint64_t bit_buffer_ = 0;
  int bits_left_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace dbp

#endif  // DBP_RNG_HPP
