// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/rng.hpp"

#include <cmath>
#include <numbers>

namespace dbp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t derive_seed(std::uint64_t seed, const StreamId& id) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ id.trial);
  h = splitmix64(h ^ id.block);
  h = splitmix64(h ^ static_cast<std::uint64_t>(id.purpose));
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, StreamId id) : engine_(derive_seed(seed, id)) {}

double RngStream::uniform() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

cplx RngStream::complex_normal(double variance) {
  const double s = std::sqrt(0.5 * variance);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

int RngStream::bit() {
  if (bits_left_ == 0) {
    bit_buffer_ = engine_();
    bits_left_ = 64;
  }
  const int b = static_cast<int>(bit_buffer_ & 1U);
  bit_buffer_ >>= 1;
  --bits_left_;
  return b;
}

}  // namespace dbp
