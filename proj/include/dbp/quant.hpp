// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DBP_QUANT_HPP
#define DBP_QUANT_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "dbp/numerics.hpp"
#include "dbp/uplink.hpp"

namespace dbp {

// IEEE-like minifloat: 1 sign bit, exponent_bits, mantissa_bits, bias
// 2^(e-1) - 1, subnormals, all-ones exponent reserved for inf/NaN.
struct MinifloatFormat {
  unsigned exponent_bits = 5;
  unsigned mantissa_bits = 2;

  static constexpr MinifloatFormat fp8() { return {5, 2}; }
  static constexpr MinifloatFormat fp32() { return {8, 23}; }
  // "fp8", "fp32" or "custom:1/e/m".
  static MinifloatFormat parse(std::string_view text);

  unsigned width() const noexcept { return 1 + exponent_bits + mantissa_bits; }
  int bias() const noexcept { return (1 << (exponent_bits - 1)) - 1; }
  double max_finite() const;
  double min_subnormal() const;
  std::string name() const;

  // exponent_bits in [2, 11], mantissa_bits >= 1, width <= 32.
  void validate() const;

  friend bool operator==(const MinifloatFormat&, const MinifloatFormat&) = default;
};

// Round-to-nearest-even; overflow and infinities saturate to max finite.
std::uint32_t encode(double x, const MinifloatFormat& fmt);
double decode(std::uint32_t code, const MinifloatFormat& fmt);
inline double quantize(double x, const MinifloatFormat& fmt) {
  return decode(encode(x, fmt), fmt);
}

using PackedWord = std::uint32_t;

// Lane 0 lands in the least-significant byte.
PackedWord pack4(const std::array<std::uint8_t, 4>& codes);
std::array<std::uint8_t, 4> unpack4(PackedWord word);
// Checked variants: WidthError unless fmt is 8 bits wide.
PackedWord pack4(const std::array<std::uint8_t, 4>& codes, const MinifloatFormat& fmt);
std::array<std::uint8_t, 4> unpack4(PackedWord word, const MinifloatFormat& fmt);

// Payloads crossing a cluster boundary. Every real component goes through
// encode/decode; Hermitian matrices are quantized on the lower triangle and
// mirrored; variances are clamped to the smallest positive code.
void quantize_in_place(std::span<cplx> v, const MinifloatFormat& fmt);
ComplexVector quantize_payload(std::span<const cplx> v, const MinifloatFormat& fmt);
ComplexMatrix quantize_hermitian(const ComplexMatrix& g, const MinifloatFormat& fmt);
LocalPreprocessOutput quantize_payload(const LocalPreprocessOutput& p, const MinifloatFormat& fmt);
LocalEstimate quantize_payload(const LocalEstimate& e, const MinifloatFormat& fmt);

}  // namespace dbp

#endif  // DBP_QUANT_HPP
