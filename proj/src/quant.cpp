// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/quant.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "dbp/error.hpp"

namespace dbp {

namespace {

[[noreturn]] void precision_error(const std::string& msg) {
  throw Error(ErrorCode::ConfigError, "precision: " + msg, "precision");
}

unsigned parse_uint(std::string_view s) {
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    precision_error("expected an integer, got '" + std::string(s) + "'");
  return v;
}

}  // namespace

MinifloatFormat MinifloatFormat::parse(std::string_view text) {
  if (text == "fp8") return fp8();
  if (text == "fp32") return fp32();
  constexpr std::string_view prefix = "custom:";
  if (!text.starts_with(prefix))
    precision_error("unknown precision '" + std::string(text) + "'");
  text.remove_prefix(prefix.size());
  const auto a = text.find('/');
  const auto b = text.find('/', a == std::string_view::npos ? a : a + 1);
  if (a == std::string_view::npos || b == std::string_view::npos)
    precision_error("custom precision must look like custom:1/e/m");
  if (parse_uint(text.substr(0, a)) != 1) precision_error("sign bits must be 1");
  MinifloatFormat f{parse_uint(text.substr(a + 1, b - a - 1)), parse_uint(text.substr(b + 1))};
  try {
    f.validate();
  } catch (const Error& e) {
    precision_error(e.what());
  }
  return f;
}

void MinifloatFormat::validate() const {
  if (exponent_bits < 2 || exponent_bits > 11)
    fail(ErrorCode::InvalidParameter, "exponent bits must be in [2, 11]");
  if (mantissa_bits < 1) fail(ErrorCode::InvalidParameter, "mantissa bits must be >= 1");
  if (width() > 32) fail(ErrorCode::InvalidParameter, "format wider than 32 bits");
}

double MinifloatFormat::max_finite() const {
  const int emax = bias();
  return std::ldexp(2.0 - std::ldexp(1.0, -static_cast<int>(mantissa_bits)), emax);
}

double MinifloatFormat::min_subnormal() const {
  return std::ldexp(1.0, 1 - bias() - static_cast<int>(mantissa_bits));
}

std::string MinifloatFormat::name() const {
  if (*this == fp8()) return "fp8";
  if (*this == fp32()) return "fp32";
  return "custom:1/" + std::to_string(exponent_bits) + "/" + std::to_string(mantissa_bits);
}

std::uint32_t encode(double x, const MinifloatFormat& fmt) {
  const unsigned m = fmt.mantissa_bits;
  const unsigned e = fmt.exponent_bits;
  const std::uint32_t sign = std::signbit(x) ? (1U << (e + m)) : 0U;
  const std::uint32_t all_ones = (1U << e) - 1U;
  const std::uint32_t max_code = ((all_ones - 1U) << m) | ((1U << m) - 1U);

  if (std::isnan(x)) return (all_ones << m) | (1U << (m - 1));
  const double a = std::fabs(x);
  if (a == 0.0) return sign;
  if (std::isinf(a)) return sign | max_code;

  const int bias = fmt.bias();
  const int emin = 1 - bias;
  const int emax = bias;
  int fexp = 0;
  std::frexp(a, &fexp);
  int exponent = std::max(fexp - 1, emin);
  const double scaled = std::ldexp(a, static_cast<int>(m) - exponent);
  double n = std::nearbyint(scaled);  // ties-to-even in the default mode
  const double implicit_one = std::ldexp(1.0, static_cast<int>(m));
  if (n >= 2.0 * implicit_one) {
    n = implicit_one;
    ++exponent;
  }
  if (exponent > emax) return sign | max_code;
  if (n < implicit_one) return sign | static_cast<std::uint32_t>(n);  // subnormal
  const auto field = static_cast<std::uint32_t>(exponent + bias);
  const auto mant = static_cast<std::uint32_t>(n - implicit_one);
  return sign | (field << m) | mant;
}

double decode(std::uint32_t code, const MinifloatFormat& fmt) {
  const unsigned m = fmt.mantissa_bits;
  const unsigned e = fmt.exponent_bits;
  const bool negative = (code >> (e + m)) & 1U;
  const std::uint32_t field = (code >> m) & ((1U << e) - 1U);
  const std::uint32_t mant = code & ((1U << m) - 1U);
  const int bias = fmt.bias();
  double v = 0.0;
  if (field == (1U << e) - 1U) {
    v = mant == 0 ? HUGE_VAL : std::nan("");
  } else if (field == 0) {
    v = std::ldexp(static_cast<double>(mant), 1 - bias - static_cast<int>(m));
  } else {
    v = std::ldexp(static_cast<double>((1U << m) + mant),
                   static_cast<int>(field) - bias - static_cast<int>(m));
  }
  return negative ? -v : v;
}

PackedWord pack4(const std::array<std::uint8_t, 4>& codes) {
  PackedWord w = 0;
  for (int lane = 3; lane >= 0; --lane) w = (w << 8) | codes[static_cast<std::size_t>(lane)];
  return w;
}

std::array<std::uint8_t, 4> unpack4(PackedWord word) {
  std::array<std::uint8_t, 4> out{};
  for (std::size_t lane = 0; lane < 4; ++lane)
    out[lane] = static_cast<std::uint8_t>((word >> (8 * lane)) & 0xFFU);
  return out;
}

PackedWord pack4(const std::array<std::uint8_t, 4>& codes, const MinifloatFormat& fmt) {
  if (fmt.width() != 8) fail(ErrorCode::WidthError, "pack4 needs an 8-bit format");
  return pack4(codes);
}

std::array<std::uint8_t, 4> unpack4(PackedWord word, const MinifloatFormat& fmt) {
  if (fmt.width() != 8) fail(ErrorCode::WidthError, "unpack4 needs an 8-bit format");
  return unpack4(word);
}

void quantize_in_place(std::span<cplx> v, const MinifloatFormat& fmt) {
  for (cplx& z : v) z = {quantize(z.real(), fmt), quantize(z.imag(), fmt)};
}

ComplexVector quantize_payload(std::span<const cplx> v, const MinifloatFormat& fmt) {
  ComplexVector out(v.begin(), v.end());
  quantize_in_place(out, fmt);
  return out;
}

ComplexMatrix quantize_hermitian(const ComplexMatrix& g, const MinifloatFormat& fmt) {
  ComplexMatrix q(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i) {
    q(i, i) = {quantize(g(i, i).real(), fmt), 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      q(i, j) = {quantize(g(i, j).real(), fmt), quantize(g(i, j).imag(), fmt)};
      q(j, i) = std::conj(q(i, j));
    }
  }
  return q;
}

LocalPreprocessOutput quantize_payload(const LocalPreprocessOutput& p,
                                       const MinifloatFormat& fmt) {
  return {quantize_hermitian(p.gram, fmt), quantize_payload(p.y_mrc, fmt)};
}

LocalEstimate quantize_payload(const LocalEstimate& e, const MinifloatFormat& fmt) {
  LocalEstimate q{quantize_payload(e.x_hat, fmt), RealVector(e.variance.size())};
  const double floor = fmt.min_subnormal();
  for (std::size_t i = 0; i < e.variance.size(); ++i)
    q.variance[i] = std::max(quantize(e.variance[i], fmt), floor);
  return q;
}

}  // namespace dbp
