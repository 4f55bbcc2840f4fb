// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dbp/error.hpp"
#include "dbp/quant.hpp"
#include "oracles.hpp"

using namespace dbp;

namespace {

const MinifloatFormat kFp8 = MinifloatFormat::fp8();

// Independent fp8 1/5/2 decoder built from the field definitions.
double reference_decode(unsigned code) {
  const int sign = (code >> 7) & 1;
  const int e = (code >> 2) & 0x1F;
  const int m = code & 3;
  double v;
  if (e == 0) v = std::ldexp(m / 4.0, -14);
  else if (e == 31) v = m == 0 ? std::numeric_limits<double>::infinity() : std::nan("");
  else v = std::ldexp(1.0 + m / 4.0, e - 15);
  return sign ? -v : v;
}

}  // namespace

TEST_CASE("fp8 codec examples") {
  CHECK(encode(0.0, kFp8) == 0x00);
  CHECK(encode(-0.0, kFp8) == 0x80);
  CHECK(encode(1.0, kFp8) == 0x3C);
  CHECK(decode(0x3C, kFp8) == 1.0);
  CHECK(quantize(1.1, kFp8) == 1.0);
  CHECK(quantize(1.2, kFp8) == 1.25);
  // Ties to even mantissa: 1.125 sits between 1.0 (m=0) and 1.25 (m=1).
  CHECK(quantize(1.125, kFp8) == 1.0);
  CHECK(quantize(1.375, kFp8) == 1.5);
  CHECK(kFp8.max_finite() == 57344.0);
  CHECK(kFp8.min_subnormal() == std::ldexp(1.0, -16));
  CHECK(quantize(1e9, kFp8) == 57344.0);
  CHECK(quantize(-std::numeric_limits<double>::infinity(), kFp8) == -57344.0);
  CHECK(quantize(std::ldexp(1.0, -16), kFp8) == std::ldexp(1.0, -16));
  CHECK(quantize(std::ldexp(1.0, -18), kFp8) == 0.0);
  CHECK(kFp8.bias() == 15);
  CHECK(kFp8.width() == 8);
}

TEST_CASE("fp8 exhaustive decode and round trip") {
  for (unsigned c = 0; c < 256; ++c) {
    const double ref = reference_decode(c);
    const double v = decode(c, kFp8);
    if (std::isnan(ref)) {
      CHECK(std::isnan(v));
      continue;
    }
    CHECK(v == ref);
    if (std::isfinite(ref)) CHECK(encode(v, kFp8) == c);
  }
}

TEST_CASE("fp8 monotonicity") {
  double prev = -1.0;
  for (unsigned c = 0; c < 0x7C; ++c) {
    const double v = decode(c, kFp8);
    CHECK(v > prev);
    prev = v;
  }
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> d(-70000.0, 70000.0);
  for (int i = 0; i < 10000; ++i) {
    double a = d(gen), b = d(gen);
    if (i % 2) {
      a /= 1e6;
      b /= 1e6;
    }
    if (a > b) std::swap(a, b);
    CHECK(quantize(a, kFp8) <= quantize(b, kFp8));
  }
}

TEST_CASE("fp8 relative error bound in the normal range") {
  const double bound = std::ldexp(1.0, -3) / (1.0 - std::ldexp(1.0, -3));
  CHECK(bound == doctest::Approx(0.142857).epsilon(1e-5));
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> expo(-14.0, 15.5);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = std::exp2(expo(gen));
    worst = std::max(worst, std::abs(quantize(x, kFp8) - x) / x);
  }
  CHECK(worst <= bound);
  CHECK(worst > 0.1);
}

TEST_CASE("packing") {
  CHECK(pack4({0, 0, 0, 0}) == 0u);
  CHECK(pack4({0x3C, 0, 0, 0}) == 0x3Cu);
  CHECK(pack4({1, 2, 3, 4}) == 0x04030201u);
  std::mt19937_64 gen(6);
  for (int i = 0; i < 10000; ++i) {
    const std::array<std::uint8_t, 4> c{static_cast<std::uint8_t>(gen()), static_cast<std::uint8_t>(gen()),
                                        static_cast<std::uint8_t>(gen()), static_cast<std::uint8_t>(gen())};
    CHECK(unpack4(pack4(c, kFp8), kFp8) == c);
  }
  try {
    pack4({0, 0, 0, 0}, MinifloatFormat::fp32());
    FAIL("expected WidthError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WidthError);
  }
  CHECK_THROWS_AS(unpack4(0u, MinifloatFormat{4, 4}), Error);
}

TEST_CASE("payload quantization") {
  std::mt19937_64 gen(7);
  const ComplexMatrix h = oracle::random_matrix(32, 8, gen);
  const LocalPreprocessOutput p{gram(h), oracle::random_vector(8, gen)};

  const LocalPreprocessOutput wide = quantize_payload(p, MinifloatFormat::fp32());
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(std::abs(wide.y_mrc[i] - p.y_mrc[i]) <= 1e-6 * std::abs(p.y_mrc[i]));
    for (std::size_t j = 0; j < 8; ++j)
      CHECK(std::abs(wide.gram(i, j) - p.gram(i, j)) <= 1e-6 * std::abs(p.gram(i, j)));
  }

  const LocalPreprocessOutput zero = quantize_payload(LocalPreprocessOutput{ComplexMatrix(3, 3), ComplexVector(3)}, kFp8);
  CHECK(zero.gram == ComplexMatrix(3, 3));
  CHECK(zero.y_mrc == ComplexVector(3));

  const LocalPreprocessOutput q = quantize_payload(p, kFp8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) CHECK(q.gram(i, j) == std::conj(q.gram(j, i)));
  const LocalPreprocessOutput qq = quantize_payload(q, kFp8);
  CHECK(qq.gram == q.gram);
  CHECK(qq.y_mrc == q.y_mrc);

  // Variances stay strictly positive.
  const LocalEstimate e{{cplx(0.3, -0.2)}, {1e-30}};
  const LocalEstimate qe = quantize_payload(e, kFp8);
  CHECK(qe.variance[0] == kFp8.min_subnormal());
  CHECK(quantize_payload(qe, kFp8).variance == qe.variance);

  // Exactly representable entries pass through.
  const ComplexVector exact{cplx(1.0, -0.5), cplx(0.75, 2048.0)};
  CHECK(quantize_payload(exact, kFp8) == exact);
}

TEST_CASE("format parsing and validation") {
  CHECK(MinifloatFormat::parse("fp8") == kFp8);
  CHECK(MinifloatFormat::parse("fp32") == MinifloatFormat::fp32());
  CHECK(MinifloatFormat::parse("custom:1/4/3") == MinifloatFormat{4, 3});
  for (const char* bad : {"fp16x", "custom:1/1/3", "custom:1/5/0", "custom:1/11/25", "custom:2/5/2"})
    CHECK_THROWS_AS(MinifloatFormat::parse(bad), Error);

  // fp32 matches the hardware single-precision rounding.
  std::mt19937_64 gen(8);
  std::normal_distribution<double> n(0.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = n(gen);
    CHECK(quantize(x, MinifloatFormat::fp32()) == static_cast<double>(static_cast<float>(x)));
  }
}
