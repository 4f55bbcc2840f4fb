// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>

#include "dbp/channel.hpp"
#include "dbp/error.hpp"
#include "dbp/rng.hpp"
#include "oracles.hpp"

using namespace dbp;

namespace {

const ModulationKind kAll[] = {ModulationKind::QPSK, ModulationKind::QAM16, ModulationKind::QAM64};

SystemConfig small_cfg(std::size_t b, std::size_t u, std::size_t c) {
  SystemConfig cfg;
  cfg.antennas = b;
  cfg.users = u;
  cfg.clusters = c;
  return cfg;
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, {1, 2, StreamPurpose::Channel});
  RngStream b(42, {1, 2, StreamPurpose::Channel});
  RngStream c(42, {1, 2, StreamPurpose::UplinkNoise});
  RngStream d(43, {1, 2, StreamPurpose::Channel});
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs_c |= x != c.next_u64();
    differs_d |= x != d.next_u64();
  }
  CHECK(differs_c);
  CHECK(differs_d);

  RngStream u(1, {0, 0, StreamPurpose::Instance});
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("Rayleigh entries have unit variance and are uncorrelated") {
  const SystemConfig cfg = small_cfg(128, 16, 4);
  RngStream rng(5, {0, 0, StreamPurpose::Channel});
  double power = 0.0, re2 = 0.0;
  std::size_t n = 0;
  cplx cross = 0.0;
  std::size_t pairs = 0;
  // 489 draws x 2048 entries ~ 1e6 samples.
  for (int t = 0; t < 489; ++t) {
    const ChannelRealization real = generate_rayleigh(cfg, rng, static_cast<std::uint64_t>(t));
    for (std::size_t r = 0; r < cfg.antennas; ++r)
      for (std::size_t c = 0; c < cfg.users; ++c) {
        power += std::norm(real.h(r, c));
        re2 += real.h(r, c).real() * real.h(r, c).real();
        ++n;
      }
    // Distinct entries (0,0) and (1,1): 489 x 64 sample pairs across rows.
    for (std::size_t r = 0; r + 1 < cfg.antennas; r += 2) {
      cross += real.h(r, 0) * std::conj(real.h(r + 1, 1));
      ++pairs;
    }
  }
  CHECK(std::abs(power / static_cast<double>(n) - 1.0) < 0.01);
  CHECK(std::abs(re2 / static_cast<double>(n) - 0.5) < 0.01);
  CHECK(std::abs(cross / static_cast<double>(pairs)) < 0.02);
}

TEST_CASE("same stream id gives a bit-identical channel") {
  const SystemConfig cfg = small_cfg(16, 4, 2);
  RngStream a(9, {3, 4, StreamPurpose::Channel});
  RngStream b(9, {3, 4, StreamPurpose::Channel});
  CHECK(generate_rayleigh(cfg, a).h == generate_rayleigh(cfg, b).h);
}

TEST_CASE("partition and stack") {
  const SystemConfig cfg = small_cfg(4, 2, 2);
  ComplexMatrix h(4, 2);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 2; ++c) h(r, c) = cplx(static_cast<double>(r), static_cast<double>(c));
  const auto parts = partition(h, cfg);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0](0, 0) == cplx(0, 0));
  CHECK(parts[0](1, 1) == cplx(1, 1));
  CHECK(parts[1](0, 0) == cplx(2, 0));
  CHECK(parts[1](1, 0) == cplx(3, 0));
  CHECK(stack(parts) == h);

  const auto single = partition(h, small_cfg(4, 2, 1));
  REQUIRE(single.size() == 1);
  CHECK(single[0] == h);

  std::mt19937_64 gen(1);
  const SystemConfig big = small_cfg(128, 16, 4);
  const ComplexMatrix hb = oracle::random_matrix(128, 16, gen);
  const auto blocks = partition(hb, big);
  REQUIRE(blocks.size() == 4);
  for (const auto& b : blocks) CHECK(b.rows() == 32);
  CHECK(stack(blocks) == hb);

  CHECK_THROWS_AS(partition(hb, small_cfg(64, 16, 4)), Error);
}

TEST_CASE("system config validation") {
  CHECK_NOTHROW(SystemConfig{}.validate());
  SystemConfig bad = small_cfg(130, 16, 4);  // non-uniform clusters
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = SystemConfig{};
  bad.symbol_energy = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = SystemConfig{};
  bad.users = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("constellations are normalized and Gray labelled") {
  for (ModulationKind k : kAll) {
    const ModulationScheme m(k);
    const auto& pts = m.constellation();
    REQUIRE(pts.size() == (1u << m.bits_per_symbol()));
    double e = 0.0;
    for (const cplx& p : pts) e += std::norm(p);
    CHECK(std::abs(e / static_cast<double>(pts.size()) - 1.0) < 1e-12);

    // Nearest neighbours along one axis differ in exactly one bit.
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) dmin = std::min(dmin, std::abs(pts[i] - pts[j]));
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        if (std::abs(std::abs(pts[i] - pts[j]) - dmin) < 1e-12)
          CHECK(std::popcount(static_cast<unsigned>(i ^ j)) == 1);
  }
}

TEST_CASE("declared Gray table examples") {
  const ModulationScheme qpsk(ModulationKind::QPSK);
  const std::uint8_t b00[] = {0, 0};
  CHECK(std::abs(modulate(b00, qpsk)[0] - cplx(1, 1) / std::sqrt(2.0)) < 1e-15);
  const std::uint8_t b10[] = {1, 0};
  CHECK(std::abs(modulate(b10, qpsk)[0] - cplx(-1, 1) / std::sqrt(2.0)) < 1e-15);

  const ModulationScheme qam16(ModulationKind::QAM16);
  const std::uint8_t zeros[] = {0, 0, 0, 0};
  CHECK(std::abs(modulate(zeros, qam16)[0] - cplx(-3, -3) / std::sqrt(10.0)) < 1e-15);

  // Origin ties resolve to the smallest label.
  CHECK(qpsk.slice(0.0) == 0u);
  CHECK(qam16.slice(0.0) <= qam16.slice(cplx(1e-9, 1e-9)));

  const std::uint8_t odd[] = {0, 1, 0};
  CHECK_THROWS_AS(modulate(odd, qam16), Error);
}

TEST_CASE("modulate / demodulate round trip and Voronoi margin") {
  RngStream rng(2, {0, 0, StreamPurpose::UplinkBits});
  for (ModulationKind k : kAll) {
    const ModulationScheme m(k);
    Bits bits(static_cast<std::size_t>(m.bits_per_symbol()) * 500);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
    const ComplexVector x = modulate(bits, m);
    CHECK(demodulate_hard(x, m) == bits);

    double dmin = std::numeric_limits<double>::infinity();
    const auto& pts = m.constellation();
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) dmin = std::min(dmin, std::abs(pts[i] - pts[j]));
    ComplexVector perturbed(x.size());
    for (int rep = 0; rep < 20; ++rep) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = 0.499 * dmin * std::sqrt(rng.uniform());
        const double phi = 2.0 * std::acos(-1.0) * rng.uniform();
        perturbed[i] = x[i] + std::polar(r, phi);
      }
      CHECK(demodulate_hard(perturbed, m) == bits);
    }
  }
}

TEST_CASE("modulation names parse") {
  CHECK(ModulationScheme::parse("QPSK").kind() == ModulationKind::QPSK);
  CHECK(ModulationScheme::parse("16QAM").kind() == ModulationKind::QAM16);
  CHECK(ModulationScheme::parse("64QAM").kind() == ModulationKind::QAM64);
  try {
    ModulationScheme::parse("8PSK");
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(e.key() == "modulation");
  }
}

TEST_CASE("uplink transmission") {
  std::mt19937_64 gen(4);
  const ComplexMatrix h = oracle::random_matrix(8, 3, gen);
  const ComplexVector x = oracle::random_vector(3, gen);
  RngStream rng(1, {0, 0, StreamPurpose::UplinkNoise});
  CHECK(transmit_uplink(h, x, 0.0, rng) == multiply(h, x));

  const SystemConfig cfg = small_cfg(8, 3, 2);
  const ComplexVector y = transmit_uplink(h, x, 0.3, rng);
  const auto y_c = partition(y, cfg);
  ComplexVector joined;
  for (const auto& part : y_c) joined.insert(joined.end(), part.begin(), part.end());
  CHECK(joined == y);

  // Noise variance with H = I, x = 0.
  const ComplexMatrix eye = ComplexMatrix::identity(4);
  const ComplexVector zero(4);
  double acc = 0.0;
  const int draws = 25000;
  for (int i = 0; i < draws; ++i)
    for (const cplx& v : transmit_uplink(eye, zero, 0.7, rng)) acc += std::norm(v);
  CHECK(std::abs(acc / (4.0 * draws) / 0.7 - 1.0) < 0.02);
}

TEST_CASE("snr to noise") {
  SystemConfig cfg;
  cfg.users = 16;
  CHECK(std::abs(snr_to_noise(cfg, 12.04) - 1.0) < 1e-3);
  CHECK(snr_to_noise(cfg, std::numeric_limits<double>::infinity()) == 0.0);
  cfg.users = 1;
  CHECK(snr_to_noise(cfg, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
}
