// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>

#include "dbp/channel.hpp"
#include "dbp/downlink.hpp"
#include "dbp/error.hpp"
#include "dbp/rng.hpp"
#include "oracles.hpp"

using namespace dbp;
using oracle::max_diff;

namespace {

struct DlInstance {
  ChannelRealization real;
  ComplexMatrix h_dl;
  std::vector<ComplexMatrix> clusters;
  ComplexVector s;
};

DlInstance make_dl(const SystemConfig& cfg, std::uint64_t id) {
  RngStream rng(99, {id, 0, StreamPurpose::Instance});
  DlInstance d;
  d.real = generate_rayleigh(cfg, rng, id);
  d.h_dl = reciprocal_channel(d.real.h);
  d.clusters = reciprocal_clusters(d.real.clusters);
  const ModulationScheme mod(cfg.modulation);
  Bits bits(cfg.users * static_cast<std::size_t>(mod.bits_per_symbol()));
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
  d.s = modulate(bits, mod);
  return d;
}

ReciprocityEntry entry_for(const ComplexMatrix& g, double rho) {
  const ComplexMatrix l = cholesky(oracle::add_identity(g, rho));
  return {g, StoredInversion{rho, l, inverse_from_cholesky(l)}};
}

double power(const ComplexVector& x) {
  double p = 0.0;
  for (const cplx& v : x) p += std::norm(v);
  return p;
}

}  // namespace

TEST_CASE("reciprocal channel is a plain transpose") {
  ComplexMatrix h(3, 2);
  h(0, 0) = 1.0;
  h(0, 1) = 2.0;
  h(1, 0) = -3.0;
  h(2, 1) = 4.0;
  const ComplexMatrix t = reciprocal_channel(h);
  REQUIRE(t.rows() == 2);
  REQUIRE(t.cols() == 3);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 2; ++c) CHECK(t(c, r) == h(r, c));

  std::mt19937_64 gen(1);
  const ComplexMatrix hc = oracle::random_matrix(5, 3, gen);
  const ComplexMatrix tc = reciprocal_channel(hc);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 3; ++c) CHECK(tc(c, r) == hc(r, c));
}

TEST_CASE("reuse of the uplink Gram, factor and inverse") {
  ComplexMatrix diag(3, 3);
  diag(0, 0) = 1.0;
  diag(1, 1) = 2.0;
  diag(2, 2) = 5.0;
  ReciprocityStore ds;
  ds.block_index = 4;
  ds.global = ReciprocityEntry{diag, std::nullopt};
  CHECK(reuse_gram(ds, 4) == diag);

  // Real factor passes through.
  ReciprocityStore rs;
  rs.block_index = 0;
  rs.global = entry_for(diag, 0.0);
  const ComplexMatrix lr = reuse_cholesky(rs, 0);
  CHECK(lr == rs.global->inversion->factor);

  SystemConfig cfg;
  const DlInstance d = make_dl(cfg, 3);
  const double kappa = 0.7;
  ReciprocityStore store;
  store.block_index = 3;
  store.global = entry_for(gram(d.real.h), kappa);
  for (const auto& hc : d.real.clusters) store.clusters.push_back(entry_for(gram(hc), kappa));

  // Fresh G_dl = H_dl H_dl^H from the downlink side.
  const ComplexMatrix g_dl = oracle::matmul(d.h_dl, oracle::adjoint(d.h_dl));
  const ComplexMatrix g_reuse = reuse_gram(store, 3);
  CHECK(max_diff(g_reuse, g_dl) < 1e-12 * oracle::max_abs(g_dl));

  const ComplexMatrix l = reuse_cholesky(store, 3);
  const ComplexMatrix a = oracle::add_identity(g_dl, kappa);
  CHECK(max_diff(oracle::matmul(l, oracle::adjoint(l)), a) < 1e-10 * oracle::max_abs(a));
  for (std::size_t i = 0; i < l.rows(); ++i) {
    CHECK(l(i, i).imag() == 0.0);
    CHECK(l(i, i).real() > 0.0);
    for (std::size_t j = i + 1; j < l.cols(); ++j) CHECK(l(i, j) == cplx(0.0));
  }

  const ComplexMatrix inv = reuse_inverse(store, 3);
  CHECK(max_diff(oracle::matmul(inv, a), ComplexMatrix::identity(cfg.users)) < 1e-10);

  // Per-cluster entries.
  const ComplexMatrix h1 = d.clusters[1];
  const ComplexMatrix g1 = oracle::matmul(h1, oracle::adjoint(h1));
  CHECK(max_diff(reuse_gram(store, 3, 1), g1) < 1e-12 * oracle::max_abs(g1));

  // Wrong block or missing entry.
  for (auto call : {+[](const ReciprocityStore& s) { return reuse_gram(s, 2); },
                    +[](const ReciprocityStore& s) { return reuse_cholesky(s, 2); },
                    +[](const ReciprocityStore& s) { return reuse_inverse(s, 2); },
                    +[](const ReciprocityStore& s) { return reuse_gram(s, 3, 9); }}) {
    try {
      call(store);
      FAIL("expected StaleCache");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::StaleCache);
    }
  }
  CHECK_THROWS_AS(reuse_cholesky(ds, 4), Error);
}

TEST_CASE("WF precoding on the identity channel") {
  const ComplexVector s{cplx(1, 1), cplx(-3, 1), cplx(0, 2)};
  const std::vector<ComplexMatrix> h{ComplexMatrix::identity(3)};
  const auto cfg = PrecoderConfig::make(Precoder::WF, Architecture::Centralized, Inversion::Implicit, 0.0, 3, 1.0);
  CHECK(cfg.kappa == 0.0);
  const PrecodeResult r = precode_wf(h, s, cfg);
  const double n = std::sqrt(power(s));
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(r.x_dl[i] - s[i] / n) < 1e-15);
  CHECK(std::abs(r.beta - n) < 1e-14);

  const auto wf = PrecoderConfig::make(Precoder::WF, Architecture::PD, Inversion::Implicit, 0.5, 16, 2.0);
  CHECK(wf.kappa == 16 * 0.5 / 2.0);
  CHECK(PrecoderConfig::make(Precoder::ZF, Architecture::PD, Inversion::Implicit, 0.5, 16, 2.0).kappa == 0.0);
}

TEST_CASE("ZF precoding on a scalar channel") {
  const std::vector<ComplexMatrix> h{ComplexMatrix::identity(1)};
  const ComplexVector s{cplx(3, -4)};
  const auto cfg = PrecoderConfig::make(Precoder::ZF, Architecture::Centralized, Inversion::Implicit, 0.0, 1, 4.0);
  const PrecodeResult r = precode_zf(h, s, cfg);
  CHECK(std::abs(r.x_dl[0] - 2.0 * s[0] / 5.0) < 1e-15);
}

TEST_CASE("PD-WF equals centralized WF and power is exact") {
  SystemConfig cfg;
  const double n0 = snr_to_noise(cfg, 5.0);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const DlInstance d = make_dl(cfg, i);
    const std::vector<ComplexMatrix> whole{d.h_dl};
    const auto c = precode_wf(whole, d.s, PrecoderConfig::make(Precoder::WF, Architecture::Centralized, Inversion::Implicit, n0, cfg.users, 1.0));
    const auto pd = precode_wf(d.clusters, d.s, PrecoderConfig::make(Precoder::WF, Architecture::PD, Inversion::Implicit, n0, cfg.users, 1.0));
    const auto fd = precode_wf(d.clusters, d.s, PrecoderConfig::make(Precoder::WF, Architecture::FD, Inversion::Explicit, n0, cfg.users, 1.0));
    CHECK(max_diff(c.x_dl, pd.x_dl) < 1e-10);
    for (const auto* r : {&c, &pd, &fd}) CHECK(std::abs(power(r->x_dl) - 1.0) < 1e-10);
  }
}

TEST_CASE("ZF precoding inverts the channel") {
  SystemConfig cfg;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const DlInstance d = make_dl(cfg, i);
    for (Architecture a : {Architecture::Centralized, Architecture::PD}) {
      const std::vector<ComplexMatrix> whole{d.h_dl};
      const auto& views = a == Architecture::Centralized ? whole : d.clusters;
      const auto pi = precode_zf(views, d.s, PrecoderConfig::make(Precoder::ZF, a, Inversion::Implicit, 0.0, cfg.users, 1.0));
      const auto pe = precode_zf(views, d.s, PrecoderConfig::make(Precoder::ZF, a, Inversion::Explicit, 0.0, cfg.users, 1.0));
      CHECK(max_diff(pi.x_dl, pe.x_dl) < 1e-9);

      // Receive vector is a positive real multiple of s.
      const ComplexVector y = oracle::matvec(d.h_dl, pi.x_dl);
      for (std::size_t u = 0; u < cfg.users; ++u) {
        const cplx ratio = y[u] / d.s[u];
        CHECK(std::abs(ratio - 1.0 / pi.beta) < 1e-9);
      }

      RngStream rng(5, {i, 0, StreamPurpose::DownlinkNoise});
      const ComplexVector s_hat = simulate_downlink(d.h_dl, pi, 0.0, rng);
      CHECK(max_diff(s_hat, d.s) < 1e-9);
    }
  }
}

TEST_CASE("WF approaches ZF as kappa shrinks") {
  SystemConfig cfg;
  const DlInstance d = make_dl(cfg, 7);
  const ModulationScheme mod(cfg.modulation);
  const Bits sent = demodulate_hard(d.s, mod);
  const std::vector<ComplexMatrix> whole{d.h_dl};
  double prev = std::numeric_limits<double>::infinity();
  for (double n0 : {1.0, 1e-2, 1e-4, 1e-6}) {
    const auto r = precode_wf(whole, d.s, PrecoderConfig::make(Precoder::WF, Architecture::Centralized, Inversion::Implicit, n0, cfg.users, 1.0));
    RngStream rng(1, {0, 0, StreamPurpose::DownlinkNoise});
    const ComplexVector s_hat = simulate_downlink(d.h_dl, r, 0.0, rng);
    const double err = max_diff(s_hat, d.s);
    CHECK(err > 0.0);
    CHECK(err < prev);
    prev = err;
    if (n0 <= 1e-4) CHECK(demodulate_hard(s_hat, mod) == sent);
  }
}

TEST_CASE("precoding with stored artifacts is bit-identical to fresh precoding") {
  SystemConfig cfg;
  const double n0 = snr_to_noise(cfg, 0.0);
  for (std::uint64_t i = 0; i < 10; ++i) {
    const DlInstance d = make_dl(cfg, i);
    for (Precoder p : {Precoder::WF, Precoder::ZF})
      for (Inversion inv : {Inversion::Implicit, Inversion::Explicit})
        for (Architecture a : {Architecture::PD, Architecture::FD}) {
          const auto pc = PrecoderConfig::make(p, a, inv, n0, cfg.users, 1.0);
          ReciprocityStore store;
          store.block_index = i;
          if (a == Architecture::PD) {
            std::vector<LocalPreprocessOutput> locals;
            for (const auto& hc : d.real.clusters) locals.push_back({gram(hc), ComplexVector(cfg.users)});
            store.global = entry_for(pd_fuse(locals).gram, pc.kappa);
          } else {
            for (const auto& hc : d.real.clusters) store.clusters.push_back(entry_for(gram(hc), pc.kappa));
          }
          const auto fresh = PrecoderState::prepare(d.clusters, pc, i).apply(d.s);
          const auto reused = PrecoderState::prepare(d.clusters, pc, i, &store).apply(d.s);
          CHECK(fresh.x_dl == reused.x_dl);
          CHECK(fresh.beta == reused.beta);
        }
  }
}

TEST_CASE("FD-ZF needs B_c >= U") {
  SystemConfig cfg;
  cfg.antennas = 32;
  cfg.clusters = 4;
  const DlInstance d = make_dl(cfg, 0);
  try {
    precode_zf(d.clusters, d.s, PrecoderConfig::make(Precoder::ZF, Architecture::FD, Inversion::Implicit, 0.0, cfg.users, 1.0));
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
}
