// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dbp/config.hpp"
#include "dbp/error.hpp"
#include "dbp/harness.hpp"
#include "dbp/manifest.hpp"
#include "dbp/report.hpp"

using namespace dbp;

namespace {

SweepSpec small_spec(std::vector<std::string> schemes) {
  RunConfig cfg;
  cfg.system.antennas = 32;
  cfg.system.users = 4;
  cfg.system.clusters = 2;
  cfg.system.coherence = 3;
  cfg.snr_db = {0.0, 6.0};
  cfg.trials = 200;
  cfg.detectors = std::move(schemes);
  cfg.threads = 1;
  return SweepSpec::from(cfg);
}

bool same(const std::vector<BerRecord>& a, const std::vector<BerRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].bit_errors != b[i].bit_errors || a[i].trials != b[i].trials) return false;
    if (a[i].scheme.label() != b[i].scheme.label() || a[i].precision != b[i].precision) return false;
  }
  return true;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("scheme names") {
  const Scheme a = Scheme::parse("ul-pd-mmse");
  CHECK(a.link == Link::Uplink);
  CHECK(a.architecture == Architecture::PD);
  CHECK(a.detector == Detector::MMSE);
  CHECK(a.label() == "ul-pd-mmse-implicit");
  CHECK(a.algorithm_name() == "MMSE");

  const Scheme b = Scheme::parse("DL_FD_ZF_explicit");
  CHECK(b.link == Link::Downlink);
  CHECK(b.architecture == Architecture::FD);
  CHECK(b.precoder == Precoder::ZF);
  CHECK(b.inversion == Inversion::Explicit);

  const Scheme c = Scheme::parse("pd-wf");
  CHECK(c.link == Link::Downlink);
  CHECK(Scheme::parse("centralized-mrc").architecture == Architecture::Centralized);

  for (const char* bad : {"", "ul", "ul-pd", "ul-pd-wf", "dl-pd-mmse", "ul-xd-zf", "ul-pd-zf-sideways"})
    CHECK_THROWS_AS(Scheme::parse(bad), Error);
}

TEST_CASE("noise-free ZF sweeps are error free") {
  SweepSpec s = small_spec({"ul-c-zf", "ul-pd-zf", "ul-fd-zf", "dl-pd-zf", "dl-c-zf"});
  s.snr_db = {std::numeric_limits<double>::infinity()};
  for (const BerRecord& r : run_ber_sweep(s)) {
    CHECK_FALSE(r.failure.has_value());
    CHECK(r.bit_errors == 0);
    CHECK(r.ber == 0.0);
  }
}

TEST_CASE("sweeps are deterministic and thread invariant") {
  SweepSpec s = small_spec({"ul-pd-mmse", "ul-fd-mmse", "dl-fd-wf"});
  s.precisions.push_back(Precision::parse("fp8"));
  s.blocks_per_chunk = 5;
  const auto a = run_ber_sweep(s);
  const auto b = run_ber_sweep(s);
  CHECK(same(a, b));
  s.threads = 3;
  CHECK(same(a, run_ber_sweep(s)));
  CHECK(ber_csv(a) == ber_csv(run_ber_sweep(s)));
  s.seed = 2;
  CHECK_FALSE(same(a, run_ber_sweep(s)));
}

TEST_CASE("bit counting") {
  const SweepSpec s = small_spec({"ul-pd-mmse", "ul-c-mrc"});
  const auto r = run_ber_sweep(s);
  REQUIRE(r.size() == 4);
  for (const auto& rec : r) {
    CHECK(rec.trials == 200);
    CHECK(rec.bit_errors <= 200 * 4 * 4);
    CHECK(rec.ber == static_cast<double>(rec.bit_errors) / (200.0 * 4 * 4));
    CHECK(rec.ber >= 0.0);
    CHECK(rec.ber <= 1.0);
  }
  // At 0 dB an uncoded 16-QAM link is far from error free.
  CHECK(r[0].bit_errors > 0);
}

TEST_CASE("numeric failures become labeled records") {
  SweepSpec s = small_spec({"ul-pd-zf", "ul-fd-zf"});
  s.config.antennas = 24;
  s.config.clusters = 8;  // B_c = 3 < U = 4
  const auto r = run_ber_sweep(s);
  REQUIRE(r.size() == 4);
  CHECK_FALSE(r[0].failure.has_value());
  REQUIRE(r[1].failure.has_value());
  CHECK(r[1].failure->find("NotPositiveDefinite") != std::string::npos);
  CHECK(std::isnan(r[1].ber));
  CHECK(r[1].trials == 0);
  const std::string csv = ber_csv(r);
  CHECK(csv.find("nan") != std::string::npos);
}

TEST_CASE("early stop") {
  SweepSpec s = small_spec({"ul-fd-mmse"});
  s.trials = 3000;
  s.snr_db = {-5.0};
  s.blocks_per_chunk = 10;
  s.early_stop_errors = 50;
  const auto a = run_ber_sweep(s);
  REQUIRE(a.size() == 1);
  CHECK(a[0].bit_errors >= 50);
  CHECK(a[0].trials < 3000);
  CHECK(a[0].trials % 30 == 0);
  s.threads = 2;
  CHECK(same(a, run_ber_sweep(s)));
}

TEST_CASE("downlink noise convention") {
  SystemConfig cfg;
  cfg.transmit_power = 2.0;
  CHECK(downlink_noise(cfg, 0.0) == 2.0);
  CHECK(downlink_noise(cfg, 10.0) == doctest::Approx(0.2));
  CHECK(downlink_noise(cfg, std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("tradeoff table") {
  SystemConfig cfg;
  std::vector<std::size_t> list;
  for (std::size_t n = 1; n <= 32; ++n) list.push_back(n);
  const auto rows = run_tradeoff_report(cfg, list);
  REQUIRE(rows.size() == 32);
  CHECK(rows[0].n_ex == doctest::Approx(33088.0));
  CHECK(rows[0].n_im == doctest::Approx(22176.0));
  CHECK(rows[15].m_pd_ul == 192.0);
  CHECK(rows[15].m_fd_ul == 192.0);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].m_pd_ul < rows[i - 1].m_pd_ul);

  const std::string csv = tradeoff_csv(rows);
  CHECK(csv.rfind(tradeoff_header() + "\n", 0) == 0);
  CHECK(tradeoff_header() ==
        "n_coh,m_pd_ul,m_fd_ul,m_pd_dl,m_fd_dl,n_ex,n_im,separate_explicit,mmse_wf_reuse_gram,"
        "zf_zf_reuse_inverse,zf_zf_implicit_reuse_L");
  CHECK(csv.find("\n1,1152,192,1152,132,33088,22176,66304,49920,36288,25376\n") != std::string::npos);
}

TEST_CASE("report formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");

  const SweepSpec s = small_spec({"ul-pd-mmse"});
  const std::string csv = ber_csv(run_ber_sweep(s));
  CHECK(csv.rfind(std::string(kBerHeader) + "\n", 0) == 0);
  CHECK(csv.find("\n0,ul-pd-mmse-implicit,PD,MMSE,implicit,fp32,200,") != std::string::npos);

  CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x/y.csv", "a"), Error);
}

TEST_CASE("manifest") {
  const auto dir = std::filesystem::temp_directory_path() / "dbp_manifest_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_text_file(dir / "out.csv", "abc");
  // SHA-256 of "abc".
  CHECK(sha256_file(dir / "out.csv") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  ManifestInfo info;
  info.command = "ber --config x.json";
  info.config_json = to_json(RunConfig{});
  info.seed = 42;
  info.overrides = {{"U", "8"}, {"seed", "42"}};
  write_manifest(dir, info, {"out.csv"});
  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(j["seed"] == 42);
  CHECK(j["overrides"].size() == 2);
  CHECK(j["overrides"][0]["key"] == "U");
  CHECK(j["outputs"][0]["bytes"] == 3);
  CHECK(j["outputs"][0]["sha256"] == sha256_file(dir / "out.csv"));
  CHECK(j["config"]["U"] == 16);

  // Identical inputs give an identical manifest.
  const std::string first = slurp(dir / "manifest.json");
  write_manifest(dir, info, {"out.csv"});
  CHECK(slurp(dir / "manifest.json") == first);

  CHECK_THROWS_AS(write_manifest(dir, info, {"missing.csv"}), Error);
  std::filesystem::remove_all(dir);
}
