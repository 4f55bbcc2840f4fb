// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Everything goes through the C interface in dbp.h.
//
// Exit codes: 0 success, 1 configuration/IO/usage error, 2 numeric failure.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dbp/dbp.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;
  std::optional<unsigned> threads;
  std::optional<std::size_t> n_coh;
  std::optional<std::size_t> users;
  std::string link = "uplink";
  std::string prefer = "ber";
  std::size_t instances = 100;
};

int report_failure(dbp_status status) {
  std::cerr << "error: " << dbp_last_error();
  const std::string key = dbp_last_error_key();
  if (!key.empty() && std::string(dbp_last_error()).find(key) == std::string::npos)
    std::cerr << " (key '" << key << "')";
  std::cerr << '\n';
  return status == DBP_ERR_NUMERIC ? kExitNumeric : kExitConfig;
}

using ConfigPtr = std::unique_ptr<dbp_config, decltype(&dbp_config_free)>;

// Loads the file (or defaults), then applies --set entries in order, then the
// dedicated flags, so flags always win over the file.
dbp_status build_config(const Options& opt, bool map_shape_flags, ConfigPtr& out) {
  dbp_config* raw = nullptr;
  dbp_status st = opt.config_path.empty() ? dbp_config_default(&raw)
                                          : dbp_config_load(opt.config_path.c_str(), &raw);
  if (st != DBP_OK) return st;
  out.reset(raw);
  for (const auto& assignment : opt.sets) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", assignment.c_str());
      return DBP_ERR_CONFIG;
    }
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    if ((st = dbp_config_set(raw, key.c_str(), value.c_str())) != DBP_OK) return st;
  }
  if (map_shape_flags) {
    if (opt.n_coh &&
        (st = dbp_config_set(raw, "n_coh", std::to_string(*opt.n_coh).c_str())) != DBP_OK)
      return st;
    if (opt.users && (st = dbp_config_set(raw, "U", std::to_string(*opt.users).c_str())) != DBP_OK)
      return st;
  }
  if (opt.seed && (st = dbp_config_set_seed(raw, *opt.seed)) != DBP_OK) return st;
  if (opt.threads) dbp_config_set_threads(raw, *opt.threads);
  return DBP_OK;
}

int prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory '" << dir << "': " << ec.message() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

int write_manifest(const Options& opt, dbp_config* cfg, const std::string& command,
                   const std::vector<const char*>& outputs,
                   const std::vector<std::string>& failures) {
  std::vector<const char*> f;
  for (const auto& s : failures) f.push_back(s.c_str());
  const dbp_status st = dbp_write_manifest(opt.out_dir.c_str(), cfg, command.c_str(),
                                           outputs.data(), outputs.size(), f.data(), f.size());
  return st == DBP_OK ? kExitOk : report_failure(st);
}

int run_ber(const Options& opt, const std::string& command) {
  ConfigPtr cfg(nullptr, dbp_config_free);
  if (dbp_status st = build_config(opt, true, cfg); st != DBP_OK) return report_failure(st);
  if (int rc = prepare_out_dir(opt.out_dir)) return rc;

  dbp_ber_table* raw = nullptr;
  if (dbp_status st = dbp_ber_run(cfg.get(), &raw); st != DBP_OK) return report_failure(st);
  std::unique_ptr<dbp_ber_table, decltype(&dbp_ber_free)> table(raw, dbp_ber_free);

  const std::string csv = (std::filesystem::path(opt.out_dir) / "ber.csv").string();
  if (dbp_status st = dbp_ber_write_csv(table.get(), csv.c_str()); st != DBP_OK)
    return report_failure(st);

  std::vector<std::string> failures;
  for (std::size_t i = 0; i < dbp_ber_size(table.get()); ++i) {
    dbp_ber_row row;
    dbp_ber_get(table.get(), i, &row);
    if (row.failure)
      failures.push_back(std::string(row.scheme) + " [" + row.precision + "] at " +
                         std::to_string(row.snr_db) + " dB: " + row.failure);
  }
  if (int rc = write_manifest(opt, cfg.get(), command, {"ber.csv"}, failures)) return rc;
  std::cout << "wrote " << csv << " (" << dbp_ber_size(table.get()) << " rows)\n";
  if (!failures.empty()) {
    for (const auto& f : failures) std::cerr << "numeric failure: " << f << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

int run_tradeoff(const Options& opt, const std::string& command) {
  ConfigPtr cfg(nullptr, dbp_config_free);
  if (dbp_status st = build_config(opt, false, cfg); st != DBP_OK) return report_failure(st);
  if (opt.users) {
    if (dbp_status st = dbp_config_set(cfg.get(), "U", std::to_string(*opt.users).c_str());
        st != DBP_OK)
      return report_failure(st);
  }
  if (int rc = prepare_out_dir(opt.out_dir)) return rc;

  // --n-coh N tabulates every coherence length from 1 to N.
  std::vector<std::size_t> list;
  if (opt.n_coh) {
    list.resize(*opt.n_coh);
    std::iota(list.begin(), list.end(), std::size_t{1});
  }
  const std::string csv = (std::filesystem::path(opt.out_dir) / "tradeoff.csv").string();
  if (dbp_status st = dbp_tradeoff_write_csv(cfg.get(), list.empty() ? nullptr : list.data(),
                                             list.size(), csv.c_str());
      st != DBP_OK)
    return report_failure(st);
  if (int rc = write_manifest(opt, cfg.get(), command, {"tradeoff.csv"}, {})) return rc;
  std::cout << "wrote " << csv << '\n';
  return kExitOk;
}

int run_verify(const Options& opt, const std::string& command) {
  ConfigPtr cfg(nullptr, dbp_config_free);
  if (dbp_status st = build_config(opt, true, cfg); st != DBP_OK) return report_failure(st);
  if (int rc = prepare_out_dir(opt.out_dir)) return rc;

  dbp_verify_report* raw = nullptr;
  if (dbp_status st = dbp_verify_run(cfg.get(), opt.instances, &raw); st != DBP_OK)
    return report_failure(st);
  std::unique_ptr<dbp_verify_report, decltype(&dbp_verify_free)> report(raw, dbp_verify_free);

  const std::string csv = (std::filesystem::path(opt.out_dir) / "verify.csv").string();
  if (dbp_status st = dbp_verify_write_csv(report.get(), csv.c_str()); st != DBP_OK)
    return report_failure(st);

  std::vector<std::string> failures;
  for (std::size_t i = 0; i < dbp_verify_size(report.get()); ++i) {
    dbp_verify_row row;
    dbp_verify_get(report.get(), i, &row);
    std::printf("%-40s %-5s max_dev=%.3g tol=%.3g %s\n", row.name, row.status, row.max_deviation,
                row.tolerance, row.note);
    if (!row.ok) failures.push_back(std::string(row.name) + ": " + row.status + " " + row.note);
  }
  if (int rc = write_manifest(opt, cfg.get(), command, {"verify.csv"}, failures)) return rc;
  return failures.empty() ? kExitOk : kExitNumeric;
}

int run_decide(const Options& opt) {
  const double n_coh = opt.n_coh ? static_cast<double>(*opt.n_coh) : 1.0;
  const double users = opt.users ? static_cast<double>(*opt.users) : 16.0;
  dbp_decision d;
  if (dbp_status st = dbp_decide(opt.link.c_str(), n_coh, users, opt.prefer.c_str(), &d);
      st != DBP_OK)
    return report_failure(st);
  std::cout << d.architecture << '\n' << d.rationale << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized baseband processing simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dbp_version()));

  Options opt;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opt.config_path, "JSON run configuration");
    if (needs_config) c->required();
    c->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory (created if missing)");
    sub->add_option("--seed", opt.seed, "RNG seed (overrides the file)");
    sub->add_option("--set", opt.sets, "key=value override, repeatable")->allow_extra_args(false);
    sub->add_option("--threads", opt.threads, "worker threads (0: all cores)");
  };

  auto* ber = app.add_subcommand("ber", "Monte Carlo BER sweep, writes ber.csv");
  add_common(ber, true);
  ber->add_option("--n-coh", opt.n_coh, "coherence length override");
  ber->add_option("--u", opt.users, "UE count override");

  auto* tradeoff = app.add_subcommand("tradeoff", "transfer and complexity table, writes tradeoff.csv");
  add_common(tradeoff, false);
  tradeoff->add_option("--n-coh", opt.n_coh, "tabulate N_coh = 1..N");
  tradeoff->add_option("--u", opt.users, "UE count override");

  auto* verify = app.add_subcommand("verify", "algebraic equivalence checks, writes verify.csv");
  add_common(verify, false);
  verify->add_option("--n-coh", opt.n_coh, "coherence length override");
  verify->add_option("--u", opt.users, "UE count override");
  verify->add_option("--instances", opt.instances, "random instances per check")
      ->check(CLI::PositiveNumber);

  auto* decide = app.add_subcommand("decide", "recommend PD or FD for a link");
  decide->add_option("--link", opt.link, "uplink or downlink")
      ->check(CLI::IsMember({"uplink", "downlink"}));
  decide->add_option("--prefer", opt.prefer, "ber or bandwidth")
      ->check(CLI::IsMember({"ber", "bandwidth"}));
  decide->add_option("--n-coh", opt.n_coh, "coherence length")->check(CLI::PositiveNumber);
  decide->add_option("--u", opt.users, "number of UEs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  std::string command;
  for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);

  if (*ber) return run_ber(opt, command);
  if (*tradeoff) return run_tradeoff(opt, command);
  if (*verify) return run_verify(opt, command);
  return run_decide(opt);
}
