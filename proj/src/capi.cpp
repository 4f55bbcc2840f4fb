// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/dbp.h"

#include <cmath>
#include <cstring>
#include <new>
#include <numeric>
#include <string>
#include <vector>

#include "dbp/config.hpp"
#include "dbp/cost.hpp"
#include "dbp/error.hpp"
#include "dbp/harness.hpp"
#include "dbp/manifest.hpp"
#include "dbp/quant.hpp"
#include "dbp/report.hpp"
#include "dbp/verify.hpp"

struct dbp_config {
  dbp::RunConfig cfg;
  std::vector<std::pair<std::string, std::string>> overrides;
};

struct dbp_ber_table {
  std::vector<dbp::BerRecord> records;
  // Per-row strings referenced by dbp_ber_row.
  std::vector<std::string> labels;
  std::vector<std::string> algorithms;
};

struct dbp_verify_report {
  dbp::VerifyReport report;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_key;

dbp_status record(dbp_status status, std::string message, std::string key = {}) {
  g_last_error = std::move(message);
  g_last_key = std::move(key);
  return status;
}

dbp_status status_for(dbp::ErrorCode code) {
  using dbp::ErrorCode;
  switch (code) {
    case ErrorCode::ConfigError: return DBP_ERR_CONFIG;
    case ErrorCode::IoError: return DBP_ERR_IO;
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::InvalidVariance:
    case ErrorCode::DegenerateColumn:
    case ErrorCode::StaleCache: return DBP_ERR_NUMERIC;
    default: return DBP_ERR_INVALID_ARGUMENT;
  }
}

template <class F>
dbp_status guard(F&& body) {
  try {
    body();
    return DBP_OK;
  } catch (const dbp::Error& e) {
    return record(status_for(e.code()), e.what(), e.key());
  } catch (const std::bad_alloc&) {
    return record(DBP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(DBP_ERR_INTERNAL, e.what());
  }
}

dbp_status null_argument(const char* what) {
  return record(DBP_ERR_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

dbp::Architecture parse_architecture(std::string_view s) {
  std::string u;
  for (char c : s) u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "PD") return dbp::Architecture::PD;
  if (u == "FD") return dbp::Architecture::FD;
  if (u == "C" || u == "CENTRALIZED") return dbp::Architecture::Centralized;
  throw dbp::Error(dbp::ErrorCode::InvalidParameter, "unknown architecture '" + std::string(s) + "'");
}

dbp::Inversion parse_inversion(std::string_view s) {
  if (s == "explicit") return dbp::Inversion::Explicit;
  if (s == "implicit") return dbp::Inversion::Implicit;
  throw dbp::Error(dbp::ErrorCode::InvalidParameter, "unknown inversion '" + std::string(s) + "'");
}

dbp::MinifloatFormat make_format(int exponent_bits, int mantissa_bits) {
  if (exponent_bits < 0 || mantissa_bits < 0)
    throw dbp::Error(dbp::ErrorCode::InvalidParameter, "minifloat field widths must be positive");
  const dbp::MinifloatFormat fmt{static_cast<unsigned>(exponent_bits),
                                 static_cast<unsigned>(mantissa_bits)};
  fmt.validate();
  return fmt;
}

void copy_truncated(char* dst, std::size_t cap, std::string_view src) {
  const std::size_t n = std::min(cap - 1, src.size());
  std::memcpy(dst, src.data(), n);
  dst[n] = '\0';
}

}  // namespace

extern "C" {

const char* dbp_version(void) {
  static const std::string v = dbp::library_version();
  return v.c_str();
}

const char* dbp_last_error(void) { return g_last_error.c_str(); }
const char* dbp_last_error_key(void) { return g_last_key.c_str(); }

dbp_status dbp_config_default(dbp_config** out) {
  if (!out) return null_argument("out");
  return guard([&] { *out = new dbp_config{}; });
}

dbp_status dbp_config_load(const char* path, dbp_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guard([&] { *out = new dbp_config{dbp::load_run_config(path), {}}; });
}

dbp_status dbp_config_parse(const char* json_text, dbp_config** out) {
  if (!json_text) return null_argument("json_text");
  if (!out) return null_argument("out");
  return guard([&] { *out = new dbp_config{dbp::parse_run_config(json_text), {}}; });
}

dbp_status dbp_config_set(dbp_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_argument("cfg");
  if (!key || !value) return null_argument("key and value");
  return guard([&] {
    dbp::apply_override(cfg->cfg, key, value);
    cfg->overrides.emplace_back(key, value);
  });
}

dbp_status dbp_config_set_seed(dbp_config* cfg, uint64_t seed) {
  if (!cfg) return null_argument("cfg");
  cfg->cfg.seed = seed;
  cfg->overrides.emplace_back("seed", std::to_string(seed));
  return DBP_OK;
}

dbp_status dbp_config_set_threads(dbp_config* cfg, unsigned threads) {
  if (!cfg) return null_argument("cfg");
  cfg->cfg.threads = threads;
  return DBP_OK;
}

dbp_status dbp_config_to_json(const dbp_config* cfg, char* buffer, size_t capacity,
                              size_t* needed) {
  if (!cfg) return null_argument("cfg");
  return guard([&] {
    const std::string s = dbp::to_json(cfg->cfg);
    if (needed) *needed = s.size();
    if (buffer && capacity > 0) copy_truncated(buffer, capacity, s);
  });
}

void dbp_config_free(dbp_config* cfg) { delete cfg; }

dbp_status dbp_ber_run(const dbp_config* cfg, dbp_ber_table** out) {
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  return guard([&] {
    cfg->cfg.validate();
    auto table = std::make_unique<dbp_ber_table>();
    table->records = dbp::run_ber_sweep(dbp::SweepSpec::from(cfg->cfg));
    for (const auto& r : table->records) {
      table->labels.push_back(r.scheme.label());
      table->algorithms.emplace_back(r.scheme.algorithm_name());
    }
    *out = table.release();
  });
}

size_t dbp_ber_size(const dbp_ber_table* table) { return table ? table->records.size() : 0; }

dbp_status dbp_ber_get(const dbp_ber_table* table, size_t index, dbp_ber_row* row) {
  if (!table) return null_argument("table");
  if (!row) return null_argument("row");
  if (index >= table->records.size())
    return record(DBP_ERR_INVALID_ARGUMENT, "row index out of range");
  const auto& r = table->records[index];
  row->snr_db = r.snr_db;
  row->scheme = table->labels[index].c_str();
  row->architecture = dbp::to_string(r.scheme.architecture).data();
  row->algorithm = table->algorithms[index].c_str();
  row->inversion = dbp::to_string(r.scheme.inversion).data();
  row->precision = r.precision.c_str();
  row->trials = r.trials;
  row->bit_errors = r.bit_errors;
  row->ber = r.ber;
  row->failure = r.failure ? r.failure->c_str() : nullptr;
  return DBP_OK;
}

size_t dbp_ber_failure_count(const dbp_ber_table* table) {
  if (!table) return 0;
  size_t n = 0;
  for (const auto& r : table->records) n += r.failure.has_value();
  return n;
}

dbp_status dbp_ber_write_csv(const dbp_ber_table* table, const char* path) {
  if (!table) return null_argument("table");
  if (!path) return null_argument("path");
  return guard([&] { dbp::write_text_file(path, dbp::ber_csv(table->records)); });
}

void dbp_ber_free(dbp_ber_table* table) { delete table; }

dbp_status dbp_tradeoff_write_csv(const dbp_config* cfg, const size_t* n_coh_list, size_t count,
                                  const char* path) {
  if (!cfg) return null_argument("cfg");
  if (!path) return null_argument("path");
  return guard([&] {
    std::vector<std::size_t> list;
    if (n_coh_list) list.assign(n_coh_list, n_coh_list + count);
    else list = cfg->cfg.n_coh_list;
    if (list.empty()) {
      list.resize(64);
      std::iota(list.begin(), list.end(), std::size_t{1});
    }
    for (std::size_t n : list)
      if (n < 1) throw dbp::Error(dbp::ErrorCode::ConfigError, "n_coh_list entries must be >= 1",
                                  "n_coh_list");
    dbp::write_text_file(path, dbp::tradeoff_csv(dbp::run_tradeoff_report(cfg->cfg.system, list)));
  });
}

dbp_status dbp_transfer_cost(const char* link, const char* architecture, double clusters,
                             double users, double n_coh, double* out) {
  if (!link || !architecture || !out) return null_argument("arguments");
  return guard([&] {
    *out = dbp::transfer_cost(dbp::parse_link(link), parse_architecture(architecture), clusters,
                              users, n_coh);
  });
}

dbp_status dbp_timing_cost(const char* inversion, double cluster_size, double users, double n_coh,
                           double* out) {
  if (!inversion || !out) return null_argument("arguments");
  return guard([&] {
    *out = dbp::timing_cost(parse_inversion(inversion), cluster_size, users, n_coh);
  });
}

dbp_status dbp_pipeline_cost(const char* pipeline, double cluster_size, double users,
                             double n_coh, double* out) {
  if (!pipeline || !out) return null_argument("arguments");
  return guard([&] { *out = dbp::pipeline_cost(std::string_view(pipeline), cluster_size, users, n_coh); });
}

dbp_status dbp_decide(const char* link, double n_coh, double users, const char* prefer,
                      dbp_decision* out) {
  if (!link || !prefer || !out) return null_argument("arguments");
  return guard([&] {
    const dbp::DesignChoice d = dbp::select_architecture(
        dbp::parse_link(link), n_coh, users, dbp::parse_preference(prefer));
    copy_truncated(out->architecture, sizeof out->architecture, dbp::to_string(d.architecture));
    copy_truncated(out->rationale, sizeof out->rationale, d.rationale);
  });
}

dbp_status dbp_verify_run(const dbp_config* cfg, size_t instances, dbp_verify_report** out) {
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  return guard([&] {
    dbp::VerifyOptions opt;
    opt.instances = instances;
    opt.seed = cfg->cfg.seed;
    *out = new dbp_verify_report{dbp::verify_equivalences(cfg->cfg.system, opt)};
  });
}

size_t dbp_verify_size(const dbp_verify_report* report) {
  return report ? report->report.checks.size() : 0;
}

dbp_status dbp_verify_get(const dbp_verify_report* report, size_t index, dbp_verify_row* row) {
  if (!report) return null_argument("report");
  if (!row) return null_argument("row");
  if (index >= report->report.checks.size())
    return record(DBP_ERR_INVALID_ARGUMENT, "check index out of range");
  const auto& c = report->report.checks[index];
  row->name = c.name.c_str();
  row->instances = c.instances;
  row->max_deviation = c.max_deviation;
  row->tolerance = c.tolerance;
  row->status = dbp::to_string(c.status).data();
  row->ok = c.ok() ? 1 : 0;
  row->note = c.note.c_str();
  return DBP_OK;
}

int dbp_verify_all_ok(const dbp_verify_report* report) {
  return report && report->report.all_ok() ? 1 : 0;
}

dbp_status dbp_verify_write_csv(const dbp_verify_report* report, const char* path) {
  if (!report) return null_argument("report");
  if (!path) return null_argument("path");
  return guard([&] { dbp::write_text_file(path, dbp::verify_csv(report->report)); });
}

void dbp_verify_free(dbp_verify_report* report) { delete report; }

dbp_status dbp_minifloat_encode(double x, int exponent_bits, int mantissa_bits, uint32_t* code) {
  if (!code) return null_argument("code");
  return guard([&] {
    const dbp::MinifloatFormat fmt = make_format(exponent_bits, mantissa_bits);
    *code = dbp::encode(x, fmt);
  });
}

dbp_status dbp_minifloat_decode(uint32_t code, int exponent_bits, int mantissa_bits,
                                double* value) {
  if (!value) return null_argument("value");
  return guard([&] {
    const dbp::MinifloatFormat fmt = make_format(exponent_bits, mantissa_bits);
    *value = dbp::decode(code, fmt);
  });
}

uint8_t dbp_fp8_encode(double x) {
  return static_cast<uint8_t>(dbp::encode(x, dbp::MinifloatFormat::fp8()));
}

double dbp_fp8_decode(uint8_t code) { return dbp::decode(code, dbp::MinifloatFormat::fp8()); }

uint32_t dbp_pack4(const uint8_t codes[4]) {
  return dbp::pack4(std::array<std::uint8_t, 4>{codes[0], codes[1], codes[2], codes[3]});
}

void dbp_unpack4(uint32_t word, uint8_t codes[4]) {
  const auto a = dbp::unpack4(word);
  std::copy(a.begin(), a.end(), codes);
}

dbp_status dbp_write_manifest(const char* dir, const dbp_config* cfg, const char* command,
                              const char* const* outputs, size_t output_count,
                              const char* const* failures, size_t failure_count) {
  if (!dir) return null_argument("dir");
  if (!cfg) return null_argument("cfg");
  if (output_count && !outputs) return null_argument("outputs");
  if (failure_count && !failures) return null_argument("failures");
  return guard([&] {
    dbp::ManifestInfo info;
    info.command = command ? command : "";
    info.config_json = dbp::to_json(cfg->cfg);
    info.seed = cfg->cfg.seed;
    info.overrides = cfg->overrides;
    for (size_t i = 0; i < failure_count; ++i) info.failures.emplace_back(failures[i]);
    std::vector<std::string> files(outputs, outputs + output_count);
    dbp::write_manifest(dir, info, files);
  });
}

}  // extern "C"
