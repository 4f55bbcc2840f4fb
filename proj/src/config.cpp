// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dbp/error.hpp"
#include "dbp/harness.hpp"
#include "dbp/quant.hpp"

namespace dbp {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& msg) {
  throw Error(ErrorCode::ConfigError, "config key '" + key + "': " + msg, key);
}

std::uint64_t as_count(const json& v, const std::string& key, std::uint64_t min = 1) {
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    const auto n = v.get<std::uint64_t>();
    if (n < min) config_error(key, "must be >= " + std::to_string(min));
    return n;
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= static_cast<double>(min) && std::floor(d) == d && d < 1.8e19)
      return static_cast<std::uint64_t>(d);
  }
  config_error(key, "expected a non-negative integer");
}

double as_real(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "Infinity")
      return std::numeric_limits<double>::infinity();
  }
  config_error(key, "expected a number");
}

std::vector<std::string> as_string_list(const json& v, const std::string& key) {
  std::vector<std::string> out;
  if (v.is_string()) {
    out.push_back(v.get<std::string>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_string()) config_error(key, "expected a list of strings");
      out.push_back(e.get<std::string>());
    }
  } else {
    config_error(key, "expected a string or a list of strings");
  }
  if (out.empty()) config_error(key, "must not be empty");
  return out;
}

void apply_key(RunConfig& cfg, const std::string& key, const json& v) {
  auto& sys = cfg.system;
  if (key == "B") {
    sys.antennas = as_count(v, key);
  } else if (key == "U") {
    sys.users = as_count(v, key);
  } else if (key == "C") {
    sys.clusters = as_count(v, key);
  } else if (key == "n_coh") {
    sys.coherence = as_count(v, key);
  } else if (key == "modulation") {
    if (!v.is_string()) config_error(key, "expected a string");
    sys.modulation = ModulationScheme::parse(v.get<std::string>()).kind();
  } else if (key == "e_s") {
    sys.symbol_energy = as_real(v, key);
  } else if (key == "p_tx") {
    sys.transmit_power = as_real(v, key);
  } else if (key == "snr_db") {
    cfg.snr_db.clear();
    if (v.is_array()) {
      for (const auto& e : v) cfg.snr_db.push_back(as_real(e, key));
    } else {
      cfg.snr_db.push_back(as_real(v, key));
    }
  } else if (key == "trials") {
    cfg.trials = as_count(v, key);
  } else if (key == "seed") {
    cfg.seed = as_count(v, key, 0);
  } else if (key == "detectors") {
    cfg.detectors = as_string_list(v, key);
  } else if (key == "precision") {
    cfg.precisions = as_string_list(v, key);
  } else if (key == "n_coh_list") {
    cfg.n_coh_list.clear();
    if (!v.is_array()) config_error(key, "expected a list of integers");
    for (const auto& e : v) cfg.n_coh_list.push_back(as_count(e, key));
  } else if (key == "threads") {
    cfg.threads = static_cast<unsigned>(as_count(v, key, 0));
  } else if (key == "early_stop_errors") {
    cfg.early_stop_errors = as_count(v, key, 0);
  } else if (key == "mmse_unbiased") {
    if (!v.is_boolean()) config_error(key, "expected true or false");
    cfg.mmse_unbiased = v.get<bool>();
  } else {
    config_error(key, "unknown configuration key");
  }
}

RunConfig from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "configuration must be a JSON object", "");
  RunConfig cfg;
  for (const auto& [key, value] : j.items()) apply_key(cfg, key, value);
  cfg.validate();
  return cfg;
}

json to_json_object(const RunConfig& cfg) {
  json snr = json::array();
  for (double s : cfg.snr_db) {
    if (std::isinf(s) && s > 0) snr.push_back("inf");
    else snr.push_back(s);
  }
  json j;
  j["B"] = cfg.system.antennas;
  j["U"] = cfg.system.users;
  j["C"] = cfg.system.clusters;
  j["n_coh"] = cfg.system.coherence;
  j["modulation"] = std::string(ModulationScheme(cfg.system.modulation).name());
  j["e_s"] = cfg.system.symbol_energy;
  j["p_tx"] = cfg.system.transmit_power;
  j["snr_db"] = snr;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["detectors"] = cfg.detectors;
  j["precision"] = cfg.precisions;
  if (!cfg.n_coh_list.empty()) j["n_coh_list"] = cfg.n_coh_list;
  j["threads"] = cfg.threads;
  j["early_stop_errors"] = cfg.early_stop_errors;
  j["mmse_unbiased"] = cfg.mmse_unbiased;
  return j;
}

}  // namespace

void RunConfig::validate() const {
  system.validate();
  if (snr_db.empty()) config_error("snr_db", "must not be empty");
  for (double s : snr_db)
    if (std::isnan(s) || (std::isinf(s) && s < 0)) config_error("snr_db", "values must be finite or +inf");
  if (trials < 1) config_error("trials", "must be >= 1");
  if (detectors.empty()) config_error("detectors", "must not be empty");
  for (const auto& d : detectors) {
    try {
      Scheme::parse(d);
    } catch (const Error& e) {
      config_error("detectors", e.what());
    }
  }
  if (precisions.empty()) config_error("precision", "must not be empty");
  for (const auto& p : precisions) MinifloatFormat::parse(p);
}

RunConfig parse_run_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed configuration JSON: ") + e.what(), "");
  }
  return from_json(j);
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ConfigError, "cannot open configuration file " + path.string(), "");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

void apply_override(RunConfig& cfg, std::string_view key, std::string_view value) {
  json v;
  try {
    v = json::parse(value);
  } catch (const json::parse_error&) {
    v = std::string(value);
  }
  json j = to_json_object(cfg);
  j[std::string(key)] = v;
  cfg = from_json(j);
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw Error(ErrorCode::ConfigError,
                "override '" + std::string(assignment) + "' is not of the form key=value",
                std::string(assignment));
  apply_override(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::string to_json(const RunConfig& cfg) { return to_json_object(cfg).dump(2); }

}  // namespace dbp
