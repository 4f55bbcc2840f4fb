// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dbp/error.hpp"

namespace dbp {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

// RFC 4180 quoting for free-text fields.
std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string tradeoff_header() {
  std::string h = "n_coh,m_pd_ul,m_fd_ul,m_pd_dl,m_fd_dl,n_ex,n_im";
  for (Pipeline p : all_pipelines()) h += "," + std::string(to_string(p));
  return h;
}

std::string ber_csv(std::span<const BerRecord> records) {
  std::string out(kBerHeader);
  out += '\n';
  for (const auto& r : records) {
    out += format_number(r.snr_db) + ',' + r.scheme.label() + ',' +
           std::string(to_string(r.scheme.architecture)) + ',' +
           std::string(r.scheme.algorithm_name()) + ',' +
           std::string(to_string(r.scheme.inversion)) + ',' + csv_field(r.precision) + ',' +
           std::to_string(r.trials) + ',' + std::to_string(r.bit_errors) + ',' +
           format_number(r.ber) + '\n';
  }
  return out;
}

std::string tradeoff_csv(std::span<const CostReport> rows) {
  std::string out = tradeoff_header() + '\n';
  for (const auto& r : rows) {
    out += format_number(r.coherence);
    for (double v : {r.m_pd_ul, r.m_fd_ul, r.m_pd_dl, r.m_fd_dl, r.n_ex, r.n_im})
      out += ',' + format_number(v);
    for (const auto& [name, value] : r.pipeline_costs) out += ',' + format_number(value);
    out += '\n';
  }
  return out;
}

std::string verify_csv(const VerifyReport& report) {
  std::string out(kVerifyHeader);
  out += '\n';
  for (const auto& c : report.checks) {
    out += csv_field(c.name) + ',' + std::to_string(c.instances) + ',' +
           format_number(c.max_deviation) + ',' + format_number(c.tolerance) + ',' +
           std::string(to_string(c.status)) + ',' + csv_field(c.note) + '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.close();
  if (!f) fail(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

}  // namespace dbp
