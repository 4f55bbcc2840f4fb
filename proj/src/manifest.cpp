// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <json.hpp>
#include <memory>

#include "dbp/error.hpp"
#include "dbp/report.hpp"

namespace dbp {

std::string library_version() { return "0.1.0"; }

std::string compiler_id() {
#if defined(__clang__)
  return "clang " __clang_version__;
#elif defined(__GNUC__)
  return "gcc " __VERSION__;
#else
  return "unknown";
#endif
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot read '" + path.string() + "'");

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::IoError, "sha256 initialization failed");
  std::array<char, 1 << 16> buf;
  while (f) {
    f.read(buf.data(), buf.size());
    if (f.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(f.gcount()));
  }
  if (f.bad()) fail(ErrorCode::IoError, "failed reading '" + path.string() + "'");
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);

  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 15];
  }
  return hex;
}

void write_manifest(const std::filesystem::path& dir, const ManifestInfo& info,
                    const std::vector<std::string>& outputs) {
  using nlohmann::ordered_json;
  ordered_json m;
  m["tool"] = "dbp";
  m["version"] = library_version();
  m["compiler"] = compiler_id();
  m["command"] = info.command;
  m["seed"] = info.seed;
  m["config"] = info.config_json.empty() ? ordered_json::object()
                                         : ordered_json::parse(info.config_json);
  ordered_json overrides = ordered_json::array();
  for (const auto& [k, v] : info.overrides) overrides.push_back({{"key", k}, {"value", v}});
  m["overrides"] = overrides;
  ordered_json files = ordered_json::array();
  for (const auto& name : outputs) {
    const auto path = dir / name;
    std::error_code ec;
    const auto bytes = std::filesystem::file_size(path, ec);
    if (ec) fail(ErrorCode::IoError, "cannot stat '" + path.string() + "'");
    files.push_back({{"file", name}, {"bytes", bytes}, {"sha256", sha256_file(path)}});
  }
  m["outputs"] = files;
  m["failures"] = info.failures;
  write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace dbp
