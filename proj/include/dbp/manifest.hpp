// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DBP_MANIFEST_HPP
#define DBP_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace dbp {

struct ManifestInfo {
  std::string command;       // verb plus arguments as invoked
  std::string config_json;   // effective configuration after overrides
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> overrides;  // in application order
  std::vector<std::string> failures;
};

// Lowercase hex SHA-256 of a file's bytes. IoError when unreadable.
std::string sha256_file(const std::filesystem::path& path);

// Writes <dir>/manifest.json describing the run and the listed output files
// (names relative to dir), replacing any earlier manifest. No timestamps are
// recorded, so identical runs yield identical manifests.
void write_manifest(const std::filesystem::path& dir, const ManifestInfo& info,
                    const std::vector<std::string>& outputs);

std::string library_version();
std::string compiler_id();

}  // namespace dbp

#endif  // DBP_MANIFEST_HPP
