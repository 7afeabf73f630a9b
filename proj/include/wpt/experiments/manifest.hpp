// SPDX-License-Identifier: Apache-2.0
//
// Run manifest and crash-safe output files.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "wpt/experiments/runner.hpp"
#include "wpt/experiments/spec.hpp"

namespace wpt::experiments {

const char* tool_version();

std::string sha256_hex(std::string_view data);

/// Current UTC time as 2024-01-31T12:00:00Z.
std::string utc_timestamp();

struct ManifestInfo {
  std::string command;    // "run" or "compare"
  std::string timestamp;  // left out of every hash
};

/// JSON text: config hash over canonical_text(spec), seed, trials, tool
/// version, timestamp, every effective parameter, the override list, a
/// provenance tag per column and one per row.
std::string manifest_json(const ExperimentSpec& spec, const Table& table,
                          const ManifestInfo& info);

/// Writes the CSV through a temporary file and renames it into place, so a
/// failed run never leaves a partial table behind. The manifest goes to
/// `<csv>.manifest.json`.
void write_outputs(const std::filesystem::path& csv_path, const Table& table,
                   const std::string& manifest);

}  // namespace wpt::experiments
