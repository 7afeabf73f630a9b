// SPDX-License-Identifier: Apache-2.0
#include "wpt/experiments/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <ctime>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#ifndef WPT_VERSION
#define WPT_VERSION "0.0.0"
#endif

namespace wpt::experiments {

const char* tool_version() { return WPT_VERSION; }

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_json(const ExperimentSpec& spec, const Table& table,
                          const ManifestInfo& info) {
  using nlohmann::ordered_json;
  const std::string canon = canonical_text(spec);
  ordered_json j;
  j["tool"] = "wptsim";
  j["version"] = tool_version();
  j["command"] = info.command;
  j["timestamp"] = info.timestamp;
  j["preset"] = to_string(spec.preset);
  j["config_sha256"] = sha256_hex(canon);
  j["seed"] = spec.seed;
  j["n_trials"] = spec.n_trials;

  ordered_json params = ordered_json::object();
  std::istringstream lines(canon);
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find('=');
    params[line.substr(0, eq)] = line.substr(eq + 1);
  }
  j["parameters"] = params;

  ordered_json ov = ordered_json::array();
  for (const auto& [k, v] : spec.overrides) ov.push_back({{"key", k}, {"value", v}});
  j["overrides"] = ov;

  ordered_json cols = ordered_json::array();
  for (const Column& c : table.columns) {
    cols.push_back({{"name", c.name}, {"provenance", to_string(c.provenance)}});
  }
  j["columns"] = cols;

  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    rows.push_back(to_string(table.row_provenance(r)));
  }
  j["row_provenance"] = rows;
  j["rows"] = table.rows.size();
  return j.dump(2) + "\n";
}

void write_outputs(const std::filesystem::path& csv_path, const Table& table,
                   const std::string& manifest) {
  namespace fs = std::filesystem;
  const fs::path tmp = csv_path.string() + ".partial";
  const fs::path man = csv_path.string() + ".manifest.json";
  bool manifest_opened = false;
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
      table.write_csv(out);
      out.flush();
      if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    {
      std::ofstream out(man, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open " + man.string() + " for writing");
      manifest_opened = true;
      out << manifest;
      if (!out) throw std::runtime_error("write to " + man.string() + " failed");
    }
    fs::rename(tmp, csv_path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    if (manifest_opened) fs::remove(man, ec);
    throw;
  }
}

}  // namespace wpt::experiments
