#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pwave/config.hpp"

namespace pwave {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct Report {
  std::string subcommand;
  Json payload = Json::object();
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  /// Set when a module error ended the run.
  std::optional<Json> error;

  bool all_passed() const;
  void check(std::string name, bool passed, double value, double threshold, std::string detail = {});
};

/// Result payload and checks only: identical bytes for identical inputs.
std::string payload_bytes(const Report& r);
/// Full envelope: version, config echo, timestamp, payload, checks.
std::string envelope_bytes(const Report& r, const RunConfig& cfg, const std::string& timestamp);

std::string utc_timestamp();

/// Comma-separated table, header row, doubles with 17 significant digits.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(const std::vector<double>& row);
  void add_row(const std::vector<std::string>& row);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

std::string format_double(double v);

/// An explicit override, then PWAVE_OUTPUT_DIR, then output.directory, then "pwave_out".
std::filesystem::path output_directory(const RunConfig& cfg, const std::optional<std::string>& cli_override = {});

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace pwave
