#include "pwave/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include "pwave/errors.hpp"

namespace pwave {

bool Report::all_passed() const {
  if (error) return false;
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void Report::check(std::string name, bool passed, double value, double threshold, std::string detail) {
  checks.push_back({std::move(name), passed, value, threshold, std::move(detail)});
}

namespace {

Json checks_json(const Report& r) {
  Json arr = Json::array();
  for (const auto& c : r.checks) {
    Json j;
    j["name"] = c.name;
    j["passed"] = c.passed;
    j["value"] = c.value;
    j["threshold"] = c.threshold;
    if (!c.detail.empty()) j["detail"] = c.detail;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json body(const Report& r) {
  Json j;
  j["subcommand"] = r.subcommand;
  j["status"] = r.error ? "error" : (r.all_passed() ? "pass" : "fail");
  j["payload"] = r.payload;
  j["checks"] = checks_json(r);
  j["warnings"] = r.warnings;
  if (r.error) j["error"] = *r.error;
  return j;
}

}  // namespace

std::string payload_bytes(const Report& r) { return body(r).dump(2) + "\n"; }

std::string envelope_bytes(const Report& r, const RunConfig& cfg, const std::string& timestamp) {
  Json j;
  j["tool"] = "pwave";
  j["version"] = kToolVersion;
  j["timestamp"] = timestamp;
  Json echo = Json::object();
  for (const auto& [k, v] : cfg.values()) echo[k] = v;
  j["config"] = echo;
  const Json b = body(r);
  for (const auto& [k, v] : b.items()) j[k] = v;
  return j.dump(2) + "\n";
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add_row(const std::vector<double>& row) {
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double v : row) cells.push_back(format_double(v));
  add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& row) {
  if (row.size() != header_.size()) throw Error(ErrorCode::InvalidArgument, "cli", "CSV row width differs from header");
  std::string line;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) line += ',';
    line += row[i];
  }
  rows_.push_back(std::move(line));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& r : rows_) out += r + '\n';
  return out;
}

std::filesystem::path output_directory(const RunConfig& cfg, const std::optional<std::string>& cli_override) {
  if (cli_override) return *cli_override;
  if (const char* env = std::getenv("PWAVE_OUTPUT_DIR"); env && *env) return env;
  return cfg.get_string("output.directory", "pwave_out");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cli", "cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace pwave
