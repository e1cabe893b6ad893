#include "pwave/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pwave/errors.hpp"

namespace pwave {
namespace {

constexpr const char* kModule = "cli";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::ConfigError, kModule, "key '" + key + "': " + what);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "2pi") return 2.0 * std::numbers::pi;
  if (t == "pi") return std::numbers::pi;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
    fail(key, "expected a number, got '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) fail(key, "expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) fail(key, "expected a comma-separated list");
  return out;
}

}  // namespace

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys{
      "potential.kind", "potential.dim", "potential.v0", "potential.r0", "potential.width",
      "potential.radii", "potential.values",
      "scattering.tol", "scattering.kf",
      "torus.dim", "torus.L", "torus.kf", "torus.N", "torus.cutoff",
      "pair.r_min", "pair.r_max", "pair.points",
      "interaction.akf", "interaction.kfL",
      "expansion.dim", "expansion.a", "expansion.kf", "expansion.N", "expansion.R_eff",
      "expansion.C_low", "expansion.C_up", "expansion.C_fs",
      "fock.dim", "fock.L", "fock.kf", "fock.modes_cutoff", "fock.sectors", "fock.sector_n",
      "fock.total_momentum", "fock.v0", "fock.r0", "fock.alpha", "fock.audit_tol", "fock.state",
      "sweep.parameter", "sweep.grid",
      "output.directory", "output.format"};
  return keys;
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigError, kModule,
                  origin + ":" + std::to_string(number) + ": expected key = value, got '" + line + "'");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, kModule, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) fail(key, "unknown key");
  values_[key] = value;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string RunConfig::require_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) fail(key, "required but missing");
  return it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

double RunConfig::require_double(const std::string& key) const { return parse_double(key, require_string(key)); }

int RunConfig::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_int(key, it->second);
}

int RunConfig::require_int(const std::string& key) const { return parse_int(key, require_string(key)); }

std::vector<double> RunConfig::get_list(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_list(key, it->second);
}

std::vector<double> RunConfig::require_list(const std::string& key) const { return parse_list(key, require_string(key)); }

void RunConfig::validate() const {
  for (const auto& [key, value] : values_) {
    if (key.size() >= 3 && key.compare(key.size() - 3, 3, "tol") == 0) {
      const double t = parse_double(key, value);
      if (!(t > 0.0 && t < 1e-2)) fail(key, "tolerance must lie in (0, 1e-2)");
    }
    if (key.size() >= 4 && key.compare(key.size() - 4, 4, ".dim") == 0) {
      const int d = parse_int(key, value);
      if (d < 1 || d > 3) fail(key, "dimension must be 1, 2 or 3");
    }
  }
  if (has("potential.dim") && has("torus.dim") && require_int("potential.dim") != require_int("torus.dim"))
    fail("torus.dim", "differs from potential.dim");
  if (has("output.format")) {
    const std::string f = require_string("output.format");
    if (f != "json" && f != "csv") fail("output.format", "must be json or csv");
  }
}

RadialPotential potential_from(const RunConfig& cfg) {
  const std::string kind = cfg.require_string("potential.kind");
  const int dim = cfg.require_int("potential.dim");
  if (kind == "soft-sphere")
    return RadialPotential::soft_sphere(dim, cfg.require_double("potential.v0"), cfg.require_double("potential.r0"));
  if (kind == "truncated-gaussian")
    return RadialPotential::truncated_gaussian(dim, cfg.require_double("potential.v0"),
                                               cfg.require_double("potential.width"),
                                               cfg.require_double("potential.r0"));
  if (kind == "tabulated")
    return RadialPotential::tabulated(dim, cfg.require_list("potential.radii"), cfg.require_list("potential.values"));
  fail("potential.kind", "expected soft-sphere, truncated-gaussian or tabulated, got '" + kind + "'");
}

FockSetup fock_setup_from(const RunConfig& cfg) {
  FockSetup s;
  s.model.spec.dim = cfg.get_int("fock.dim", 1);
  s.model.spec.L = cfg.get_double("fock.L", 2.0 * std::numbers::pi);
  s.model.k_F = cfg.get_double("fock.kf", 1.5);
  s.model.momentum_cutoff = cfg.get_double("fock.modes_cutoff", 6.0);
  s.model.alpha = cfg.get_double("fock.alpha", 0.25);
  const std::string sectors = cfg.get_string("fock.sectors", "all");
  if (sectors != "all") {
    for (double v : cfg.require_list("fock.sectors")) {
      if (v < 0 || v != std::floor(v)) fail("fock.sectors", "particle numbers must be non-negative integers");
      s.model.sectors.push_back(static_cast<std::size_t>(v));
    }
  }
  s.v0 = cfg.get_double("fock.v0", 20.0);
  s.r0 = cfg.get_double("fock.r0", 0.5);
  if (cfg.has("fock.sector_n")) {
    const int n = cfg.require_int("fock.sector_n");
    if (n < 0) fail("fock.sector_n", "must be >= 0");
    s.sector_n = static_cast<std::size_t>(n);
  }
  if (cfg.has("fock.total_momentum")) {
    const auto v = cfg.require_list("fock.total_momentum");
    if (v.size() != static_cast<std::size_t>(s.model.spec.dim))
      fail("fock.total_momentum", "needs one integer per dimension");
    LatticeVector p{0, 0, 0};
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = static_cast<int>(v[i]);
    s.total_momentum = p;
  }
  s.audit_tol = cfg.get_double("fock.audit_tol", 1e-12);
  if (!(s.audit_tol > 0.0 && s.audit_tol < 1e-2)) fail("fock.audit_tol", "tolerance must lie in (0, 1e-2)");
  return s;
}

}  // namespace pwave
