#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pwave/fock_model.hpp"
#include "pwave/scattering.hpp"
#include "pwave/torus.hpp"

namespace pwave {

/// Flat key = value configuration with dotted section prefixes
/// (potential.kind, torus.L, fock.modes_cutoff, ...). Lines starting with '#'
/// are comments. Every failure is a ConfigError naming the key.
class RunConfig {
 public:
  RunConfig() = default;
  static RunConfig parse(const std::string& text, const std::string& origin = "<string>");
  static RunConfig load(const std::string& path);

  /// key=value override; the key must be known.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  double require_double(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  int require_int(const std::string& key) const;
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<double> require_list(const std::string& key) const;

  /// Cross-key checks: tolerance ranges and dimension consistency.
  void validate() const;

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> values_;
};

/// potential.* block.
RadialPotential potential_from(const RunConfig& cfg);

struct FockSetup {
  FockModelConfig model;
  double v0 = 20.0;
  double r0 = 0.5;
  std::optional<std::size_t> sector_n;
  std::optional<LatticeVector> total_momentum;
  double audit_tol = 1e-12;
};

/// fock.* block with the defaults of the shipped configuration.
FockSetup fock_setup_from(const RunConfig& cfg);

}  // namespace pwave
