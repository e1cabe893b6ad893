#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pwave/config.hpp"
#include "pwave/report.hpp"
#include "pwave/scattering.hpp"

namespace pwave {

/// ⟨dΓ(V(1-φ))⟩_F against its leading law c_d N a^d k_F^{d+2}, on the torus and
/// in infinite volume.
struct InteractionRatio {
  double a = 0.0;
  double k_F = 0.0;
  double L = 0.0;
  std::size_t N = 0;
  double lattice = 0.0;
  double reference = 0.0;
  double ratio = 0.0;
  double continuum_ratio = 0.0;
};

InteractionRatio interaction_ratio(const ScatteringSolution& sol, double akf, double kfL, bool lattice = true);

/// Least-squares fit of rho2(r) = c r^2 on [r_min, r_max] / k_F along the first axis.
struct PairDensityFit {
  std::size_t N = 0;
  double k_F = 0.0;
  double coefficient = 0.0;
  double reference = 0.0;  // k_F^8 / (5 (6π^2)^2) in d = 3, general-d analogue otherwise
  double ratio = 0.0;
  double power = 0.0;
  double spherical_ratio = 0.0;
  /// Same fit with k_F replaced by the density-equivalent (6π^2 ρ)^{1/3}.
  double density_kf_ratio = 0.0;
};

PairDensityFit pair_density_fit(int dim, double kfL, double r_min = 0.01, double r_max = 0.1, int points = 20);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string summary;  // measured values, one line
  double seconds = 0.0;
  Json payload = Json::object();
};

/// Runs acceptance criteria 1-10 with the Fock block of `cfg`, then criterion 11
/// (a second run compared byte for byte) when `determinism` is set.
std::vector<CriterionResult> run_acceptance(const RunConfig& cfg, bool determinism = true);

/// "PASS  C3  title: summary"
std::string format_line(const CriterionResult& r);

/// Deterministic part of a suite run (no timings).
std::string suite_payload(const std::vector<CriterionResult>& results);

}  // namespace pwave
