#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwave/fit.hpp"

namespace pwave {

/// Dimensionless per-particle energy terms, in units of k_F^2.
struct EnergyTerm {
  std::string label;  // kinetic, p-wave, effective-range, second-order, error-envelope, finite-size
  double value = 0.0;
};

struct EnvelopeConstants {
  double C_low = 1.0;
  double C_up = 1.0;
  double C_fs = 1.0;
};

/// E/N = k_F^2 [lower, upper]; `error_low`, `error_up` and `finite_size` are the
/// unscaled shapes multiplying the constants.
struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
  double leading = 0.0;
  double error_low = 0.0;
  double error_up = 0.0;
  double finite_size = 0.0;
  EnvelopeConstants constants;
};

struct EnergyBreakdown {
  int dim = 3;
  double a = 0.0;
  double k_F = 0.0;
  std::size_t N = 0;
  std::optional<double> R_eff;
  std::vector<EnergyTerm> terms;
  double total = 0.0;  // Σ terms
  /// Envelope shapes times their constants, listed apart from the total.
  std::vector<EnergyTerm> envelope;
  std::optional<Bracket> bracket;
  std::vector<std::string> warnings;
};

EnergyBreakdown energy_expansion(int dim, double a, double k_F, std::size_t N, std::optional<double> R_eff = {},
                                 std::optional<EnvelopeConstants> constants = {});

/// Per-particle energy bracket in units of k_F^2 (multiply by k_F^2 for E/N).
Bracket bound_bracket(int dim, double a, double k_F, std::size_t N, const EnvelopeConstants& constants);

/// Leading coefficient and exponent of the interaction term: c (a k_F)^p.
std::pair<double, int> pwave_coefficient(int dim);
double free_coefficient(int dim);
/// (2066 - 312 log 2) / (10395 π^2)
double second_order_coefficient();

struct SpinfulInput {
  std::vector<std::size_t> N_sigma;
  double a_s = 0.0;
  double L = 1.0;
  int dim = 3;
};

struct SpinfulEnergy {
  double free = 0.0;
  double interaction = 0.0;
  double total = 0.0;
};

SpinfulEnergy spinful_energy(const SpinfulInput& inp);

struct SweepSeries {
  std::string name;
  std::vector<ScalingSample> samples;
};

struct ScalingRow {
  std::string name;
  std::size_t points = 0;
  double exponent = 0.0;
  bool log_preferred = false;
  double residual = 0.0;
  ScalingFit fit;
};

std::vector<ScalingRow> scaling_table(const std::vector<SweepSeries>& sweeps);

}  // namespace pwave
