#include "pwave/expansion.hpp"

#include <cmath>
#include <numbers>

#include "pwave/errors.hpp"

namespace pwave {
namespace {

constexpr const char* kModule = "expansion";
constexpr double kPi = std::numbers::pi;

void check_inputs(int dim, double a, double k_F) {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::UnsupportedDim, kModule, "dimension must be 1, 2 or 3");
  if (!(a >= 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "a must be >= 0");
  if (!(k_F > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "k_F must be > 0");
}

double power_log(double x, double p) { return x > 0.0 ? std::pow(x, p) * std::abs(std::log(x)) : 0.0; }

}  // namespace

double free_coefficient(int dim) {
  switch (dim) {
    case 1: return 1.0 / 3.0;
    case 2: return 0.5;
    case 3: return 0.6;
  }
  throw Error(ErrorCode::UnsupportedDim, kModule, "dimension must be 1, 2 or 3");
}

std::pair<double, int> pwave_coefficient(int dim) {
  switch (dim) {
    case 1: return {2.0 / (3.0 * kPi), 1};
    case 2: return {0.25, 2};
    case 3: return {2.0 / (5.0 * kPi), 3};
  }
  throw Error(ErrorCode::UnsupportedDim, kModule, "dimension must be 1, 2 or 3");
}

double second_order_coefficient() { return (2066.0 - 312.0 * std::log(2.0)) / (10395.0 * kPi * kPi); }

EnergyBreakdown energy_expansion(int dim, double a, double k_F, std::size_t N, std::optional<double> R_eff,
                                 std::optional<EnvelopeConstants> constants) {
  check_inputs(dim, a, k_F);
  EnergyBreakdown out;
  out.dim = dim;
  out.a = a;
  out.k_F = k_F;
  out.N = N;
  out.R_eff = R_eff;
  const double x = a * k_F;
  const auto [c, p] = pwave_coefficient(dim);
  out.terms.push_back({"kinetic", free_coefficient(dim)});
  out.terms.push_back({"p-wave", c * std::pow(x, p)});
  if (dim == 3) {
    if (R_eff) {
      if (!(*R_eff != 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "R_eff must be nonzero");
      out.terms.push_back({"effective-range", -std::pow(a, 6) * std::pow(k_F, 5) / (35.0 * kPi * *R_eff)});
    } else {
      out.warnings.push_back("effective-range term omitted: R_eff not supplied");
    }
    out.terms.push_back({"second-order", second_order_coefficient() * std::pow(x, 6)});
  }
  for (const auto& t : out.terms) out.total += t.value;
  if (constants) {
    if (dim == 1) {
      out.warnings.push_back("no error bracket in d=1; leading formula only");
    } else {
      const Bracket b = bound_bracket(dim, a, k_F, N, *constants);
      out.envelope.push_back({"error-envelope", constants->C_low * b.error_low});
      out.envelope.push_back({"finite-size", constants->C_fs * b.finite_size});
      out.bracket = b;
    }
  }
  return out;
}

Bracket bound_bracket(int dim, double a, double k_F, std::size_t N, const EnvelopeConstants& constants) {
  check_inputs(dim, a, k_F);
  if (dim == 1)
    throw Error(ErrorCode::UnsupportedDim, kModule, "d=1 bounds are not part of this bracket; use energy_expansion");
  if (N == 0) throw Error(ErrorCode::InvalidArgument, kModule, "N must be positive");
  const double x = a * k_F;
  const auto [c, p] = pwave_coefficient(dim);
  Bracket b;
  b.constants = constants;
  b.leading = free_coefficient(dim) + c * std::pow(x, p);
  if (dim == 3) {
    b.error_low = power_log(x, 3.3);
    b.error_up = power_log(x, 4.0);
  } else {
    b.error_low = power_log(x, 2.25);
    b.error_up = power_log(x, 2.25);
  }
  b.finite_size = std::pow(static_cast<double>(N), -1.0 / dim);
  b.lower = b.leading - constants.C_low * b.error_low - constants.C_fs * b.finite_size;
  b.upper = b.leading + constants.C_up * b.error_up + constants.C_fs * b.finite_size;
  return b;
}

SpinfulEnergy spinful_energy(const SpinfulInput& inp) {
  if (inp.dim != 3) throw Error(ErrorCode::UnsupportedDim, kModule, "spinful formula is three-dimensional");
  if (!(inp.a_s >= 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "a_s must be >= 0");
  if (!(inp.L > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "L must be > 0");
  const double vol = inp.L * inp.L * inp.L;
  SpinfulEnergy e;
  for (std::size_t n : inp.N_sigma) {
    const double rho = static_cast<double>(n) / vol;
    e.free += 0.6 * static_cast<double>(n) * std::pow(6.0 * kPi * kPi * rho, 2.0 / 3.0);
  }
  for (std::size_t s = 0; s < inp.N_sigma.size(); ++s)
    for (std::size_t t = 0; t < inp.N_sigma.size(); ++t)
      if (s != t)
        e.interaction += 4.0 * kPi * inp.a_s * static_cast<double>(inp.N_sigma[s]) *
                         static_cast<double>(inp.N_sigma[t]) / vol;
  e.total = e.free + e.interaction;
  return e;
}

std::vector<ScalingRow> scaling_table(const std::vector<SweepSeries>& sweeps) {
  std::vector<ScalingRow> rows;
  for (const auto& s : sweeps) {
    if (s.samples.size() < 4)
      throw Error(ErrorCode::InsufficientSamples, kModule, s.name + ": need at least 4 sweep points");
    ScalingRow r;
    r.name = s.name;
    r.points = s.samples.size();
    r.fit = norm_scaling_fit(s.samples);
    r.exponent = r.fit.exponent;
    r.log_preferred = r.fit.log_preferred;
    r.residual = r.log_preferred ? r.fit.log_residual : r.fit.power_residual;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace pwave
