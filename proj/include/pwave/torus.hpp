#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace pwave {

/// Periodic box [-L/2, L/2]^d.
struct TorusSpec {
  int dim = 3;
  double L = 1.0;

  void validate() const;
  /// Lattice spacing 2π/L of the momentum grid.
  double momentum_unit() const;
  double volume() const;
};

using LatticeVector = std::array<int, 3>;  // unused trailing coordinates are 0

int norm_sq(const LatticeVector& n);

/// All lattice momenta k = 2πn/L with |k| <= k_F, in lexicographic order of n.
struct FermiBall {
  TorusSpec spec;
  double k_F = 0.0;
  std::vector<LatticeVector> momenta;
  std::size_t N = 0;
  double E_F = 0.0;
  double rho = 0.0;
  /// Largest |n|^2 present.
  std::int64_t shell = 0;
};

inline constexpr std::size_t kDefaultBallCap = 10'000'000;

FermiBall fermi_ball(const TorusSpec& spec, double k_F, std::size_t cap = kDefaultBallCap);

/// Relative deviations of k_F and E_F from their continuum relations
/// k_F = c_d rho^{1/d}, E_F = e_d N k_F^2.
struct DensityRelation {
  double c_d = 0.0;
  double e_d = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double k_F_from_density = 0.0;
};

DensityRelation kf_density_relation(const FermiBall& ball);

/// Continuum constants (c_d, e_d) for d = 1, 2, 3.
double density_constant(int dim);
double energy_constant(int dim);

struct ParticleBracket {
  double k_F_lo = 0.0;
  std::size_t N_lo = 0;
  double k_F_hi = 0.0;
  std::size_t N_hi = 0;
  /// (N_hi - N) / N^{2/3} and (N - N_lo) / N^{2/3}
  double excess_hi = 0.0;
  double deficit_lo = 0.0;
};

/// Closed shells sandwiching N: #B_F(k_F_lo) <= N <= #B_F(k_F_hi) with no shell in between.
ParticleBracket bracket_particle_number(const TorusSpec& spec, std::size_t N);

/// Free-state kernel v(x) = L^{-d} Σ_{k in B_F} cos(k·x) and the pair density
/// rho2(x) = v(0)^2 - v(x)^2. Sums are grouped exactly (by one coordinate for
/// axis evaluations, by |n - n'|^2 for the spherical average), so every
/// evaluation costs O(#groups) and no interpolation is involved.
class KernelTable {
 public:
  explicit KernelTable(FermiBall ball, bool with_spherical = true);

  const FermiBall& ball() const { return ball_; }
  double v0() const { return v0_; }

  /// v(r e_axis).
  double v(double r, int axis = 0) const;
  /// rho2 along the given axis, evaluated without cancellation at small r.
  double pair_density_axis(double r, int axis = 0) const;
  /// rho2 averaged over directions |x| = r.
  double pair_density_spherical(double r) const;
  bool has_spherical() const { return !shells_.empty(); }

 private:
  FermiBall ball_;
  double v0_ = 0.0;
  std::array<std::vector<std::pair<int, double>>, 3> axis_groups_;
  std::vector<std::pair<std::int64_t, double>> shells_;  // (|n-n'|^2, ordered pair count)
};

/// rho2(r e_1).
double pair_density(const KernelTable& kt, double r);

/// ½ ∫∫ W(x-y) rho2(x,y) dx dy for radial W supported in |x| <= breakpoints.back() <= L/2.
/// Breakpoints mark the places where W is not smooth.
double free_state_expectation(const KernelTable& kt, const std::function<double(double)>& W,
                              std::span<const double> breakpoints, double rel_tol = 1e-11);

/// Infinite-volume free gas at Fermi momentum k_F.
double continuum_density(int dim, double k_F);
double continuum_kernel(int dim, double k_F, double r);
double continuum_pair_density(int dim, double k_F, double r);
/// ½ ∫ W(x) rho2(x) dx / rho, the interaction energy per particle.
double continuum_free_expectation_per_particle(int dim, double k_F, const std::function<double(double)>& W,
                                               std::span<const double> breakpoints, double rel_tol = 1e-11);

/// Ŵ(p) = ∫_{R^d} W(|x|) e^{-ip·x} dx for radial W, p = |p|.
double radial_fourier(int dim, const std::function<double(double)>& W, double p, std::span<const double> breakpoints,
                      double rel_tol = 1e-12);

}  // namespace pwave
