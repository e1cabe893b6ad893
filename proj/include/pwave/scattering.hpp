#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace pwave {

enum class PotentialKind { SoftSphere, TruncatedGaussian, Tabulated };

std::string to_string(PotentialKind kind);

/// Surface measure of the unit sphere in d dimensions (2, 2π, 4π).
double sphere_area(int dim);

/// Compactly supported, non-negative radial interaction in d = 1, 2, 3.
///
/// Soft sphere:        V(r) = height            for r < range
/// Truncated Gaussian: V(r) = amp exp(-r²/2w²)  for r < range
/// Tabulated:          piecewise-linear through (r_i, V_i), zero past the last knot
class RadialPotential {
 public:
  enum class Side { Left, Right };

  static RadialPotential soft_sphere(int dim, double height, double range);
  static RadialPotential truncated_gaussian(int dim, double amplitude, double width, double range);
  static RadialPotential tabulated(int dim, std::vector<double> radii, std::vector<double> values);

  /// V(r); at a discontinuity the right limit is returned.
  double operator()(double r) const { return value(r, Side::Right); }
  /// One-sided value, used to keep integration steps from straddling a jump.
  double value(double r, Side side) const;

  int dim() const { return dim_; }
  PotentialKind kind() const { return kind_; }
  /// Support radius R0: V(r) = 0 for r >= R0.
  double range() const { return range_; }
  bool is_zero() const;

  /// Points in (0, R0] where V is not smooth (knots and the truncation edge).
  std::vector<double> kinks() const;

  /// ∫ V(x) |x|^n dx over R^d.
  double moment(int n) const;

  double height() const { return p0_; }
  double amplitude() const { return p0_; }
  double width() const { return p1_; }
  const std::vector<double>& knots() const { return knots_r_; }
  const std::vector<double>& knot_values() const { return knots_v_; }

 private:
  RadialPotential(int dim, PotentialKind kind, double range);

  int dim_;
  PotentialKind kind_;
  double range_;
  double p0_ = 0.0;
  double p1_ = 0.0;
  std::vector<double> knots_r_;
  std::vector<double> knots_v_;
};

/// Exterior representation psi(r) = A + B r^{-d} valid for r >= R0.
struct ExteriorFit {
  double A = 0.0;
  double B = 0.0;
  double a_pow_d() const { return A > 0.0 ? -B / A : 0.0; }
};

/// Zero-energy p-wave solution. `psi` is the unnormalized 1 - phi0 with
/// psi(0) = 1; the normalized scattering function is phi0 = 1 - psi / A.
struct ScatteringSolution {
  explicit ScatteringSolution(RadialPotential v) : potential(std::move(v)) {}

  RadialPotential potential;
  int dim = 3;
  std::vector<double> grid;
  std::vector<double> psi;
  std::vector<double> psi_prime;
  double exterior_A = 1.0;
  double exterior_B = 0.0;
  double a_pow_d = 0.0;
  double a = 0.0;
  /// Largest nodal change of psi / A between the last two step sizes.
  double ode_residual = 0.0;
  std::size_t steps_to_range = 0;
  double step = 0.0;

  /// Grid nodes from the start radius up to R0; the interpolant is a piecewise
  /// polynomial on these cells, so quadratures over the core should split there.
  std::vector<double> core_nodes() const;

  /// Index of the grid node at r = R0.
  std::size_t range_node() const { return steps_to_range; }

  /// phi0 and its radial derivatives at arbitrary r >= 0; exact a^d / r^d past R0.
  double phi0(double r) const;
  double phi0_prime(double r) const;
  double phi0_second(double r) const;

  /// 1 - phi0 = psi / A, without the cancellation of forming 1 - phi0(r).
  double one_minus_phi0(double r) const;

  /// Unnormalized psi = A (1 - phi0), interpolated.
  double psi_at(double r) const;

  /// (A, B) from the value and slope at grid node i (must satisfy r_i >= R0).
  ExteriorFit exterior_fit_at(std::size_t node) const;
};

/// Solves r psi'' + (d+1) psi' - ½ r V psi = 0 with psi(0) = 1, psi'(0) = 0 by
/// fixed-step RK4 on (psi, r^{d+1} psi'), halving the step until a^d and the
/// nodal profile settle below `tol`. The grid extends to `extent` * R0.
ScatteringSolution solve_scattering(const RadialPotential& potential, double tol = 1e-10, double extent = 2.0);

/// a from the moment identity a^d = (1 / 2dA) ∫ r^{d+1} V psi dr, restricted to d = 3.
double scattering_length_integral(const ScatteringSolution& sol, const RadialPotential& potential);

/// Pointwise checks on the computed profile.
struct EnvelopeReport {
  std::size_t monotonicity_violations = 0;
  std::size_t lower_violations = 0;
  std::size_t upper_violations = 0;
  double max_excess = 0.0;
  /// Smallest C with |psi'/A| <= C a^d / (r (a^d + r^d)) on the grid.
  double derivative_constant = 0.0;
  std::size_t nodes_checked = 0;
};

EnvelopeReport check_envelope(const ScatteringSolution& sol, double slack = 1e-9);

/// phi = phi0 * chi(k_F r), together with the scattering-equation residual
/// E_phi(r) = r phi'' + (d+1) phi' + ½ r V (1 - phi) evaluated in closed form.
class CutoffScattering {
 public:
  CutoffScattering(ScatteringSolution base, double k_F);

  const ScatteringSolution& base() const { return base_; }
  int dim() const { return base_.dim; }
  double k_F() const { return k_F_; }
  double a() const { return base_.a; }
  double support_radius() const { return 2.0 / k_F_; }

  double phi(double r) const;
  double one_minus_phi(double r) const;
  double phi_prime(double r) const;
  double phi_second(double r) const;
  double residual(double r) const;

  /// Sorted radii where phi or its derivatives lose smoothness (including the
  /// solver cells inside the core), from 0 to 2/k_F.
  std::vector<double> breakpoints() const;

 private:
  ScatteringSolution base_;
  double k_F_;
};

CutoffScattering cutoff_phi(const ScatteringSolution& sol, double k_F);

/// max over the annulus [1/k_F, 2/k_F] of |E_phi(r)| / (k_F phi(r/2)).
double residual_bound_constant(const CutoffScattering& cs, std::size_t samples = 2001);

/// Weighted norms of the cutoff scattering function; derivatives are radial.
struct NormTable {
  double l1_r1 = 0.0;     // ‖|x| φ‖_1
  double l1_r2 = 0.0;     // ‖|x|² φ‖_1
  double l1_grad0 = 0.0;  // ‖φ‖_1
  double l1_grad1 = 0.0;  // ‖|x| ∂φ‖_1
  double l1_grad2 = 0.0;  // ‖|x|² ∂²φ‖_1
  double l2_r1 = 0.0;     // ‖|x| φ‖_2
  double l2_grad0 = 0.0;  // ‖φ‖_2
  double l2_grad1 = 0.0;  // ‖|x| ∂φ‖_2
};

NormTable phi_norms(const CutoffScattering& cs, double rel_tol = 1e-9);

}  // namespace pwave
