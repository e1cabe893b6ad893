#include "pwave/torus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "pwave/errors.hpp"
#include "pwave/quadrature.hpp"
#include "pwave/scattering.hpp"

namespace pwave {
namespace {

constexpr const char* kModule = "torus";
constexpr double kPi = std::numbers::pi;

void require_dim(int dim) {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::DimensionUnsupported, kModule, "dimension must be 1, 2 or 3");
}

// Visits every n in the box |n_i| <= m (unused coordinates fixed at 0) in lexicographic order.
template <class F>
void for_each_in_box(int dim, int m, F&& f) {
  LatticeVector n{0, 0, 0};
  const int m1 = dim >= 2 ? m : 0;
  const int m2 = dim >= 3 ? m : 0;
  for (n[0] = -m; n[0] <= m; ++n[0])
    for (n[1] = -m1; n[1] <= m1; ++n[1])
      for (n[2] = -m2; n[2] <= m2; ++n[2]) f(n);
}

// Largest integer s with s <= x^2 (1 + 1e-12); guards shells sitting exactly on k_F.
std::int64_t shell_limit(double x) {
  return static_cast<std::int64_t>(std::floor(x * x * (1.0 + 1e-12)));
}

double unit_ball_volume(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return kPi;
    default: return 4.0 * kPi / 3.0;
  }
}

// 1 - cos z, 1 - J0(z), 1 - sin(z)/z without cancellation for small z.
double one_minus_profile(int dim, double z) {
  if (dim == 1) {
    const double s = std::sin(0.5 * z);
    return 2.0 * s * s;
  }
  if (std::abs(z) < 1.0) {
    const double z2 = z * z;
    double term = 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 12; ++j) {
      // J0: (-1)^j (z^2/4)^j / (j!)^2;  sin z / z: (-1)^j z^{2j} / (2j+1)!
      term *= dim == 2 ? -z2 / (4.0 * j * j) : -z2 / ((2.0 * j) * (2.0 * j + 1.0));
      sum -= term;
    }
    return sum;
  }
  if (dim == 2) return 1.0 - std::cyl_bessel_j(0.0, z);
  return 1.0 - std::sin(z) / z;
}

}  // namespace

void TorusSpec::validate() const {
  require_dim(dim);
  if (!(L > 0.0) || !std::isfinite(L)) throw Error(ErrorCode::InvalidArgument, kModule, "box length L must be positive");
}

double TorusSpec::momentum_unit() const { return 2.0 * kPi / L; }

double TorusSpec::volume() const { return std::pow(L, dim); }

int norm_sq(const LatticeVector& n) { return n[0] * n[0] + n[1] * n[1] + n[2] * n[2]; }

double density_constant(int dim) {
  require_dim(dim);
  if (dim == 3) return std::cbrt(6.0 * kPi * kPi);
  if (dim == 2) return std::sqrt(4.0 * kPi);
  return kPi;
}

double energy_constant(int dim) {
  require_dim(dim);
  return dim == 3 ? 3.0 / 5.0 : (dim == 2 ? 0.5 : 1.0 / 3.0);
}

FermiBall fermi_ball(const TorusSpec& spec, double k_F, std::size_t cap) {
  spec.validate();
  if (!(k_F > 0.0) || !std::isfinite(k_F)) throw Error(ErrorCode::InvalidArgument, kModule, "k_F must be positive");
  const double radius = k_F / spec.momentum_unit();
  const int m = static_cast<int>(std::ceil(radius));
  const double predicted = unit_ball_volume(spec.dim) * std::pow(radius + 1.0, spec.dim);
  if (predicted > static_cast<double>(cap))
    throw Error(ErrorCode::Overflow, kModule, "predicted Fermi ball size exceeds the cap");

  FermiBall ball;
  ball.spec = spec;
  ball.k_F = k_F;
  const std::int64_t limit = shell_limit(radius);
  std::int64_t sum_sq = 0;
  for_each_in_box(spec.dim, m, [&](const LatticeVector& n) {
    const std::int64_t s = norm_sq(n);
    if (s <= limit) {
      ball.momenta.push_back(n);
      sum_sq += s;
      ball.shell = std::max(ball.shell, s);
    }
  });
  ball.N = ball.momenta.size();
  const double unit = spec.momentum_unit();
  ball.E_F = unit * unit * static_cast<double>(sum_sq);
  ball.rho = static_cast<double>(ball.N) / spec.volume();
  return ball;
}

DensityRelation kf_density_relation(const FermiBall& ball) {
  DensityRelation rel;
  const int d = ball.spec.dim;
  rel.c_d = density_constant(d);
  rel.e_d = energy_constant(d);
  rel.k_F_from_density = rel.c_d * std::pow(ball.rho, 1.0 / d);
  rel.delta1 = ball.k_F / rel.k_F_from_density - 1.0;
  rel.delta2 = ball.E_F / (rel.e_d * static_cast<double>(ball.N) * ball.k_F * ball.k_F) - 1.0;
  return rel;
}

ParticleBracket bracket_particle_number(const TorusSpec& spec, std::size_t N) {
  spec.validate();
  if (N < 1) throw Error(ErrorCode::InvalidArgument, kModule, "particle number must be >= 1");
  int m = static_cast<int>(std::ceil(std::pow(static_cast<double>(N) / unit_ball_volume(spec.dim), 1.0 / spec.dim))) + 2;
  while (true) {
    // shells are complete only up to |n|^2 <= m^2
    std::map<std::int64_t, std::size_t> counts;
    for_each_in_box(spec.dim, m, [&](const LatticeVector& n) { ++counts[norm_sq(n)]; });
    const std::int64_t complete = static_cast<std::int64_t>(m) * m;
    std::size_t cumulative = 0;
    ParticleBracket out;
    bool found = false;
    for (const auto& [s, c] : counts) {
      if (s > complete) break;
      const std::size_t next = cumulative + c;
      const double k = spec.momentum_unit() * std::sqrt(static_cast<double>(s));
      if (next <= N) {
        out.k_F_lo = k;
        out.N_lo = next;
      }
      if (next >= N) {
        out.k_F_hi = k;
        out.N_hi = next;
        found = true;
        break;
      }
      cumulative = next;
    }
    if (found) {
      const double scale = std::pow(static_cast<double>(N), 2.0 / 3.0);
      out.excess_hi = static_cast<double>(out.N_hi - N) / scale;
      out.deficit_lo = static_cast<double>(N - out.N_lo) / scale;
      return out;
    }
    m *= 2;
  }
}

// ---------------------------------------------------------------------------
// Kernels

KernelTable::KernelTable(FermiBall ball, bool with_spherical) : ball_(std::move(ball)) {
  const int d = ball_.spec.dim;
  const double vol = ball_.spec.volume();
  v0_ = static_cast<double>(ball_.N) / vol;
  for (int axis = 0; axis < d; ++axis) {
    std::map<int, double> groups;
    for (const auto& n : ball_.momenta) groups[n[axis]] += 1.0;
    axis_groups_[axis].assign(groups.begin(), groups.end());
  }
  if (with_spherical) {
    std::map<std::int64_t, double> shells;
    for (const auto& n : ball_.momenta)
      for (const auto& m : ball_.momenta) {
        const LatticeVector q{n[0] - m[0], n[1] - m[1], n[2] - m[2]};
        shells[norm_sq(q)] += 1.0;
      }
    shells_.assign(shells.begin(), shells.end());
  }
}

double KernelTable::v(double r, int axis) const {
  if (axis < 0 || axis >= ball_.spec.dim) throw Error(ErrorCode::InvalidArgument, kModule, "axis out of range");
  const double unit = ball_.spec.momentum_unit();
  double s = 0.0;
  for (const auto& [m, c] : axis_groups_[axis]) s += c * std::cos(unit * m * r);
  return s / ball_.spec.volume();
}

double KernelTable::pair_density_axis(double r, int axis) const {
  if (axis < 0 || axis >= ball_.spec.dim) throw Error(ErrorCode::InvalidArgument, kModule, "axis out of range");
  const double unit = ball_.spec.momentum_unit();
  // v(0) - v(r) as a sum of 2 sin^2 terms
  double diff = 0.0;
  for (const auto& [m, c] : axis_groups_[axis]) {
    const double s = std::sin(0.5 * unit * m * r);
    diff += 2.0 * c * s * s;
  }
  diff /= ball_.spec.volume();
  return diff * (2.0 * v0_ - diff);
}

double KernelTable::pair_density_spherical(double r) const {
  if (shells_.empty()) throw Error(ErrorCode::InvalidArgument, kModule, "kernel table built without spherical data");
  const int d = ball_.spec.dim;
  const double unit = ball_.spec.momentum_unit();
  double s = 0.0;
  for (const auto& [q2, mult] : shells_) {
    if (q2 == 0) continue;
    s += mult * one_minus_profile(d, unit * std::sqrt(static_cast<double>(q2)) * r);
  }
  const double vol = ball_.spec.volume();
  return s / (vol * vol);
}

double pair_density(const KernelTable& kt, double r) { return kt.pair_density_axis(r, 0); }

namespace {

std::vector<double> radial_points(std::span<const double> breakpoints) {
  std::vector<double> bp{0.0};
  for (double b : breakpoints)
    if (b > 0.0) bp.push_back(b);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  if (bp.size() < 2) throw Error(ErrorCode::InvalidArgument, kModule, "radial support must be positive");
  return bp;
}

}  // namespace

double free_state_expectation(const KernelTable& kt, const std::function<double(double)>& W,
                              std::span<const double> breakpoints, double rel_tol) {
  const std::vector<double> bp = radial_points(breakpoints);
  const TorusSpec& spec = kt.ball().spec;
  if (bp.back() > 0.5 * spec.L * (1.0 + 1e-12))
    throw Error(ErrorCode::InvalidArgument, kModule, "support of W exceeds L/2");
  const int d = spec.dim;
  const auto f = [&](double r) { return W(r) * kt.pair_density_spherical(r) * std::pow(r, d - 1); };
  const double integral = quad::integrate(f, bp, {.rel_tol = rel_tol, .abs_tol = 0.0, .order = 20, .max_level = 16});
  return 0.5 * spec.volume() * sphere_area(d) * integral;
}

double continuum_density(int dim, double k_F) { return std::pow(k_F / density_constant(dim), dim); }

double continuum_kernel(int dim, double k_F, double r) {
  require_dim(dim);
  const double rho = continuum_density(dim, k_F);
  const double z = k_F * r;
  if (z < 1e-4) {
    const double z2 = z * z;
    // leading terms of the profile normalized to 1 at the origin
    const double c = dim == 1 ? 1.0 / 6.0 : (dim == 2 ? 1.0 / 8.0 : 1.0 / 10.0);
    return rho * (1.0 - c * z2);
  }
  switch (dim) {
    case 1: return std::sin(z) / (kPi * r);
    case 2: return rho * 2.0 * std::cyl_bessel_j(1.0, z) / z;
    default: return rho * 3.0 * (std::sin(z) - z * std::cos(z)) / (z * z * z);
  }
}

namespace {

// 1 - f(z) for the normalized continuum kernel profile f (f(0) = 1), by series below z = 1.
double continuum_one_minus_profile(int dim, double z) {
  if (dim == 1) return one_minus_profile(3, z);
  if (z >= 1.0) {
    if (dim == 2) return 1.0 - 2.0 * std::cyl_bessel_j(1.0, z) / z;
    return 1.0 - 3.0 * (std::sin(z) - z * std::cos(z)) / (z * z * z);
  }
  const double z2 = z * z;
  double sum = 0.0;
  if (dim == 2) {
    // 2 J1(z)/z = Σ (-1)^m (z²/4)^m / (m! (m+1)!)
    double term = 1.0;
    for (int m = 1; m <= 12; ++m) {
      term *= -z2 / (4.0 * m * (m + 1));
      sum -= term;
    }
    return sum;
  }
  // 3 (sin z - z cos z)/z³ = Σ (-1)^m 6 (m+1) z^{2m} / (2m+3)!
  double power = 1.0;
  double fact = 6.0;  // (2m+3)! at m = 0
  for (int m = 1; m <= 12; ++m) {
    power *= -z2;
    fact *= (2.0 * m + 2.0) * (2.0 * m + 3.0);
    sum -= 6.0 * (m + 1) * power / fact;
  }
  return sum;
}

}  // namespace

double continuum_pair_density(int dim, double k_F, double r) {
  const double rho = continuum_density(dim, k_F);
  const double g = continuum_one_minus_profile(dim, k_F * r);
  // rho^2 - v^2 = rho^2 (1 - f)(1 + f)
  return rho * rho * g * (2.0 - g);
}

double continuum_free_expectation_per_particle(int dim, double k_F, const std::function<double(double)>& W,
                                               std::span<const double> breakpoints, double rel_tol) {
  const std::vector<double> bp = radial_points(breakpoints);
  const auto f = [&](double r) { return W(r) * continuum_pair_density(dim, k_F, r) * std::pow(r, dim - 1); };
  const double integral = quad::integrate(f, bp, {.rel_tol = rel_tol, .abs_tol = 0.0, .order = 20, .max_level = 16});
  return 0.5 * sphere_area(dim) * integral / continuum_density(dim, k_F);
}

double radial_fourier(int dim, const std::function<double(double)>& W, double p, std::span<const double> breakpoints,
                      double rel_tol) {
  require_dim(dim);
  const std::vector<double> bp = radial_points(breakpoints);
  p = std::abs(p);
  std::function<double(double)> f;
  switch (dim) {
    case 1: f = [&](double r) { return 2.0 * W(r) * std::cos(p * r); }; break;
    case 2: f = [&](double r) { return 2.0 * kPi * W(r) * std::cyl_bessel_j(0.0, p * r) * r; }; break;
    default:
      if (p == 0.0) f = [&](double r) { return 4.0 * kPi * W(r) * r * r; };
      else f = [&](double r) { return 4.0 * kPi * W(r) * std::sin(p * r) / p * r; };
  }
  // absolute floor keeps near-zero transforms from demanding relative accuracy
  double scale = 0.0;
  {
    const auto g = [&](double r) { return std::abs(W(r)) * std::pow(r, dim - 1); };
    scale = sphere_area(dim) * quad::integrate_panels(g, bp.front(), bp.back(), 8, 20);
  }
  return quad::integrate(f, bp, {.rel_tol = rel_tol, .abs_tol = 1e-15 * scale, .order = 20, .max_level = 16});
}

}  // namespace pwave
