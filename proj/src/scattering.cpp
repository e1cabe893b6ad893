#include "pwave/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "pwave/errors.hpp"
#include "pwave/quadrature.hpp"
#include "pwave/smoothstep.hpp"

namespace pwave {
namespace {

constexpr const char* kModule = "scattering";

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

void require_dim(int dim) {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::DimensionUnsupported, kModule, "dimension must be 1, 2 or 3");
}

}  // namespace

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::SoftSphere: return "soft-sphere";
    case PotentialKind::TruncatedGaussian: return "truncated-gaussian";
    case PotentialKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

double sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw Error(ErrorCode::DimensionUnsupported, kModule, "dimension must be 1, 2 or 3");
  }
}

// ---------------------------------------------------------------------------
// RadialPotential

RadialPotential::RadialPotential(int dim, PotentialKind kind, double range) : dim_(dim), kind_(kind), range_(range) {
  require_dim(dim);
  if (!(range > 0.0) || !std::isfinite(range))
    throw Error(ErrorCode::InvalidArgument, kModule, "potential range must be positive");
}

RadialPotential RadialPotential::soft_sphere(int dim, double height, double range) {
  RadialPotential v(dim, PotentialKind::SoftSphere, range);
  if (height < 0.0) throw Error(ErrorCode::NonRepulsive, kModule, "soft-sphere height is negative");
  if (!std::isfinite(height)) throw Error(ErrorCode::InvalidArgument, kModule, "soft-sphere height is not finite");
  v.p0_ = height;
  return v;
}

RadialPotential RadialPotential::truncated_gaussian(int dim, double amplitude, double width, double range) {
  RadialPotential v(dim, PotentialKind::TruncatedGaussian, range);
  if (amplitude < 0.0) throw Error(ErrorCode::NonRepulsive, kModule, "gaussian amplitude is negative");
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, kModule, "gaussian width must be positive");
  v.p0_ = amplitude;
  v.p1_ = width;
  return v;
}

RadialPotential RadialPotential::tabulated(int dim, std::vector<double> radii, std::vector<double> values) {
  if (radii.size() < 2 || radii.size() != values.size())
    throw Error(ErrorCode::InvalidArgument, kModule, "tabulated potential needs >= 2 (r, V) pairs");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (values[i] < 0.0) throw Error(ErrorCode::NonRepulsive, kModule, "tabulated potential has V < 0");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw Error(ErrorCode::InvalidArgument, kModule, "tabulated radii must be strictly increasing");
  }
  if (radii.front() < 0.0) throw Error(ErrorCode::InvalidArgument, kModule, "tabulated radii must be >= 0");
  RadialPotential v(dim, PotentialKind::Tabulated, radii.back());
  v.knots_r_ = std::move(radii);
  v.knots_v_ = std::move(values);
  return v;
}

double RadialPotential::value(double r, Side side) const {
  r = std::abs(r);
  if (r > range_ || (r == range_ && side == Side::Right)) return 0.0;
  switch (kind_) {
    case PotentialKind::SoftSphere: return p0_;
    case PotentialKind::TruncatedGaussian: return p0_ * std::exp(-r * r / (2.0 * p1_ * p1_));
    case PotentialKind::Tabulated: {
      if (r <= knots_r_.front()) return knots_v_.front();
      const auto it = std::upper_bound(knots_r_.begin(), knots_r_.end(), r);
      const std::size_t hi = std::min<std::size_t>(it - knots_r_.begin(), knots_r_.size() - 1);
      const std::size_t lo = hi - 1;
      const double t = (r - knots_r_[lo]) / (knots_r_[hi] - knots_r_[lo]);
      return knots_v_[lo] + t * (knots_v_[hi] - knots_v_[lo]);
    }
  }
  return 0.0;
}

bool RadialPotential::is_zero() const {
  if (kind_ == PotentialKind::Tabulated)
    return std::all_of(knots_v_.begin(), knots_v_.end(), [](double v) { return v == 0.0; });
  return p0_ == 0.0;
}

std::vector<double> RadialPotential::kinks() const {
  std::vector<double> out;
  if (kind_ == PotentialKind::Tabulated)
    for (double r : knots_r_)
      if (r > 0.0 && r < range_) out.push_back(r);
  out.push_back(range_);
  return out;
}

double RadialPotential::moment(int n) const {
  std::vector<double> bp{0.0};
  for (double k : kinks()) bp.push_back(k);
  const int d = dim_;
  const auto f = [&](double r) { return value(r, Side::Left) * ipow(r, n + d - 1); };
  return sphere_area(d) * quad::integrate(f, bp, {.rel_tol = 1e-13, .abs_tol = 1e-300});
}

// ---------------------------------------------------------------------------
// Shooting

namespace {

struct Run {
  std::vector<double> grid;
  std::vector<double> psi;
  std::vector<double> flux;  // r^{d+1} psi'
  std::size_t steps_to_range = 0;
  double step = 0.0;
};

constexpr double kCellRatio = 1.02;

Run shoot(const RadialPotential& V, std::size_t steps, double extent) {
  using Side = RadialPotential::Side;
  const int d = V.dim();
  const double R0 = V.range();
  const double eps = 1e-6 * R0;
  const double h = (R0 - eps) / static_cast<double>(steps);
  const auto extra = static_cast<std::size_t>(std::ceil((extent - 1.0) * R0 / h - 1e-9));

  Run run;
  run.steps_to_range = steps;
  run.step = h;
  const std::size_t nodes = steps + extra + 1;
  run.grid.resize(nodes);
  run.psi.resize(nodes);
  run.flux.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    if (i < steps) run.grid[i] = eps + static_cast<double>(i) * h;
    else run.grid[i] = R0 + static_cast<double>(i - steps) * h;
  }

  // Leading-order series at the regular singular point.
  const double V0 = V.value(0.0, Side::Right);
  run.psi[0] = 1.0 + V0 * eps * eps / (4.0 * (d + 2));
  run.flux[0] = V0 * ipow(eps, d + 2) / (2.0 * (d + 2));

  const auto rhs = [&](double r, double psi, double flux, Side side) {
    const double rd1 = ipow(r, d + 1);
    return std::array<double, 2>{flux / rd1, 0.5 * rd1 * V.value(r, side) * psi};
  };

  const auto step = [&](double lo, double hi, double& y0, double& y1) {
    const double hh = hi - lo;
    const auto k1 = rhs(lo, y0, y1, Side::Right);
    const auto k2 = rhs(lo + 0.5 * hh, y0 + 0.5 * hh * k1[0], y1 + 0.5 * hh * k1[1], Side::Right);
    const auto k3 = rhs(lo + 0.5 * hh, y0 + 0.5 * hh * k2[0], y1 + 0.5 * hh * k2[1], Side::Right);
    const auto k4 = rhs(hi, y0 + hh * k3[0], y1 + hh * k3[1], Side::Left);
    y0 += hh / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    y1 += hh / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
  };

  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    double y0 = run.psi[i];
    double y1 = run.flux[i];
    // Near the origin the flux grows like r^{d+2}; cells whose endpoints differ by
    // more than the ratio below are crossed in geometric sub-steps.
    const double lo = run.grid[i];
    const double hi = run.grid[i + 1];
    const int sub = std::max(1, static_cast<int>(std::ceil(std::log(hi / lo) / std::log(kCellRatio))));
    if (sub == 1) {
      step(lo, hi, y0, y1);
    } else {
      const double q = std::pow(hi / lo, 1.0 / sub);
      double r = lo;
      for (int j = 0; j < sub; ++j) {
        const double next = (j + 1 == sub) ? hi : r * q;
        step(r, next, y0, y1);
        r = next;
      }
    }
    run.psi[i + 1] = y0;
    run.flux[i + 1] = y1;
  }
  return run;
}

ExteriorFit fit_from(double r, double psi, double flux, int d) {
  ExteriorFit fit;
  const double slope = flux / ipow(r, d + 1);
  fit.A = psi + r * slope / d;
  fit.B = -flux / d;
  return fit;
}

}  // namespace

ScatteringSolution solve_scattering(const RadialPotential& V, double tol, double extent) {
  if (!(tol > 1e-14 && tol < 1e-4))
    throw Error(ErrorCode::InvalidArgument, kModule, "tolerance must lie in (1e-14, 1e-4)");
  if (!(extent >= 1.0)) throw Error(ErrorCode::InvalidArgument, kModule, "grid extent must be >= 1 (in units of R0)");
  const int d = V.dim();

  std::size_t steps = 64;
  Run coarse = shoot(V, steps, extent);
  ExteriorFit coarse_fit = fit_from(V.range(), coarse.psi[steps], coarse.flux[steps], d);
  constexpr std::size_t kMaxSteps = std::size_t{1} << 22;

  while (true) {
    steps *= 2;
    if (steps > kMaxSteps)
      throw Error(ErrorCode::NoConvergence, kModule, "step halving did not reach the requested tolerance");
    Run fine = shoot(V, steps, extent);
    const ExteriorFit fit = fit_from(V.range(), fine.psi[steps], fine.flux[steps], d);
    if (!(fit.A > tol)) throw Error(ErrorCode::DegenerateExterior, kModule, "exterior constant A <= tol");

    const double ad = fit.a_pow_d();
    const double ad_prev = coarse_fit.a_pow_d();
    const double da = std::abs(ad - ad_prev);
    double dprofile = 0.0;
    for (std::size_t i = 0; i < coarse.grid.size() && 2 * i < fine.grid.size(); ++i)
      dprofile = std::max(dprofile, std::abs(fine.psi[2 * i] / fit.A - coarse.psi[i] / coarse_fit.A));

    if (da <= tol * ad && dprofile <= tol) {
      ScatteringSolution sol(V);
      sol.dim = d;
      sol.grid = std::move(fine.grid);
      sol.psi = std::move(fine.psi);
      sol.psi_prime.resize(sol.grid.size());
      for (std::size_t i = 0; i < sol.grid.size(); ++i) sol.psi_prime[i] = fine.flux[i] / ipow(sol.grid[i], d + 1);
      sol.exterior_A = fit.A;
      sol.exterior_B = fit.B;
      sol.a_pow_d = ad;
      sol.a = std::pow(ad, 1.0 / d);
      sol.ode_residual = dprofile;
      sol.steps_to_range = steps;
      sol.step = fine.step;
      return sol;
    }
    coarse = std::move(fine);
    coarse_fit = fit;
  }
}

// ---------------------------------------------------------------------------
// Evaluators

namespace {

// Locates the cell [grid[i], grid[i+1]] containing r (grid uniform in step).
std::size_t locate(const ScatteringSolution& sol, double r) {
  const double eps = sol.grid.front();
  auto i = static_cast<std::ptrdiff_t>(std::floor((r - eps) / sol.step));
  const auto last = static_cast<std::ptrdiff_t>(sol.grid.size()) - 2;
  i = std::clamp<std::ptrdiff_t>(i, 0, last);
  while (i > 0 && sol.grid[i] > r) --i;
  while (i < last && sol.grid[i + 1] < r) ++i;
  return static_cast<std::size_t>(i);
}

double psi_second(const ScatteringSolution& sol, std::size_t node, RadialPotential::Side side) {
  const double r = sol.grid[node];
  const double v = sol.potential.value(r, side);
  return (0.5 * r * v * sol.psi[node] - (sol.dim + 1) * sol.psi_prime[node]) / r;
}

// Cubic Hermite on [x0, x1] from values and slopes; returns (value, derivative).
std::array<double, 2> hermite(double x0, double x1, double f0, double f1, double g0, double g1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  const double value = h00 * f0 + h10 * h * g0 + h01 * f1 + h11 * h * g1;
  const double dh00 = (6 * t2 - 6 * t) / h;
  const double dh10 = 3 * t2 - 4 * t + 1;
  const double dh01 = (-6 * t2 + 6 * t) / h;
  const double dh11 = 3 * t2 - 2 * t;
  const double deriv = dh00 * f0 + dh10 * g0 + dh01 * f1 + dh11 * g1;
  return {value, deriv};
}

double series_coefficient(const ScatteringSolution& sol) {
  return sol.potential.value(0.0, RadialPotential::Side::Right) / (4.0 * (sol.dim + 2));
}

}  // namespace

double ScatteringSolution::psi_at(double r) const {
  r = std::abs(r);
  if (r <= grid.front()) return 1.0 + series_coefficient(*this) * r * r;
  if (r >= potential.range()) return exterior_A + exterior_B / ipow(r, dim);
  const std::size_t i = locate(*this, r);
  return hermite(grid[i], grid[i + 1], psi[i], psi[i + 1], psi_prime[i], psi_prime[i + 1], r)[0];
}

double ScatteringSolution::phi0(double r) const {
  r = std::abs(r);
  if (r >= potential.range()) return a_pow_d == 0.0 ? 0.0 : a_pow_d / ipow(r, dim);
  return 1.0 - psi_at(r) / exterior_A;
}

double ScatteringSolution::one_minus_phi0(double r) const {
  r = std::abs(r);
  if (r >= potential.range()) return 1.0 - phi0(r);
  return psi_at(r) / exterior_A;
}

double ScatteringSolution::phi0_prime(double r) const {
  r = std::abs(r);
  if (r >= potential.range()) return a_pow_d == 0.0 ? 0.0 : -dim * a_pow_d / ipow(r, dim + 1);
  if (r <= grid.front()) return -2.0 * series_coefficient(*this) * r / exterior_A;
  const std::size_t i = locate(*this, r);
  using Side = RadialPotential::Side;
  const double s0 = psi_second(*this, i, Side::Right);
  const double s1 = psi_second(*this, i + 1, Side::Left);
  const double dpsi = hermite(grid[i], grid[i + 1], psi_prime[i], psi_prime[i + 1], s0, s1, r)[0];
  return -dpsi / exterior_A;
}

double ScatteringSolution::phi0_second(double r) const {
  r = std::abs(r);
  if (r >= potential.range()) return a_pow_d == 0.0 ? 0.0 : dim * (dim + 1) * a_pow_d / ipow(r, dim + 2);
  if (r <= grid.front()) return -2.0 * series_coefficient(*this) / exterior_A;
  const double v = potential.value(r, RadialPotential::Side::Left);
  return -((dim + 1) * phi0_prime(r) + 0.5 * r * v * (1.0 - phi0(r))) / r;
}

ExteriorFit ScatteringSolution::exterior_fit_at(std::size_t node) const {
  if (node >= grid.size() || node < steps_to_range)
    throw Error(ErrorCode::GridMismatch, kModule, "exterior fit requested inside the support of V");
  const double r = grid[node];
  return fit_from(r, psi[node], psi_prime[node] * ipow(r, dim + 1), dim);
}

double scattering_length_integral(const ScatteringSolution& sol, const RadialPotential& V) {
  if (sol.dim != 3 || V.dim() != 3)
    throw Error(ErrorCode::DimensionUnsupported, kModule, "the moment identity is evaluated in d = 3 only");
  if (sol.grid.back() < V.range() || sol.potential.range() < V.range())
    throw Error(ErrorCode::GridMismatch, kModule, "solution grid does not cover the support of V");
  if (V.is_zero()) return 0.0;

  // Integrate cell by cell on the solver grid so the interpolant stays polynomial per panel.
  const auto& rule = quad::gauss_legendre(8);
  const auto integrand = [&](double r) { return ipow(r, 4) * V.value(r, RadialPotential::Side::Left) * sol.psi_at(r); };
  std::vector<double> bp{0.0};
  for (std::size_t i = 0; i <= sol.steps_to_range; ++i) bp.push_back(sol.grid[i]);
  for (double k : V.kinks()) bp.push_back(k);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size() && bp[i] < V.range(); ++i) {
    const double lo = bp[i];
    const double hi = std::min(bp[i + 1], V.range());
    const double half = 0.5 * (hi - lo);
    const double mid = lo + half;
    double s = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) s += rule.weights[j] * integrand(mid + half * rule.nodes[j]);
    total += half * s;
  }
  const double a3 = total / (6.0 * sol.exterior_A);
  return std::cbrt(a3);
}

EnvelopeReport check_envelope(const ScatteringSolution& sol, double slack) {
  EnvelopeReport rep;
  const int d = sol.dim;
  double prev = 2.0;
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    const double r = sol.grid[i];
    const double phi = 1.0 - sol.psi[i] / sol.exterior_A;
    const double bound = std::min(1.0, sol.a_pow_d / ipow(r, d));
    ++rep.nodes_checked;
    if (phi > prev + slack * std::max(prev, 1e-300)) ++rep.monotonicity_violations;
    if (phi < -slack) ++rep.lower_violations;
    const double excess = phi - bound;
    if (excess > slack * std::max(bound, 1e-300)) ++rep.upper_violations;
    rep.max_excess = std::max(rep.max_excess, excess);
    prev = phi;
    if (sol.a_pow_d > 0.0) {
      const double env = sol.a_pow_d / (r * (sol.a_pow_d + ipow(r, d)));
      rep.derivative_constant = std::max(rep.derivative_constant, std::abs(sol.psi_prime[i] / sol.exterior_A) / env);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cutoff scattering function

CutoffScattering::CutoffScattering(ScatteringSolution base, double k_F) : base_(std::move(base)), k_F_(k_F) {
  if (!(k_F > 0.0) || !std::isfinite(k_F)) throw Error(ErrorCode::InvalidArgument, kModule, "k_F must be positive");
  if (1.0 / k_F <= base_.potential.range())
    throw Error(ErrorCode::CutoffInsideCore, kModule, "1/k_F must exceed the interaction range R0");
}

CutoffScattering cutoff_phi(const ScatteringSolution& sol, double k_F) { return CutoffScattering(sol, k_F); }

double CutoffScattering::phi(double r) const {
  r = std::abs(r);
  const double t = k_F_ * r;
  if (t >= 2.0) return 0.0;
  return base_.phi0(r) * cutoff_chi(t).value;
}

double CutoffScattering::one_minus_phi(double r) const {
  r = std::abs(r);
  const double t = k_F_ * r;
  if (t >= 2.0) return 1.0;
  const double chi = cutoff_chi(t).value;
  return (1.0 - chi) + chi * base_.one_minus_phi0(r);
}

double CutoffScattering::phi_prime(double r) const {
  r = std::abs(r);
  const double t = k_F_ * r;
  if (t >= 2.0) return 0.0;
  const Jet2 chi = cutoff_chi(t);
  return base_.phi0_prime(r) * chi.value + k_F_ * base_.phi0(r) * chi.d1;
}

double CutoffScattering::phi_second(double r) const {
  r = std::abs(r);
  const double t = k_F_ * r;
  if (t >= 2.0) return 0.0;
  const Jet2 chi = cutoff_chi(t);
  return base_.phi0_second(r) * chi.value + 2.0 * k_F_ * base_.phi0_prime(r) * chi.d1 +
         k_F_ * k_F_ * base_.phi0(r) * chi.d2;
}

double CutoffScattering::residual(double r) const {
  r = std::abs(r);
  const double t = k_F_ * r;
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const Jet2 chi = cutoff_chi(t);
  const int d = base_.dim;
  const double p0 = base_.phi0(r);
  const double p1 = base_.phi0_prime(r);
  return k_F_ * (2.0 * r * p1 * chi.d1 + (d + 1) * p0 * chi.d1) + k_F_ * k_F_ * r * p0 * chi.d2;
}

namespace {

// Kinks of V, the cutoff annulus and a geometric fill across the 1/r^d tail.
std::vector<double> coarse_breakpoints(const CutoffScattering& cs) {
  const double R0 = cs.base().potential.range();
  const double k_F = cs.k_F();
  std::vector<double> bp{0.0};
  for (double k : cs.base().potential.kinks()) bp.push_back(k);
  for (double r = 2.0 * R0; r < 1.0 / k_F; r *= 2.0) bp.push_back(r);
  bp.push_back(1.0 / k_F);
  bp.push_back(1.5 / k_F);
  bp.push_back(2.0 / k_F);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

std::vector<double> merge_sorted(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

std::vector<double> ScatteringSolution::core_nodes() const {
  return {grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(steps_to_range + 1)};
}

std::vector<double> CutoffScattering::breakpoints() const {
  return merge_sorted(coarse_breakpoints(*this), base_.core_nodes());
}

double residual_bound_constant(const CutoffScattering& cs, std::size_t samples) {
  if (cs.base().a_pow_d == 0.0) return 0.0;
  double best = 0.0;
  const double lo = 1.0 / cs.k_F();
  const double hi = 2.0 / cs.k_F();
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double denom = cs.k_F() * cs.phi(0.5 * r);
    best = std::max(best, std::abs(cs.residual(r)) / denom);
  }
  return best;
}

namespace {

// Splits the breakpoint intervals at sign changes of g so |g| is smooth per interval.
std::vector<double> refine_at_roots(const std::function<double(double)>& g, std::vector<double> bp) {
  std::vector<double> out;
  constexpr int kScan = 400;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double lo = bp[i];
    const double hi = bp[i + 1];
    out.push_back(lo);
    double x0 = lo + 1e-12 * (hi - lo);
    double g0 = g(x0);
    for (int k = 1; k <= kScan; ++k) {
      const double x1 = (k == kScan) ? hi - 1e-12 * (hi - lo) : lo + (hi - lo) * k / kScan;
      const double g1 = g(x1);
      if ((g0 < 0.0 && g1 > 0.0) || (g0 > 0.0 && g1 < 0.0)) {
        double a = x0;
        double b = x1;
        double ga = g0;
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
          const double m = 0.5 * (a + b);
          const double gm = g(m);
          if ((ga < 0.0) == (gm < 0.0)) {
            a = m;
            ga = gm;
          } else {
            b = m;
          }
        }
        out.push_back(0.5 * (a + b));
      }
      x0 = x1;
      g0 = g1;
    }
  }
  out.push_back(bp.back());
  return out;
}

}  // namespace

NormTable phi_norms(const CutoffScattering& cs, double rel_tol) {
  NormTable t;
  if (cs.base().a_pow_d == 0.0) return t;
  const int d = cs.dim();
  const double sigma = sphere_area(d);
  const std::vector<double> coarse = coarse_breakpoints(cs);
  const std::vector<double> core = cs.base().core_nodes();
  const std::vector<double> bp = merge_sorted(coarse, core);
  const quad::Options opts{.rel_tol = rel_tol, .abs_tol = 0.0, .order = 20, .max_level = 16};

  const auto radial = [&](auto&& f, const std::vector<double>& points) {
    return sigma * quad::integrate([&](double r) { return f(r) * ipow(r, d - 1); }, points, opts);
  };
  const auto phi = [&](double r) { return cs.phi(r); };
  const auto dphi = [&](double r) { return cs.phi_prime(r); };
  const auto d2phi = [&](double r) { return cs.phi_second(r); };

  const std::vector<double> bp1 = merge_sorted(refine_at_roots(dphi, coarse), core);
  const std::vector<double> bp2 = merge_sorted(refine_at_roots(d2phi, coarse), core);

  t.l1_r1 = radial([&](double r) { return r * std::abs(phi(r)); }, bp);
  t.l1_r2 = radial([&](double r) { return r * r * std::abs(phi(r)); }, bp);
  t.l1_grad0 = radial([&](double r) { return std::abs(phi(r)); }, bp);
  t.l1_grad1 = radial([&](double r) { return r * std::abs(dphi(r)); }, bp1);
  t.l1_grad2 = radial([&](double r) { return r * r * std::abs(d2phi(r)); }, bp2);
  t.l2_r1 = std::sqrt(radial([&](double r) { return r * r * phi(r) * phi(r); }, bp));
  t.l2_grad0 = std::sqrt(radial([&](double r) { return phi(r) * phi(r); }, bp));
  t.l2_grad1 = std::sqrt(radial([&](double r) { return r * r * dphi(r) * dphi(r); }, bp1));
  return t;
}

}  // namespace pwave
