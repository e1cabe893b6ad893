#include "pwave/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pwave::oracle {
namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int dim) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("oracle: dimension must be 1, 2 or 3");
}

}  // namespace

double soft_sphere_a_pow_d(int dim, double V0, double R0) {
  check_dim(dim);
  if (V0 == 0.0) return 0.0;
  const double x = R0 * std::sqrt(0.5 * V0);
  const double nu = 0.5 * dim;
  const double ratio = std::cyl_bessel_i(nu + 1.0, x) / std::cyl_bessel_i(nu, x);
  return std::pow(R0, dim) * x * ratio / (dim + x * ratio);
}

double soft_sphere_a(int dim, double V0, double R0) { return std::pow(soft_sphere_a_pow_d(dim, V0, R0), 1.0 / dim); }

double soft_sphere_a3_elementary(double V0, double R0) {
  if (V0 == 0.0) return 0.0;
  const double x = R0 * std::sqrt(0.5 * V0);
  const double t = std::tanh(x);
  // I_{5/2} / I_{3/2}
  const double ratio = ((1.0 + 3.0 / (x * x)) * t - 3.0 / x) / (1.0 - t / x);
  return R0 * R0 * R0 * x * ratio / (3.0 + x * ratio);
}

double soft_sphere_psi(int dim, double V0, double r) {
  check_dim(dim);
  const double x = r * std::sqrt(0.5 * V0);
  if (x == 0.0) return 1.0;
  const double nu = 0.5 * dim;
  return std::tgamma(nu + 1.0) * std::pow(2.0 / x, nu) * std::cyl_bessel_i(nu, x);
}

double soft_sphere_fourier(int dim, double V0, double R0, double p) {
  check_dim(dim);
  const double z = p * R0;
  switch (dim) {
    case 1: return p == 0.0 ? 2.0 * V0 * R0 : 2.0 * V0 * std::sin(z) / p;
    case 2: return p == 0.0 ? kPi * R0 * R0 * V0 : 2.0 * kPi * V0 * R0 * std::cyl_bessel_j(1.0, z) / p;
    default:
      return p == 0.0 ? 4.0 * kPi / 3.0 * R0 * R0 * R0 * V0
                      : 4.0 * kPi * V0 * (std::sin(z) - z * std::cos(z)) / (p * p * p);
  }
}

}  // namespace pwave::oracle
