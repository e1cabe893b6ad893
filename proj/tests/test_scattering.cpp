#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "pwave/errors.hpp"
#include "pwave/fit.hpp"
#include "pwave/oracles.hpp"
#include "pwave/scattering.hpp"

using namespace pwave;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

}  // namespace

TEST(Oracle, ElementaryAndBesselFormsAgree) {
  for (double v0 : {1.0, 10.0, 100.0, 1000.0})
    EXPECT_LT(rel(oracle::soft_sphere_a_pow_d(3, v0, 1.0), oracle::soft_sphere_a3_elementary(v0, 1.0)), 1e-13);
}

TEST(Scattering, ZeroPotential) {
  for (int d = 1; d <= 3; ++d) {
    const auto sol = solve_scattering(RadialPotential::soft_sphere(d, 0.0, 1.0));
    EXPECT_EQ(sol.a, 0.0);
    EXPECT_EQ(sol.phi0(0.5), 0.0);
    EXPECT_EQ(sol.phi0(3.0), 0.0);
  }
  const auto sol = solve_scattering(RadialPotential::soft_sphere(3, 0.0, 1.0));
  EXPECT_EQ(scattering_length_integral(sol, sol.potential), 0.0);
}

TEST(Scattering, SoftSphereMatchesBesselOracle) {
  for (int d = 1; d <= 3; ++d)
    for (double v0 : {1.0, 10.0, 100.0, 1000.0}) {
      const auto sol = solve_scattering(RadialPotential::soft_sphere(d, v0, 1.0));
      EXPECT_LT(rel(sol.a, oracle::soft_sphere_a(d, v0, 1.0)), 1e-8) << "d=" << d << " V0=" << v0;
    }
}

TEST(Scattering, InteriorProfileMatchesOracle) {
  const auto sol = solve_scattering(RadialPotential::soft_sphere(3, 50.0, 1.0));
  for (double r : {0.1, 0.5, 0.9}) EXPECT_LT(rel(sol.psi_at(r), oracle::soft_sphere_psi(3, 50.0, r)), 1e-8);
}

TEST(Scattering, IntegralRouteAgrees) {
  for (double v0 : {10.0, 1e4}) {
    const auto sol = solve_scattering(RadialPotential::soft_sphere(3, v0, 1.0));
    EXPECT_LT(rel(scattering_length_integral(sol, sol.potential), sol.a), 1e-6);
  }
  const auto g = solve_scattering(RadialPotential::truncated_gaussian(3, 30.0, 0.4, 1.2));
  EXPECT_LT(rel(scattering_length_integral(g, g.potential), g.a), 1e-6);
}

TEST(Scattering, HardSphereLimitIsMonotone) {
  double prev = 0.0;
  for (double v0 : {1e2, 1e3, 1e4}) {
    const double a = solve_scattering(RadialPotential::soft_sphere(3, v0, 1.0)).a;
    EXPECT_GT(a, prev);
    EXPECT_LT(a, 1.0);
    prev = a;
  }
  EXPECT_LT(std::abs(prev - 1.0), 0.1);
}

TEST(Scattering, ExteriorFitIndependentOfRadius) {
  const auto sol = solve_scattering(RadialPotential::soft_sphere(2, 10.0, 1.0), 1e-10, 2.0);
  const std::size_t i1 = sol.range_node();
  std::size_t i2 = i1;
  while (sol.grid[i2] < 1.5) ++i2;
  const auto f1 = sol.exterior_fit_at(i1);
  const auto f2 = sol.exterior_fit_at(i2);
  EXPECT_LT(rel(f1.a_pow_d(), f2.a_pow_d()), 1e-8);
}

TEST(Scattering, Errors) {
  EXPECT_EQ(code_of([] { solve_scattering(RadialPotential::soft_sphere(3, -1.0, 1.0)); }), ErrorCode::NonRepulsive);
  const auto sol2 = solve_scattering(RadialPotential::soft_sphere(2, 10.0, 1.0));
  EXPECT_EQ(code_of([&] { scattering_length_integral(sol2, sol2.potential); }), ErrorCode::DimensionUnsupported);
  const auto sol3 = solve_scattering(RadialPotential::soft_sphere(3, 10.0, 1.0));
  EXPECT_EQ(code_of([&] { cutoff_phi(sol3, 1.5); }), ErrorCode::CutoffInsideCore);
}

TEST(Scattering, EnvelopeHoldsForTestFamily) {
  std::vector<RadialPotential> family;
  for (double v0 : {1.0, 10.0, 100.0, 1000.0}) family.push_back(RadialPotential::soft_sphere(3, v0, 1.0));
  family.push_back(RadialPotential::truncated_gaussian(3, 50.0, 0.3, 1.0));
  family.push_back(RadialPotential::tabulated(3, {0.0, 0.4, 0.8, 1.2}, {80.0, 40.0, 10.0, 0.0}));
  for (const auto& v : family) {
    const auto env = check_envelope(solve_scattering(v));
    EXPECT_EQ(env.monotonicity_violations + env.lower_violations + env.upper_violations, 0u);
  }
}

TEST(Scattering, CutoffProfile) {
  const auto sol = solve_scattering(RadialPotential::soft_sphere(3, 10.0, 1.0));
  const CutoffScattering cs(sol, 0.1);
  for (double r : {0.5, 2.0, 9.9}) {
    EXPECT_EQ(cs.phi(r), sol.phi0(r));
    EXPECT_NEAR(cs.residual(r), 0.0, 1e-9);
  }
  EXPECT_EQ(cs.phi(20.0), 0.0);
  EXPECT_EQ(cs.phi(25.0), 0.0);
  // finite-difference check of the closed-form residual in the annulus
  const double h = 1e-4;
  for (double r : {12.0, 15.0, 18.0}) {
    const double d1 = (cs.phi(r + h) - cs.phi(r - h)) / (2 * h);
    const double d2 = (cs.phi(r + h) - 2 * cs.phi(r) + cs.phi(r - h)) / (h * h);
    EXPECT_NEAR(cs.residual(r), r * d2 + 4.0 * d1, 1e-8 * std::abs(sol.a_pow_d));
  }
}

TEST(Scattering, NormsScaleWithKf) {
  const auto sol = solve_scattering(RadialPotential::soft_sphere(3, 10.0, 1.0));
  const auto n1 = phi_norms(cutoff_phi(sol, 0.02));
  const auto n2 = phi_norms(cutoff_phi(sol, 0.01));
  EXPECT_NEAR(n2.l1_r1 / n1.l1_r1, 2.0, 0.05);
  std::vector<ScalingSample> s;
  for (double akf : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) s.push_back({akf, phi_norms(cutoff_phi(sol, akf / sol.a)).l1_r2});
  EXPECT_NEAR(log_log_fit(s).slope, -2.0, 0.05);
  const auto z = phi_norms(cutoff_phi(solve_scattering(RadialPotential::soft_sphere(3, 0.0, 1.0)), 0.1));
  EXPECT_EQ(z.l1_r1, 0.0);
  EXPECT_EQ(z.l1_grad2, 0.0);
  EXPECT_EQ(z.l2_grad1, 0.0);
}
