#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "pwave/errors.hpp"
#include "pwave/fit.hpp"
#include "pwave/quadrature.hpp"
#include "pwave/smoothstep.hpp"

using namespace pwave;

TEST(Quadrature, GaussLegendreIntegratesPolynomialsExactly) {
  const auto& rule = quad::gauss_legendre(10);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], 18);
  EXPECT_NEAR(sum, 2.0 / 19.0, 1e-15);
}

TEST(Quadrature, AdaptiveHandlesKinkAtBreakpoint) {
  const double bp[] = {0.0, 0.3, 1.0};
  const double v = quad::integrate([](double x) { return std::abs(x - 0.3); }, bp, {1e-13});
  EXPECT_NEAR(v, 0.5 * (0.09 + 0.49), 1e-13);
}

TEST(Quadrature, MappedRuleIntegratesSine) {
  const auto r = quad::mapped_rule(20, 0.0, std::numbers::pi);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * std::sin(r.nodes[i]);
  EXPECT_NEAR(sum, 2.0, 1e-14);
}

TEST(Fit, PurePowerLaw) {
  std::vector<ScalingSample> s;
  for (double x : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) s.push_back({x, 1.0 / x});
  const ScalingFit f = norm_scaling_fit(s);
  EXPECT_NEAR(f.exponent, -1.0, 1e-10);
  EXPECT_FALSE(f.log_preferred);
}

TEST(Fit, PureLog) {
  std::vector<ScalingSample> s;
  for (double x : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) s.push_back({x, std::abs(std::log(x))});
  const ScalingFit f = norm_scaling_fit(s);
  EXPECT_TRUE(f.log_preferred);
  EXPECT_NEAR(f.exponent, 0.0, 1e-10);
}

TEST(Fit, TooFewSamples) {
  std::vector<ScalingSample> s{{1e-3, 1.0}, {1e-2, 2.0}, {1e-1, 3.0}};
  try {
    norm_scaling_fit(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientSamples);
  }
}

TEST(Smoothstep, EndpointsAndDerivatives) {
  EXPECT_EQ(cutoff_chi(0.5).value, 1.0);
  EXPECT_EQ(cutoff_chi(1.0).value, 1.0);
  EXPECT_EQ(cutoff_chi(2.0).value, 0.0);
  EXPECT_EQ(cutoff_chi(3.0).value, 0.0);
  const double h = 1e-5;
  for (double t : {1.1, 1.37, 1.5, 1.8}) {
    const auto c = cutoff_chi(t);
    EXPECT_GE(c.value, 0.0);
    EXPECT_LE(c.value, 1.0);
    EXPECT_NEAR(c.d1, (cutoff_chi(t + h).value - cutoff_chi(t - h).value) / (2 * h), 1e-8);
    EXPECT_NEAR(c.d2, (cutoff_chi(t + h).d1 - cutoff_chi(t - h).d1) / (2 * h), 1e-7);
  }
  EXPECT_EQ(regulator_profile(2.0), 0.0);
  EXPECT_EQ(regulator_profile(3.0), 1.0);
}
