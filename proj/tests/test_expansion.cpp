#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pwave/errors.hpp"
#include "pwave/expansion.hpp"

using namespace pwave;

namespace {

double term(const EnergyBreakdown& b, const std::string& label) {
  for (const auto& t : b.terms)
    if (t.label == label) return t.value;
  return NAN;
}

}  // namespace

TEST(Expansion, FreeGas) {
  EXPECT_DOUBLE_EQ(energy_expansion(3, 0.0, 1.0, 100).total, 0.6);
  EXPECT_DOUBLE_EQ(energy_expansion(2, 0.0, 1.0, 100).total, 0.5);
  EXPECT_DOUBLE_EQ(energy_expansion(1, 0.0, 1.0, 100).total, 1.0 / 3.0);
}

TEST(Expansion, OneDimensional) {
  const auto b = energy_expansion(1, 0.1, 1.0, 100);
  EXPECT_NEAR(term(b, "p-wave"), 0.0212207, 1e-7);
  EXPECT_NEAR(b.total, 0.3545540, 1e-7);
}

TEST(Expansion, SecondOrderCoefficient) {
  EXPECT_NEAR(second_order_coefficient(), 1.8030e-2, 1e-6);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  EXPECT_DOUBLE_EQ(second_order_coefficient(), (2066.0 - 312.0 * std::log(2.0)) / (10395.0 * pi2));
}

TEST(Expansion, EffectiveRangeTerm) {
  const auto without = energy_expansion(3, 0.05, 1.0, 1000);
  EXPECT_TRUE(std::isnan(term(without, "effective-range")));
  EXPECT_FALSE(without.warnings.empty());
  const auto with = energy_expansion(3, 0.05, 1.0, 1000, 0.5);
  EXPECT_NEAR(term(with, "effective-range"), -std::pow(0.05, 6) / (35 * std::numbers::pi * 0.5), 1e-18);
}

TEST(Expansion, PositiveInteractionTerm) {
  for (int d = 1; d <= 3; ++d) EXPECT_GT(term(energy_expansion(d, 0.03, 1.0, 100), "p-wave"), 0.0);
}

TEST(Expansion, Homogeneous) {
  for (int d = 1; d <= 3; ++d) {
    const auto b1 = energy_expansion(d, 0.02, 1.0, 500);
    const auto b2 = energy_expansion(d, 0.06, 1.0 / 3.0, 500);
    ASSERT_EQ(b1.terms.size(), b2.terms.size());
    for (std::size_t i = 0; i < b1.terms.size(); ++i) EXPECT_NEAR(b1.terms[i].value, b2.terms[i].value, 1e-15);
  }
}

TEST(Bracket, ZeroConstantsCollapse) {
  const auto b = bound_bracket(3, 0.05, 1.0, 1000, {0.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(b.lower, b.upper);
  EXPECT_DOUBLE_EQ(b.lower, 0.6 + 2.0 / (5.0 * std::numbers::pi) * std::pow(0.05, 3));
}

TEST(Bracket, LowerEnvelopeShape) {
  const auto b = bound_bracket(3, 0.05, 1.0, 1000, {1.0, 0.0, 0.0});
  const double shape = std::pow(0.05, 3.3) * std::abs(std::log(0.05));
  EXPECT_NEAR(b.error_low, shape, 1e-18);
  EXPECT_NEAR(b.error_low, 1.5244e-4, 1e-8);
  EXPECT_NEAR(b.leading - b.lower, shape, 1e-15);
}

TEST(Bracket, ContainsExpansionAndOrdered) {
  for (int d : {2, 3})
    for (double akf : {1e-3, 1e-2, 0.05, 0.1}) {
      const auto b = bound_bracket(d, akf, 1.0, 1000, {1.0, 1.0, 1.0});
      const auto e = energy_expansion(d, akf, 1.0, 1000);
      EXPECT_LE(b.lower, b.upper);
      EXPECT_LE(b.lower, e.terms[0].value + e.terms[1].value);
      EXPECT_GE(b.upper, e.terms[0].value + e.terms[1].value);
    }
}

TEST(Bracket, UnsupportedInOneDimension) {
  try {
    bound_bracket(1, 0.05, 1.0, 100, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedDim);
  }
}

TEST(Spinful, Examples) {
  const double L = 3.0;
  const auto one = spinful_energy({{40}, 0.1, L});
  EXPECT_EQ(one.interaction, 0.0);
  const auto free = spinful_energy({{40, 40}, 0.0, L});
  EXPECT_EQ(free.interaction, 0.0);
  EXPECT_DOUBLE_EQ(free.free, 2.0 * one.free);
  const auto two = spinful_energy({{40, 40}, 0.1, L});
  EXPECT_NEAR(two.interaction, 2.0 * std::numbers::pi * 0.1 * 80.0 * 80.0 / (L * L * L), 1e-12);
  try {
    spinful_energy({{4}, 0.1, L, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedDim);
  }
}

TEST(Scaling, SyntheticCubic) {
  std::vector<ScalingSample> s;
  for (double x : {1e-3, 1e-2, 0.1, 0.5}) s.push_back({x, x * x * x});
  const auto rows = scaling_table({{"cubic", s}});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].exponent, 3.0, 1e-12);
  s.pop_back();
  EXPECT_THROW(scaling_table({{"short", s}}), Error);
}
