#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "pwave/errors.hpp"
#include "pwave/oracles.hpp"
#include "pwave/torus.hpp"

using namespace pwave;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t brute_count(int dim, double radius_sq) {
  const int r = static_cast<int>(std::ceil(std::sqrt(radius_sq)));
  std::size_t n = 0;
  for (int x = -r; x <= r; ++x)
    for (int y = (dim > 1 ? -r : 0); y <= (dim > 1 ? r : 0); ++y)
      for (int z = (dim > 2 ? -r : 0); z <= (dim > 2 ? r : 0); ++z)
        if (x * x + y * y + z * z <= radius_sq + 1e-9) ++n;
  return n;
}

}  // namespace

TEST(Torus, SmallBalls) {
  auto b = fermi_ball({3, kTwoPi}, 1.0);
  EXPECT_EQ(b.N, 7u);
  EXPECT_DOUBLE_EQ(b.E_F, 6.0);
  EXPECT_EQ(fermi_ball({3, kTwoPi}, 1.5).N, 19u);
  b = fermi_ball({1, kTwoPi}, 2.5);
  EXPECT_EQ(b.N, 5u);
  EXPECT_DOUBLE_EQ(b.E_F, 10.0);
  EXPECT_EQ(b.momenta.front()[0], -2);
  EXPECT_EQ(b.momenta.back()[0], 2);
}

TEST(Torus, CountsMatchBruteForce) {
  for (int d = 1; d <= 3; ++d)
    for (double kf : {1.0, 2.3, 4.0, 5.7}) EXPECT_EQ(fermi_ball({d, kTwoPi}, kf).N, brute_count(d, kf * kf));
}

TEST(Torus, SymmetricAndInvariantBelowGap) {
  const auto b = fermi_ball({3, kTwoPi}, 3.2);
  EXPECT_EQ(b.N, fermi_ball({3, kTwoPi}, 3.2 + 1e-6).N);
  for (const auto& n : b.momenta) {
    bool found = false;
    for (const auto& m : b.momenta) found |= (m[0] == -n[0] && m[1] == -n[1] && m[2] == -n[2]);
    EXPECT_TRUE(found);
  }
}

TEST(Torus, Overflow) {
  try {
    fermi_ball({3, 1.0}, 1e5, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Overflow);
  }
}

TEST(Torus, DensityRelation) {
  for (int K : {1, 4, 9}) {
    const auto rel = kf_density_relation(fermi_ball({1, kTwoPi}, K + 0.5));
    EXPECT_NEAR(rel.delta1, 0.0, 1e-14);
  }
  double prev = 1.0;
  for (double kfl : {20.0, 40.0, 80.0}) {
    const auto b = fermi_ball({3, 1.0}, kfl);
    const auto rel = kf_density_relation(b);
    EXPECT_LT(std::abs(rel.delta1), 5.0 * std::pow(static_cast<double>(b.N), -1.0 / 3.0));
    EXPECT_LT(std::abs(rel.delta2), prev);
    prev = std::abs(rel.delta2);
  }
}

TEST(Torus, BracketExamples) {
  auto b = bracket_particle_number({3, kTwoPi}, 10);
  EXPECT_DOUBLE_EQ(b.k_F_lo, 1.0);
  EXPECT_EQ(b.N_lo, 7u);
  EXPECT_DOUBLE_EQ(b.k_F_hi, std::sqrt(2.0));
  EXPECT_EQ(b.N_hi, 19u);
  b = bracket_particle_number({3, kTwoPi}, 7);
  EXPECT_EQ(b.N_lo, 7u);
  EXPECT_EQ(b.N_hi, 7u);
  EXPECT_DOUBLE_EQ(b.k_F_lo, b.k_F_hi);
  b = bracket_particle_number({1, kTwoPi}, 4);
  EXPECT_EQ(b.N_lo, 3u);
  EXPECT_EQ(b.N_hi, 5u);
}

TEST(Torus, BracketSandwichRandom) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> dist(1, 20000);
  for (int i = 0; i < 30; ++i) {
    const std::size_t n = dist(rng);
    const auto b = bracket_particle_number({3, kTwoPi}, n);
    EXPECT_LE(b.N_lo, n);
    EXPECT_GE(b.N_hi, n);
    EXPECT_EQ(brute_count(3, b.k_F_lo * b.k_F_lo), b.N_lo);
    EXPECT_EQ(brute_count(3, b.k_F_hi * b.k_F_hi), b.N_hi);
    if (b.N_lo != b.N_hi) {
      // no closed shell strictly between
      EXPECT_EQ(brute_count(3, b.k_F_hi * b.k_F_hi - 0.5), b.N_lo);
    }
  }
}

TEST(Torus, PairDensityBasics) {
  const KernelTable kt(fermi_ball({3, 1.0}, 20.0));
  EXPECT_EQ(pair_density(kt, 0.0), 0.0);
  for (double r : {1e-4, 0.01, 0.05, 0.2, 0.45}) {
    EXPECT_GE(kt.pair_density_axis(r), 0.0);
    EXPECT_GE(kt.pair_density_spherical(r), 0.0);
    const double v = kt.v(r);
    EXPECT_NEAR(kt.pair_density_axis(r), kt.v0() * kt.v0() - v * v, 1e-9 * kt.v0() * kt.v0());
  }
  // direct sum for v along an axis
  const auto& b = kt.ball();
  double direct = 0.0;
  const double r = 0.037;
  for (const auto& n : b.momenta) direct += std::cos(kTwoPi * n[0] * r);
  EXPECT_NEAR(kt.v(r), direct, 1e-10 * std::abs(direct));
}

TEST(Torus, ContinuumPairDensityCoefficient) {
  const double kf = 2.0;
  const double r = 1e-4;
  const double expected = std::pow(kf, 8) / (5.0 * std::pow(6.0 * std::numbers::pi * std::numbers::pi, 2));
  EXPECT_NEAR(continuum_pair_density(3, kf, r) / (r * r), expected, 1e-6 * expected);
}

TEST(Torus, FreeExpectationMatchesMomentumSum) {
  // 1/(2L^d) Σ_{k,k'} [W^(0) - W^(k - k')] with the closed-form transform of a step.
  for (int d = 1; d <= 3; ++d) {
    const TorusSpec spec{d, kTwoPi};
    const auto ball = fermi_ball(spec, 2.2);
    const KernelTable kt(ball);
    const double v0 = 7.0, r0 = 0.8;
    const double bp[] = {0.0, r0};
    const double kernel = free_state_expectation(kt, [&](double x) { return x < r0 ? v0 : 0.0; }, bp);
    double sum = 0.0;
    for (const auto& n : ball.momenta)
      for (const auto& m : ball.momenta) {
        double p2 = 0.0;
        for (int c = 0; c < d; ++c) p2 += double(n[c] - m[c]) * double(n[c] - m[c]);
        sum += oracle::soft_sphere_fourier(d, v0, r0, 0.0) - oracle::soft_sphere_fourier(d, v0, r0, std::sqrt(p2));
      }
    sum /= 2.0 * spec.volume();
    EXPECT_NEAR(kernel, sum, 1e-8 * std::abs(sum)) << "d=" << d;
  }
}

TEST(Torus, RadialFourierOfStep) {
  for (int d = 1; d <= 3; ++d) {
    const double bp[] = {0.0, 0.6};
    for (double p : {0.0, 1.0, 3.5}) {
      const double num = radial_fourier(d, [](double) { return 2.0; }, p, bp);
      EXPECT_NEAR(num, oracle::soft_sphere_fourier(d, 2.0, 0.6, p), 1e-11);
    }
  }
}
