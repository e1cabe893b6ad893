#pragma once

namespace pwave {

/// Value and first two derivatives of a scalar profile.
struct Jet2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Quintic smoothstep S(u) = 10u^3 - 15u^4 + 6u^5, clamped to [0, 1] outside
/// the unit interval. C^2 with S'(0) = S'(1) = S''(0) = S''(1) = 0.
constexpr Jet2 smoothstep5(double u) {
  if (u <= 0.0) return {0.0, 0.0, 0.0};
  if (u >= 1.0) return {1.0, 0.0, 0.0};
  const double u2 = u * u;
  const double u3 = u2 * u;
  return {
      u3 * (10.0 - 15.0 * u + 6.0 * u2),
      30.0 * u2 * (1.0 - 2.0 * u + u2),
      60.0 * u * (1.0 - 3.0 * u + 2.0 * u2),
  };
}

/// Radial cutoff: 1 on [0, 1], 0 on [2, inf), quintic transition in between.
constexpr Jet2 cutoff_chi(double t) {
  const Jet2 s = smoothstep5(t - 1.0);
  return {1.0 - s.value, -s.d1, -s.d2};
}

/// Momentum regulator profile as a function of |k|/k_F: 0 up to 2, 1 from 3 on.
constexpr double regulator_profile(double k_over_kf) { return smoothstep5(k_over_kf - 2.0).value; }

}  // namespace pwave
