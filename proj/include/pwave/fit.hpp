#pragma once

#include <span>
#include <vector>

namespace pwave {

/// Ordinary least squares for y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

LinearFit least_squares_line(std::span<const double> x, std::span<const double> y);

/// One point of a scaling sweep; `x` is the dimensionless parameter (a k_F),
/// `y` the measured quantity (must be positive).
struct ScalingSample {
  double x = 0.0;
  double y = 0.0;
};

/// Result of comparing a pure power law y ~ x^s against y ~ x^s |log x|.
/// `exponent` is the slope of whichever model fits better.
struct ScalingFit {
  double exponent = 0.0;
  bool log_preferred = false;
  double power_exponent = 0.0;
  double power_residual = 0.0;
  double log_exponent = 0.0;
  double log_residual = 0.0;
};

/// Requires at least 4 samples spanning at least 1.5 decades of x.
ScalingFit norm_scaling_fit(std::span<const ScalingSample> samples);

/// Slope of log y against log x, no model comparison. Same sample requirements
/// as norm_scaling_fit except the decade span (`min_decades` may be lowered).
LinearFit log_log_fit(std::span<const ScalingSample> samples, double min_decades = 0.0);

}  // namespace pwave
