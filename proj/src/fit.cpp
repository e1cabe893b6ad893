#include "pwave/fit.hpp"

#include <algorithm>
#include <cmath>

#include "pwave/errors.hpp"

namespace pwave {

LinearFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorCode::InsufficientSamples, "fit", "need at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InsufficientSamples, "fit", "abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

namespace {

void check_samples(std::span<const ScalingSample> samples, double min_decades) {
  if (samples.size() < 4) throw Error(ErrorCode::InsufficientSamples, "fit", "need at least 4 samples");
  double lo = samples.front().x;
  double hi = lo;
  for (const auto& s : samples) {
    if (!(s.x > 0.0) || !(s.y > 0.0))
      throw Error(ErrorCode::InsufficientSamples, "fit", "samples must be strictly positive");
    lo = std::min(lo, s.x);
    hi = std::max(hi, s.x);
  }
  if (std::log10(hi / lo) < min_decades - 1e-12)
    throw Error(ErrorCode::InsufficientSamples, "fit", "samples span fewer decades than required");
}

}  // namespace

LinearFit log_log_fit(std::span<const ScalingSample> samples, double min_decades) {
  check_samples(samples, min_decades);
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& s : samples) {
    lx.push_back(std::log(s.x));
    ly.push_back(std::log(s.y));
  }
  return least_squares_line(lx, ly);
}

ScalingFit norm_scaling_fit(std::span<const ScalingSample> samples) {
  check_samples(samples, 1.5);
  std::vector<double> lx;
  std::vector<double> ly;
  std::vector<double> ly_log;
  for (const auto& s : samples) {
    const double l = std::log(s.x);
    if (l == 0.0) throw Error(ErrorCode::InsufficientSamples, "fit", "x = 1 is not admissible for the log model");
    lx.push_back(l);
    ly.push_back(std::log(s.y));
    ly_log.push_back(std::log(s.y) - std::log(std::abs(l)));
  }
  const LinearFit power = least_squares_line(lx, ly);
  const LinearFit with_log = least_squares_line(lx, ly_log);
  ScalingFit fit;
  fit.power_exponent = power.slope;
  fit.power_residual = power.rms_residual;
  fit.log_exponent = with_log.slope;
  fit.log_residual = with_log.rms_residual;
  fit.log_preferred = with_log.rms_residual < power.rms_residual;
  fit.exponent = fit.log_preferred ? fit.log_exponent : fit.power_exponent;
  return fit;
}

}  // namespace pwave
