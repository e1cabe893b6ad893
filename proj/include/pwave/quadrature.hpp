#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pwave::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rules are computed once per order and cached; the returned reference stays valid.
const GaussLegendreRule& gauss_legendre(int order);

/// Composite rule: `panels` equal panels of the given order on [a, b].
double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels, int order);

struct Options {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int order = 20;
  int max_level = 14;  // at most 2^max_level panels per interval
};

/// Integrates f over the union of consecutive intervals [bp[i], bp[i+1]].
/// Each interval is refined dyadically until two successive panel counts agree
/// to tolerance; throws QuadratureFailure otherwise. Breakpoints must be sorted.
double integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 const Options& opts = {});

inline double integrate(const std::function<double(double)>& f, double a, double b, const Options& opts = {}) {
  const double bp[2] = {a, b};
  return integrate(f, bp, opts);
}

/// Gauss-Legendre nodes and weights mapped onto [a, b].
GaussLegendreRule mapped_rule(int order, double a, double b);

}  // namespace pwave::quad
