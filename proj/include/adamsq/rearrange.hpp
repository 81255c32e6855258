#pragma once

#include "adamsq/field.hpp"
#include "adamsq/kernel.hpp"

#include <algorithm>
#include <vector>

namespace adamsq {

/// Nonincreasing rearrangement of |f| for piecewise-constant data.
///
/// The exact step form is kept (levels in decreasing order with their
/// cumulative measures) so integrals of f* are exact; star/double_star are
/// samples on t_grid.
struct DecreasingProfile {
  std::vector<double> t_grid;
  std::vector<double> star;
  std::vector<double> double_star;

  std::vector<double> levels;      // distinct |f| values > 0, decreasing
  std::vector<double> cumulative;  // measure of {|f| >= levels[k]}

  double star_at(double t) const;
  double double_star_at(double t) const;
  /// Integral of (f*)^p over (0, infinity).
  double integral_power(double p) const;
  /// Integral of w(s) f*(s) over (t, infinity) given the antiderivative W of w.
  template <class Antiderivative>
  double weighted_tail(double t, Antiderivative W) const;
  double support_measure() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

/// Geometric grid of 512 points on [1e-4 m, 10 m].
std::vector<double> default_t_grid(double m, int points = 512);

/// Distribution function mu(s) = |{|f| > s}|.
double distribution_function(const SampledFunction& f, double s);

DecreasingProfile decreasing_rearrangement(const SampledFunction& f, const std::vector<double>& t_grid = {});

/// K* and K** for a scalar kernel. Homogeneous kernels use the closed form
/// K*(t) = (A/t)^{1-alpha/n}; radial ones are rearranged from a fine shell
/// sample over [1e-12, 1e12].
struct KernelRearrangement {
  bool closed_form = false;
  double A = 0.0;  // A_g for the closed form
  int n = 2;
  double alpha = 1.0;
  DecreasingProfile sampled;

  double star(double t) const;
  double double_star(double t) const;
  /// Integral over (t, infinity) of K*(s) f*(s) ds.
  double tail_against(const DecreasingProfile& f, double t) const;
};
KernelRearrangement kernel_rearrangement(const KernelSpec& k);

struct OneilReport {
  std::vector<double> t;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> margin;
  bool pass = true;
  double worst_relative_margin = 0.0;
};

/// (Tf)**(t) against t K**(t) f**(t) + int_t^inf K* f* for radial f.
OneilReport oneil_check(const KernelSpec& k, const SampledFunction& f, const std::vector<double>& t_grid);

template <class Antiderivative>
double DecreasingProfile::weighted_tail(double t, Antiderivative W) const {
  double sum = 0.0, lo = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double hi = cumulative[k];
    const double a = std::max(lo, t);
    if (hi > a) sum += levels[k] * (W(hi) - W(a));
    lo = hi;
  }
  return sum;
}

}  // namespace adamsq
