#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace adamsq {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Gamma function from a Lanczos approximation (g = 7, nine terms) with
/// reflection below 1/2. Throws std::domain_error at the poles.
double gamma_fn(double x);

/// Surface measure of the unit sphere S^{n-1} in R^n.
double sphere_area(int n);

/// Lebesgue measure of the unit ball in R^n.
double ball_volume(int n);

/// Sum_{k>=1} (a)_k (b)_k / ((c)_k k!) z^k, i.e. 2F1(a,b;c;z) - 1.
/// Intended for |z| <= 0.6 where the series converges geometrically.
double hyp2f1_minus_one(double a, double b, double c, double z);

/// Neumaier-compensated accumulator.
class KahanSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Deterministic pairwise sum.
double pairwise_sum(const double* v, std::size_t count);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

/// Integral of a smooth-or-endpoint-singular function on a finite interval
/// (double-exponential rule). Throws std::runtime_error when the requested
/// tolerance is not reached; the message carries the achieved estimate.
double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                   double rel_tol = 1e-13);
/// Non-throwing form: adds the error estimate and the L1 norm to the outputs,
/// for callers that judge the accuracy of a sum of pieces.
double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                   double& error, double& l1);

/// Adaptive Gauss-Kronrod (15 point) on [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, unsigned max_depth = 25);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int points);

/// Least-squares line fit y = a + b x with the 95% half-width of the slope.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_half_width = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace adamsq
