#include "adamsq/special.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace adamsq {

namespace {
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
// Boost's error estimates carry an absolute floor, so integrals over very short
// intervals are taken on [0, 1] and rescaled.
struct UnitMap {
  const std::function<double(double)>& f;
  double a, len;
  double operator()(double u) const { return f(a + len * u); }
};
}  // namespace

double gamma_fn(double x) {
  if (!std::isfinite(x)) throw std::domain_error("gamma_fn: non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) throw std::domain_error("gamma_fn: pole at non-positive integer");
  if (x < 0.5) {
    return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
  }
  // Integer arguments are returned exactly.
  if (x == std::floor(x) && x <= 30.0) {
    double r = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) r *= k;
    return r;
  }
  const double z = x - 1.0;
  double a = kLanczosCoef[0];
  for (int i = 1; i < 9; ++i) a += kLanczosCoef[i] / (z + i);
  const double t = z + kLanczosG + 0.5;
  // t^(z+1/2) e^{-t} split in two halves to postpone overflow.
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * a;
}

double sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * n) / gamma_fn(0.5 * n);
}

double ball_volume(int n) { return sphere_area(n) / n; }

double hyp2f1_minus_one(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 0.0;
  for (int k = 0; k < 2000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
    if (term == 0.0 || std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
  }
  throw std::runtime_error("hyp2f1_minus_one: series did not converge");
}

double pairwise_sum(const double* v, std::size_t count) {
  if (count <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += v[i];
    return s;
  }
  const std::size_t h = count / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, count - h);
}

double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                   double rel_tol) {
  if (!(b > a)) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  double error = 0.0;
  double l1 = 0.0;
  const double len = b - a;
  const double value = len * integrator.integrate(UnitMap{f, a, len}, 0.0, 1.0, rel_tol, &error, &l1);
  error *= len;
  l1 *= len;
  if (!std::isfinite(value) || error > std::max(1e5 * rel_tol * l1, 1e-300)) {
    std::ostringstream msg;
    msg << "quadrature tolerance not reached: estimate " << value << ", error " << error;
    throw std::runtime_error(msg.str());
  }
  return value;
}

double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                   double& error, double& l1) {
  if (!(b > a)) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  double e = 0.0, m = 0.0;
  const double len = b - a;
  const double value = len * integrator.integrate(UnitMap{f, a, len}, 0.0, 1.0, rel_tol, &e, &m);
  error += len * e;
  l1 += len * m;
  return value;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                          unsigned max_depth) {
  if (!(b > a)) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  const double len = b - a;
  const double value = len * boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                                 UnitMap{f, a, len}, 0.0, 1.0, max_depth, rel_tol, &error, &l1);
  error *= len;
  l1 *= len;
  if (!std::isfinite(value) || error > std::max(1e5 * rel_tol * l1, 1e-300)) {
    std::ostringstream msg;
    msg << "quadrature tolerance not reached: estimate " << value << ", error " << error;
    throw std::runtime_error(msg.str());
  }
  return value;
}

const GaussRule& gauss_legendre(int points) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(points);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  for (int i = 0; i < points; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (points + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        double q0 = 1.0, q1 = x;
        for (int k = 2; k <= points; ++k) {
          const double q2 = ((2.0 * k - 1.0) * x * q1 - (k - 1.0) * q0) / k;
          q0 = q1;
          q1 = q2;
        }
        const double d = points * (x * q1 - q0) / (x * x - 1.0);
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * d * d);
        break;
      }
    }
  }
  return cache.emplace(points, std::move(rule)).first->second;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 paired samples");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    const double se = std::sqrt(rss / (m - 2.0) / sxx);
    boost::math::students_t dist(m - 2.0);
    fit.slope_half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
  }
  return fit;
}

}  // namespace adamsq
