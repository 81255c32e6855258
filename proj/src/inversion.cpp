#include "adamsq/inversion.hpp"

#include "adamsq/kernel.hpp"
#include "adamsq/special.hpp"

#include <boost/math/special_functions/zeta.hpp>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace adamsq {

double fractional_tail_coefficient(double alpha) {
  return std::pow(2.0, alpha) * gamma_fn(0.5 * (1.0 + alpha)) / (std::sqrt(kPi) * std::abs(gamma_fn(-0.5 * alpha)));
}

namespace {

// Applies the multiplier m(xi) to a real even signal stored with y = 0 at
// index 0 (wrap-around order).
std::vector<double> apply_multiplier(const std::vector<double>& g, double dx, double (*m)(double, double),
                                     double alpha) {
  const int N = static_cast<int>(g.size());
  std::vector<double> in(g);
  std::vector<std::complex<double>> spectrum(N / 2 + 1);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(N, in.data(), reinterpret_cast<fftw_complex*>(spectrum.data()), FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);
  for (int k = 0; k <= N / 2; ++k) spectrum[k] *= m(k / (N * dx), alpha) / N;
  std::vector<double> out(N);
  fftw_plan bwd = fftw_plan_dft_c2r_1d(N, reinterpret_cast<fftw_complex*>(spectrum.data()), out.data(), FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);
  return out;
}

double frac_symbol(double xi, double alpha) { return std::pow(2.0 * kPi * xi, alpha); }
double frac_symbol_dd(double xi, double alpha) {
  const double w = 2.0 * kPi * xi;
  return -w * w * std::pow(w, alpha);
}

}  // namespace

InversionResult fractional_inversion(double alpha, int log2_points, double dx, double x_max) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("fractional_inversion: alpha must lie in (0, 1)");
  if (log2_points < 8 || log2_points > 24) throw std::invalid_argument("fractional_inversion: grid size out of range");
  const int N = 1 << log2_points;
  std::vector<double> g(N);
  for (int j = 0; j < N; ++j) {
    const double y = (j < N / 2 ? j : j - N) * dx;
    g[j] = std::exp(-kPi * y * y);
  }
  const auto h = apply_multiplier(g, dx, frac_symbol, alpha);
  const auto hdd = apply_multiplier(g, dx, frac_symbol_dd, alpha);

  // Corrected trapezoid rule for |t|^beta times a smooth factor on a grid
  // through the singular point; the even terms of the generalized
  // Euler-Maclaurin expansion are kept up to second order.
  const double beta = alpha - 1.0;
  const double corr0 = -2.0 * boost::math::zeta(-beta) * std::pow(dx, beta + 1.0);
  const double corr2 = -2.0 * boost::math::zeta(-beta - 2.0) * std::pow(dx, beta + 3.0) / 2.0;
  std::vector<double> power(N);
  for (int m = 1; m < N; ++m) power[m] = std::pow(m * dx, beta);

  // Beyond the grid the symbol's far-field law takes over.
  const double C = fractional_tail_coefficient(alpha);
  const double Y = (N / 2 - 0.5) * dx;

  const double c_alpha = constant_c_alpha(1, alpha);
  const int imax = static_cast<int>(std::floor(x_max / dx + 1e-9));
  InversionResult res;
  res.alpha = alpha;
  for (int i = -imax; i <= imax; ++i) {
    const double x = i * dx;
    // Sum over the grid in centred order, j = -N/2 .. N/2-1.
    std::vector<double> terms;
    terms.reserve(N);
    for (int j = -N / 2; j < N / 2; ++j) {
      if (j == i) continue;
      const int idx = j < 0 ? j + N : j;
      terms.push_back(power[std::abs(j - i)] * h[idx]);
    }
    const int self = i < 0 ? i + N : i;
    double integral = dx * pairwise_sum(terms) + corr0 * h[self] + corr2 * hdd[self];
    integral += -C * integrate_adaptive(
                         [&](double s) {
                           if (s <= 0.0) return 0.0;
                           const double y = Y / s;
                           return (std::pow(y - x, beta) + std::pow(y + x, beta)) * std::pow(y, -1.0 - alpha) * Y /
                                  (s * s);
                         },
                         0.0, 1.0, 1e-10);
    res.x.push_back(x);
    res.original.push_back(std::exp(-kPi * x * x));
    res.reconstructed.push_back(c_alpha * integral);
    res.max_deviation = std::max(res.max_deviation, std::abs(res.reconstructed.back() - res.original.back()));
  }
  return res;
}

}  // namespace adamsq
