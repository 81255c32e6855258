#pragma once

#include <vector>

namespace adamsq {

/// Spectral fractional Laplacian of exp(-pi x^2) on a periodic grid followed
/// by the Riesz potential c_alpha I_alpha, evaluated by a corrected
/// trapezoid rule, in one dimension.
struct InversionResult {
  double alpha = 0.5;
  std::vector<double> x;
  std::vector<double> original;
  std::vector<double> reconstructed;
  double max_deviation = 0.0;
};

/// Grid of 2^log2_points nodes with spacing dx centred at 0; reports on
/// |x| <= x_max.
InversionResult fractional_inversion(double alpha, int log2_points = 21, double dx = 1.0 / 32.0, double x_max = 4.0);

/// Coefficient of the far-field law (-Delta)^{alpha/2} g(y) ~ -C |y|^{-1-alpha}
/// for a unit-mass g in one dimension.
double fractional_tail_coefficient(double alpha);

}  // namespace adamsq
