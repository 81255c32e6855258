#pragma once

#include "adamsq/field.hpp"
#include "adamsq/kernel.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace adamsq {

/// One member of an extremal family plus its derived constants.
struct ExtremalSpec {
  int n = 2;
  double alpha = 1.0;
  double epsilon = 0.1;
  double r = 1.0;
  double q = 1.0;
  double theta = std::numeric_limits<double>::quiet_NaN();
  double sigma = 1.0;
  double A_g = 0.0;
  double b_r = 0.0;
  double b_eps_r = 0.0;  // A_g log(1/(eps r)^n) + b_r
  double C1 = 0.0;
  double normalization = 1.0;  // scale applied by ruf_normalize
};

/// Shell lattice for extremal profiles: eps*r and r are exact edges, the
/// spacing is fixed per decade and the lattice continues `decades_below`
/// decades under eps*r, with a core ball at the bottom.
struct ProfileGrid {
  int cells_per_decade = 64;
  double decades_below = 2.0;
};

/// Fills A_g, b_r and b_eps_r for the given kernel; checks 0 <= eps r < 1.
ExtremalSpec make_extremal_spec(const KernelSpec& k, double epsilon, double r, double q = 1.0);

/// K(-y)|K(-y)|^{alpha/(n-alpha)-1} on eps r < |y| <= r (radial scalar kernels),
/// stored as exact shell averages for the Riesz kernel.
SampledFunction adams_profile(const KernelSpec& k, const ExtremalSpec& spec, const ProfileGrid& grid = {});
/// Same profile on a cartesian grid; handles vector and non-radial kernels.
SampledFunction adams_profile_cartesian(const KernelSpec& k, const ExtremalSpec& spec, double half_width,
                                        int grid_points);

/// Orthonormal polynomials of degree <= m on B_r under the L^2(B_r) product.
struct BallPolyBasis {
  int n = 2;
  int m = 1;
  double r = 1.0;
  std::vector<MultiIndex> monomials;
  /// coefficients[k][j] multiplies monomials[j] in v_k.
  std::vector<std::vector<double>> coefficients;
  /// Radial sub-basis: coefficients of |y|^{2j}, j = 0..m/2.
  std::vector<std::vector<double>> radial_coefficients;

  double evaluate(std::size_t k, const Point& y) const;
  double evaluate_radial(std::size_t k, double rho) const;
};

/// Integral of y^k over B_r.
double ball_monomial_integral(int n, const MultiIndex& k, double r);
BallPolyBasis ball_poly_basis(int n, int m, double r);

/// f minus its projection onto the basis span, in the cell-average
/// (Petrov-Galerkin) form so every discrete moment vanishes to roundoff.
SampledFunction moment_normalize(const SampledFunction& f, const BallPolyBasis& basis);
/// Discrete moments of f against the basis polynomials (cell integrals).
std::vector<double> basis_moments(const SampledFunction& f, const BallPolyBasis& basis);

/// r^n = (A_g/(2 C_1)) (log 1/eps^n)^{1/q'}; theta (when finite) fixes
/// eps^n = exp(-1/(1-theta)). Throws ScheduleError when the regime checks fail.
ExtremalSpec schedule_parameters(const KernelSpec& k, double epsilon, double q, double C1,
                                 double theta = std::numeric_limits<double>::quiet_NaN());

struct ScheduleError : std::runtime_error {
  ScheduleError(const std::string& what, double threshold) : std::runtime_error(what), epsilon_threshold(threshold) {}
  double epsilon_threshold;
};

struct RufNormalized {
  SampledFunction psi;
  double scale = 1.0;
};
RufNormalized ruf_normalize(const SampledFunction& f_tilde, double tf_norm, double q, double alpha);
double ruf_scale(double f_norm, double tf_norm, double q, int n, double alpha);

/// Integral of |K(y)|^{n/(n-alpha)} over 1 <= |y| <= r (negative for r < 1).
double b_r_constant(const KernelSpec& k, double r);

enum class MoserDomain { full_ball, half_ball };
enum class MoserVariant { capped_log, smoothed };

/// Moser-type profile: capped_log is log(1/eps) inside B_eps, log(1/|x|) up
/// to 1, zero beyond; smoothed is log(1/eps^n), log(1/|x|^n) up to 1/2, then
/// linear down to 0 at 3/4.
struct MoserProfile {
  int n = 2;
  double epsilon = 0.1;
  MoserDomain domain = MoserDomain::full_ball;
  MoserVariant variant = MoserVariant::capped_log;
  double value(double rho) const;
  double gradient(double rho) const;  // |grad u| at radius rho
  double outer_radius() const { return variant == MoserVariant::capped_log ? 1.0 : 0.75; }
  /// Fraction of each sphere lying in the domain.
  double domain_fraction() const { return domain == MoserDomain::half_ball ? 0.5 : 1.0; }
  /// Integral of |u|^p over the domain (exact piecewise quadrature).
  double lp_power(double p) const;
  /// Integral of |grad u|^p over the domain.
  double gradient_lp_power(double p) const;
  /// Sampled values on a geometric shell grid (weights already include the
  /// domain fraction).
  SampledFunction sample(int cells_per_decade = 64) const;
};
MoserProfile moser_profile(double epsilon, MoserDomain domain, int n = 2, MoserVariant variant = MoserVariant::capped_log);

}  // namespace adamsq
