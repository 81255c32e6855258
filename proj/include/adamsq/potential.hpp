#pragma once

#include "adamsq/field.hpp"
#include "adamsq/kernel.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace adamsq {

/// Tf sampled at evaluation points. `base` reuses the SampledFunction layout
/// (cartesian nodes = the points, unit weights) so it can be written as CSV.
struct PotentialField {
  SampledFunction base;
  std::string kernel_id;
  std::vector<double> quadrature_error;
  /// Points that could not be resolved (value left NaN).
  std::vector<bool> flagged;
};

/// u(tau) = integral over the unit ball of |tau e_1 - y|^{alpha-n}.
double riesz_ball_potential(int n, double alpha, double tau);

/// The same integral through the generic shell quadrature (independent route).
double ball_potential_by_shells(const KernelSpec& k, double tau);

/// Integral of K(t e_1 - y) over the shell a <= |y| <= b for a radial scalar
/// kernel, in polar coordinates centred at the evaluation point.
double shell_integral(const KernelSpec& k, double t, double a, double b);

/// Tf(t e_1) for radial f. Riesz kernels go through the ball decomposition of
/// f; other radial scalar kernels through shell integrals.
std::vector<double> radial_potential(const KernelSpec& k, const SampledFunction& f, const std::vector<double>& radii);

/// Geometric radial lattice: edges[first + i] = e0 q^i for i = 0..cells.
struct GeometricLattice {
  bool valid = false;
  std::size_t first = 0;
  std::size_t cells = 0;
  double e0 = 0.0;
  double log_q = 0.0;
};
GeometricLattice detect_lattice(const SampledFunction& f);

/// Riesz potential of a lattice function at e0 q^{j + offset}, j = j_lo..j_hi,
/// as a Toeplitz sum over the ball decomposition.
std::vector<double> lattice_riesz_potential(int n, double alpha, const SampledFunction& f, const GeometricLattice& g,
                                            int j_lo, int j_hi, double offset);

/// Far field of the Riesz potential of radial f for t >= 2 * support radius,
/// by the multipole series in (support/t)^2.
class RieszFarField {
 public:
  RieszFarField(int n, double alpha, const SampledFunction& f);
  double operator()(double t) const;
  double support() const { return support_; }

 private:
  int n_;
  double alpha_;
  double support_;
  std::vector<double> coeff_;  // |B_1| c_k S_k / support^{2k}
};

PotentialField apply_potential(const KernelSpec& k, const SampledFunction& f, const std::vector<Point>& points);

/// Cartesian direct sum at one point, written into out[0..components).
void cartesian_potential_at(const KernelSpec& k, const SampledFunction& f, const Point& x, double* out,
                            double* error_estimate = nullptr);

/// Resample a radial function onto a cartesian grid covering its support.
SampledFunction radial_to_cartesian(const SampledFunction& f, double half_width, int grid_points);

/// Thrown when the potential does not decay fast enough for the requested
/// power to be integrable at infinity.
struct DecayError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TailIntegral {
  double value = 0.0;
  double remainder = 0.0;   // extrapolated contribution beyond the last radius
  double decay = 0.0;       // fitted d log(rho^n |Tf|^p) / d log rho, sign flipped
  double outer_radius = 0.0;
};

/// Integral of |Tf|^p over |x| >= rho0 for radial f and a radial scalar kernel.
TailIntegral potential_tail_integral(const KernelSpec& k, const SampledFunction& f, double rho0, double p);

/// Integral of |Tf|^p over |x| >= 2r.
double potential_tail_lp(const KernelSpec& k, const SampledFunction& f, double r, double p);

struct PotentialNorm {
  double near = 0.0;   // |x| < 2 * support
  double tail = 0.0;   // |x| >= 2 * support, extrapolated
  double total() const { return near + tail; }
};

/// Integral of |Tf|^p over R^n for radial f with the Riesz kernel on a
/// geometric lattice (two-point Gauss rule in log radius per cell).
PotentialNorm riesz_potential_lp(int n, double alpha, const SampledFunction& f, double p);

/// Largest observed value of (|Tf(x)| - local part) / ||Tf||_{n/alpha} over
/// the sampled (x, a) with |x - a| <= 1, the local part being the integral of
/// |K(x-y)||f(y)| over |y - a| <= 2.
double pointwise_condition_constant(const KernelSpec& k, const SampledFunction& f, const std::vector<Point>& anchors,
                                    int points_per_anchor, double tf_norm, unsigned long long seed);

}  // namespace adamsq
