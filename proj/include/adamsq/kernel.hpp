#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace adamsq {

/// Point of R^n stored in three slots; unused trailing slots stay zero.
using Point = std::array<double, 3>;

double norm(const Point& x, int n);
double dot(const Point& a, const Point& b, int n);

/// Angular part g of a kernel, one evaluator per component.
struct AngularProfile {
  std::vector<std::function<double(const Point&)>> evaluator;
  /// Set when the Euclidean length |g(w)| does not depend on w.
  bool constant_length = false;
  double constant_length_value = 0.0;
  /// Declared Lipschitz quotient bound for (rl3); NaN when unknown.
  double lipschitz_bound = std::numeric_limits<double>::quiet_NaN();
};

enum class KernelFamily { riesz, gradient, perturbed, custom };

/// A Riesz-like kernel of order alpha on R^n with one or more components.
struct KernelSpec {
  std::string id;
  KernelFamily family = KernelFamily::custom;
  int n = 2;
  double alpha = 1.0;
  int components = 1;
  AngularProfile angular;
  double correction_exponent = 1.0;  // delta in the near-origin expansion
  double correction_bound = 0.0;     // constant of the O(|x|^{alpha-n+delta}) term
  double global_bound = 1.0;         // |K(x)| <= global_bound |x|^{alpha-n}
  int regularity = 8;
  bool homogeneous = false;
  /// Scalar kernel depending on |x| only.
  bool radial = false;
  /// Raw evaluator writing `components` values.
  std::function<void(const Point&, double*)> eval;
};

KernelSpec riesz_kernel(int n, double alpha);
/// J_alpha(x) = c_{alpha+1}(n-alpha-1)|x|^{alpha-n-1} x, vector valued.
KernelSpec gradient_kernel(int n, double alpha);
/// |x|^{alpha-n}(1 + c s(|x|)) with s(rho) = rho^delta/(1+rho^delta); radial and
/// non-homogeneous, behaving like (1+c)|x|^{alpha-n} at infinity.
KernelSpec perturbed_kernel(int n, double alpha, double delta, double c);
/// Kernel from an explicit scalar evaluator and angular profile.
KernelSpec custom_kernel(int n, double alpha, std::function<double(const Point&)> k,
                         std::function<double(const Point&)> g, double delta, double correction_bound,
                         double global_bound, bool homogeneous, int regularity = 8);
/// "riesz", "gradient" or "perturbed:<delta>:<c>".
KernelSpec make_kernel(const std::string& name, int n, double alpha);

std::vector<double> eval_kernel(const KernelSpec& k, const Point& x);
double eval_scalar(const KernelSpec& k, const Point& x);

/// Integral over S^{n-1} of K(t e_1 - s w) dw for a scalar kernel.
double ring_average(const KernelSpec& k, double t, double s);

struct KernelSample {
  int n = 2;
  std::vector<Point> points;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Log-spaced radii over [r_min, r_max] times `directions` directions, plus
/// `pair_count` random pairs (half of them close pairs).
KernelSample make_kernel_sample(int n, double r_min = 1e-3, double r_max = 1e3, int radii = 61,
                                int directions = 32, std::size_t pair_count = 20000,
                                unsigned long long seed = 1);

struct ConditionReport {
  double rl1_ratio = 0.0;
  double rl2_ratio = 0.0;
  double rl3_ratio = 0.0;
  bool rl1_pass = false;
  bool rl2_pass = false;
  bool rl3_pass = false;
  bool pass = false;
};

ConditionReport verify_kernel_conditions(const KernelSpec& k, const KernelSample& sample, double slack = 1.05);

using MultiIndex = std::array<int, 3>;

struct TaylorTerm {
  int degree = 0;
  Point base_point{};
  int n = 2;
  /// coefficients[c] lists (multi-index, value) pairs for component c.
  std::vector<std::vector<std::pair<MultiIndex, double>>> coefficients;

  /// p_j(x, y) for component c.
  double evaluate(const Point& y, int component = 0) const;
};

/// p_j(x, y) = (1/j!) d^j K(x; -y) as a homogeneous polynomial in y.
TaylorTerm taylor_term(const KernelSpec& k, const Point& x, int j);
/// Same quantity by central differences with Richardson extrapolation.
TaylorTerm taylor_term_finite_difference(const KernelSpec& k, const Point& x, int j);
/// All multi-indices of total degree j in n variables, graded lexicographic.
std::vector<MultiIndex> multi_indices(int n, int j);

struct SharpConstants {
  double A_g = 0.0;
  double c_alpha = 0.0;
  double gamma = 0.0;
  double ball_volume = 0.0;
};

double constant_A_g(const KernelSpec& k);
/// Same integral by sphere quadrature, ignoring any closed form.
double constant_A_g_quadrature(const KernelSpec& k);
double constant_c_alpha(int n, double alpha);

enum class OperatorChoice { fractional_laplacian, gradient_power };
double constant_gamma(OperatorChoice p, int n, double alpha);
/// (n-alpha-1) c_{alpha+1} written through the Gamma recurrence.
double gradient_prefactor(int n, double alpha);

}  // namespace adamsq
