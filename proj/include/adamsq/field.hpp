#pragma once

#include "adamsq/kernel.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace adamsq {

enum class Layout { radial, cartesian };

/// Compactly supported function on R^n, piecewise constant on its cells.
///
/// Radial layout: cell i is the shell edges[i] <= |y| < edges[i+1] and
/// nodes[i][0] is its representative radius; edges[0] == 0 makes cell 0 a
/// ball. Cartesian layout: cell-centred uniform grid on [-half_width,
/// half_width]^n with `grid_points` points per axis.
struct SampledFunction {
  Layout layout = Layout::radial;
  int n = 2;
  int components = 1;
  std::vector<Point> nodes;
  std::vector<double> weights;
  /// Node-major, `components` entries per node.
  std::vector<double> values;
  double support_radius = 0.0;
  std::vector<double> edges;
  int grid_points = 0;
  double half_width = 0.0;

  /// Recomputes support_radius from the nonzero cells.
  void refresh_support();
  std::size_t size() const { return nodes.size(); }
  double value(std::size_t i, int c = 0) const { return values[i * components + c]; }
  /// Euclidean length of the value tuple at node i.
  double magnitude(std::size_t i) const;
  double radius(std::size_t i) const;
  double total_measure() const;
};

/// Geometric shell edges: optional core ball [0, r_inner] then `cells` shells
/// up to r_outer.
std::vector<double> geometric_edges(double r_inner, double r_outer, int cells, bool core);

/// Radial function sampled at shell representatives (geometric midpoint, or
/// half the radius for a core ball).
SampledFunction make_radial(int n, const std::vector<double>& edges, const std::function<double(double)>& profile);
/// Radial function whose cell values are supplied directly.
SampledFunction make_radial_values(int n, const std::vector<double>& edges, std::vector<double> cell_values);
/// Default radial grid: 4096 shells over [1e-6 R, R] plus a core ball.
SampledFunction radial_grid(int n, double support_radius, const std::function<double(double)>& profile,
                            int cells = 4096, double inner_ratio = 1e-6);

SampledFunction make_cartesian(int n, double half_width, int grid_points,
                               const std::function<std::vector<double>(const Point&)>& f, int components = 1);
SampledFunction make_cartesian_scalar(int n, double half_width, int grid_points,
                                      const std::function<double(const Point&)>& f);
/// Largest grid allowed per axis (256 in the plane, 96 in space).
int max_grid_points(int n);

double lp_norm(const SampledFunction& f, double p);

enum class DilationMode { density, plain };
/// density: lambda^alpha f(lambda x); plain: f(lambda x).
SampledFunction dilate(const SampledFunction& f, double lambda, DilationMode mode, double alpha);

struct LargeSmallSplit {
  SampledFunction large;
  SampledFunction small;
};
LargeSmallSplit split_large_small(const SampledFunction& f);

/// e^t minus the first N+1 Taylor terms.
double truncated_exp(double t, int N);
/// Same quantity as a logarithm, usable when e^t overflows.
double log_truncated_exp(double t, int N);
/// ceil(n/alpha - 2), clamped at zero.
int exp_order(int n, double alpha);

/// (a^{qn/alpha} + b^{qn/alpha})^{alpha/(qn)}; max(a, b) for q = infinity.
double q_norm(double a, double b, double q, int n, double alpha);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace adamsq
