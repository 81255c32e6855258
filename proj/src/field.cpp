#include "adamsq/field.hpp"

#include "adamsq/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adamsq {

double SampledFunction::magnitude(std::size_t i) const {
  if (components == 1) return std::abs(values[i]);
  double s = 0.0;
  for (int c = 0; c < components; ++c) s += values[i * components + c] * values[i * components + c];
  return std::sqrt(s);
}

double SampledFunction::radius(std::size_t i) const {
  return layout == Layout::radial ? nodes[i][0] : norm(nodes[i], n);
}

double SampledFunction::total_measure() const { return pairwise_sum(weights); }

void SampledFunction::refresh_support() {
  double r = 0.0;
  const double half_diag = layout == Layout::cartesian ? 0.5 * (2.0 * half_width / grid_points) * std::sqrt(n) : 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (magnitude(i) == 0.0) continue;
    r = std::max(r, layout == Layout::radial ? edges[i + 1] : radius(i) + half_diag);
  }
  support_radius = r;
}

std::vector<double> geometric_edges(double r_inner, double r_outer, int cells, bool core) {
  if (!(r_inner > 0.0) || !(r_outer > r_inner) || cells < 1) {
    throw std::invalid_argument("geometric_edges: need 0 < r_inner < r_outer and cells >= 1");
  }
  std::vector<double> e;
  if (core) e.push_back(0.0);
  const double step = std::log(r_outer / r_inner) / cells;
  for (int i = 0; i <= cells; ++i) e.push_back(r_inner * std::exp(step * i));
  e.back() = r_outer;
  return e;
}

namespace {

double shell_measure(int n, double a, double b) {
  return sphere_area(n) * (std::pow(b, n) - std::pow(a, n)) / n;
}

double representative(double a, double b) { return a == 0.0 ? 0.5 * b : std::sqrt(a * b); }

SampledFunction radial_skeleton(int n, const std::vector<double>& edges) {
  if (n < 1 || n > 3) throw std::invalid_argument("radial function: dimension must be 1, 2 or 3");
  if (edges.size() < 2) throw std::invalid_argument("radial function: need at least one cell");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i]) || edges[i] < 0.0) throw std::invalid_argument("radial function: edges must increase");
  }
  SampledFunction f;
  f.layout = Layout::radial;
  f.n = n;
  f.edges = edges;
  const std::size_t m = edges.size() - 1;
  f.nodes.resize(m);
  f.weights.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    f.nodes[i] = Point{representative(edges[i], edges[i + 1]), 0, 0};
    f.weights[i] = shell_measure(n, edges[i], edges[i + 1]);
  }
  return f;
}

}  // namespace

SampledFunction make_radial(int n, const std::vector<double>& edges, const std::function<double(double)>& profile) {
  SampledFunction f = radial_skeleton(n, edges);
  f.values.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = profile(f.nodes[i][0]);
  f.refresh_support();
  return f;
}

SampledFunction make_radial_values(int n, const std::vector<double>& edges, std::vector<double> cell_values) {
  SampledFunction f = radial_skeleton(n, edges);
  if (cell_values.size() != f.size()) throw std::invalid_argument("make_radial_values: one value per cell expected");
  f.values = std::move(cell_values);
  f.refresh_support();
  return f;
}

SampledFunction radial_grid(int n, double support_radius, const std::function<double(double)>& profile, int cells,
                            double inner_ratio) {
  return make_radial(n, geometric_edges(inner_ratio * support_radius, support_radius, cells, true), profile);
}

int max_grid_points(int n) { return n == 1 ? 1 << 20 : (n == 2 ? 256 : 96); }

SampledFunction make_cartesian(int n, double half_width, int grid_points,
                               const std::function<std::vector<double>(const Point&)>& fun, int components) {
  if (n < 1 || n > 3) throw std::invalid_argument("cartesian function: dimension must be 1, 2 or 3");
  if (grid_points < 1 || grid_points > max_grid_points(n)) {
    throw std::invalid_argument("cartesian function: grid size outside the supported range");
  }
  if (!(half_width > 0.0)) throw std::invalid_argument("cartesian function: half width must be positive");
  SampledFunction f;
  f.layout = Layout::cartesian;
  f.n = n;
  f.components = components;
  f.grid_points = grid_points;
  f.half_width = half_width;
  const double h = 2.0 * half_width / grid_points;
  const std::size_t total = static_cast<std::size_t>(std::pow(grid_points, n) + 0.5);
  f.nodes.resize(total);
  f.weights.assign(total, std::pow(h, n));
  f.values.resize(total * components);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = idx;
    Point x{};
    for (int d = 0; d < n; ++d) {
      x[d] = -half_width + (static_cast<double>(r % grid_points) + 0.5) * h;
      r /= grid_points;
    }
    f.nodes[idx] = x;
    const auto v = fun(x);
    if (static_cast<int>(v.size()) != components) throw std::invalid_argument("cartesian function: wrong arity");
    std::copy(v.begin(), v.end(), f.values.begin() + idx * components);
  }
  f.refresh_support();
  return f;
}

SampledFunction make_cartesian_scalar(int n, double half_width, int grid_points,
                                      const std::function<double(const Point&)>& fun) {
  return make_cartesian(n, half_width, grid_points, [&](const Point& x) { return std::vector<double>{fun(x)}; }, 1);
}

double lp_norm(const SampledFunction& f, double p) {
  if (!(p >= 1.0)) throw std::domain_error("lp_norm: exponent must be at least 1");
  double top = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) top = std::max(top, f.magnitude(i));
  if (std::isinf(p) || top == 0.0) return top;
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) terms[i] = f.weights[i] * std::pow(f.magnitude(i) / top, p);
  return top * std::pow(pairwise_sum(terms), 1.0 / p);
}

SampledFunction dilate(const SampledFunction& f, double lambda, DilationMode mode, double alpha) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda must be positive");
  SampledFunction g = f;
  const double inv = 1.0 / lambda;
  for (auto& x : g.nodes)
    for (auto& c : x) c *= inv;
  for (auto& e : g.edges) e *= inv;
  const double wscale = std::pow(lambda, -f.n);
  for (auto& w : g.weights) w *= wscale;
  if (mode == DilationMode::density) {
    const double vscale = std::pow(lambda, alpha);
    for (auto& v : g.values) v *= vscale;
  }
  g.support_radius = f.support_radius * inv;
  g.half_width = f.half_width * inv;
  return g;
}

LargeSmallSplit split_large_small(const SampledFunction& f) {
  LargeSmallSplit s{f, f};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const bool large = f.magnitude(i) >= 1.0;
    for (int c = 0; c < f.components; ++c) {
      const std::size_t k = i * f.components + c;
      (large ? s.small.values[k] : s.large.values[k]) = 0.0;
    }
  }
  s.large.refresh_support();
  s.small.refresh_support();
  return s;
}

int exp_order(int n, double alpha) {
  return std::max(0, static_cast<int>(std::ceil(n / alpha - 2.0 - 1e-12)));
}

double truncated_exp(double t, int N) {
  if (t < 0.0 || N < 0) throw std::domain_error("truncated_exp: need t >= 0 and N >= 0");
  if (t == 0.0) return 0.0;
  if (t < N + 20.0) {
    // Tail series; all terms are positive so nothing cancels.
    double term = 1.0;
    for (int k = 1; k <= N + 1; ++k) term *= t / k;
    double sum = 0.0;
    for (int k = N + 1; k < N + 2000; ++k) {
      sum += term;
      if (term < 1e-18 * sum) break;
      term *= t / (k + 1);
    }
    return sum;
  }
  double head = 0.0, term = 1.0;
  for (int k = 0; k <= N; ++k) {
    head += term;
    term *= t / (k + 1);
  }
  return std::exp(t) - head;
}

double log_truncated_exp(double t, int N) {
  if (t < 0.0 || N < 0) throw std::domain_error("log_truncated_exp: need t >= 0 and N >= 0");
  if (t == 0.0) return -kInfinity;
  if (t < N + 20.0) {
    const double lead = (N + 1) * std::log(t) - std::lgamma(N + 2.0);
    double term = 1.0, sum = 0.0;
    for (int k = 0; k < 2000; ++k) {
      sum += term;
      if (term < 1e-18 * sum) break;
      term *= t / (N + 2 + k);
    }
    return lead + std::log(sum);
  }
  double cdf = 0.0;
  for (int k = 0; k <= N; ++k) cdf += std::exp(k * std::log(t) - std::lgamma(k + 1.0) - t);
  return t + std::log1p(-cdf);
}

double q_norm(double a, double b, double q, int n, double alpha) {
  if (a < 0.0 || b < 0.0 || !(q > 0.0)) throw std::domain_error("q_norm: need a, b >= 0 and q > 0");
  const double top = std::max(a, b);
  if (std::isinf(q) || top == 0.0) return top;
  const double e = q * n / alpha;
  return top * std::pow(std::pow(a / top, e) + std::pow(b / top, e), 1.0 / e);
}

}  // namespace adamsq
