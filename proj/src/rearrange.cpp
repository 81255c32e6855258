#include "adamsq/rearrange.hpp"

#include "adamsq/potential.hpp"
#include "adamsq/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adamsq {

std::vector<double> default_t_grid(double m, int points) {
  if (!(m > 0.0)) m = 1.0;
  std::vector<double> t(points);
  const double lo = std::log(1e-4 * m), hi = std::log(10.0 * m);
  for (int i = 0; i < points; ++i) t[i] = std::exp(lo + (hi - lo) * i / (points - 1));
  return t;
}

double distribution_function(const SampledFunction& f, double s) {
  KahanSum m;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.magnitude(i) > s) m.add(f.weights[i]);
  return m.value();
}

double DecreasingProfile::star_at(double t) const {
  if (t < 0.0) throw std::domain_error("star_at: negative measure");
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), t);
  return it == cumulative.end() ? 0.0 : levels[static_cast<std::size_t>(it - cumulative.begin())];
}

double DecreasingProfile::double_star_at(double t) const {
  if (!(t > 0.0)) return levels.empty() ? 0.0 : levels.front();
  double acc = 0.0, lo = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double hi = std::min(cumulative[k], t);
    acc += levels[k] * (hi - lo);
    if (cumulative[k] >= t) break;
    lo = cumulative[k];
  }
  return acc / t;
}

double DecreasingProfile::integral_power(double p) const {
  KahanSum s;
  double lo = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    s.add(std::pow(levels[k], p) * (cumulative[k] - lo));
    lo = cumulative[k];
  }
  return s.value();
}

DecreasingProfile decreasing_rearrangement(const SampledFunction& f, const std::vector<double>& t_grid) {
  std::vector<std::pair<double, double>> cells;  // (|f|, weight)
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f.magnitude(i);
    if (v > 0.0) cells.emplace_back(v, f.weights[i]);
  }
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  DecreasingProfile p;
  KahanSum m;
  for (const auto& [v, w] : cells) {
    m.add(w);
    if (!p.levels.empty() && p.levels.back() == v) {
      p.cumulative.back() = m.value();
    } else {
      p.levels.push_back(v);
      p.cumulative.push_back(m.value());
    }
  }
  p.t_grid = t_grid.empty() ? default_t_grid(p.support_measure() > 0.0 ? p.support_measure() : f.total_measure())
                            : t_grid;
  for (double t : p.t_grid) {
    p.star.push_back(p.star_at(t));
    p.double_star.push_back(p.double_star_at(t));
  }
  return p;
}

KernelRearrangement kernel_rearrangement(const KernelSpec& k) {
  if (k.components != 1) throw std::invalid_argument("kernel_rearrangement: scalar kernel required");
  KernelRearrangement r;
  r.n = k.n;
  r.alpha = k.alpha;
  if (k.homogeneous) {
    r.closed_form = true;
    r.A = constant_A_g(k);
    return r;
  }
  if (!k.radial) throw std::invalid_argument("kernel_rearrangement: needs a homogeneous or radial kernel");
  const auto edges = geometric_edges(1e-12, 1e12, 24 * 200, false);
  const SampledFunction sample =
      make_radial(k.n, edges, [&](double rho) { return std::abs(eval_scalar(k, Point{rho, 0, 0})); });
  r.sampled = decreasing_rearrangement(sample, {1.0});
  return r;
}

double KernelRearrangement::star(double t) const {
  if (closed_form) return std::pow(A / t, 1.0 - alpha / n);
  return sampled.star_at(t);
}

double KernelRearrangement::double_star(double t) const {
  if (closed_form) return n / alpha * star(t);
  return sampled.double_star_at(t);
}

double KernelRearrangement::tail_against(const DecreasingProfile& f, double t) const {
  // x K**(x) is the antiderivative of K*.
  return f.weighted_tail(t, [&](double x) { return x > 0.0 ? x * double_star(x) : 0.0; });
}

OneilReport oneil_check(const KernelSpec& k, const SampledFunction& f, const std::vector<double>& t_grid) {
  if (k.components != 1) throw std::invalid_argument("oneil_check: scalar kernel required");
  if (f.layout != Layout::radial) throw std::invalid_argument("oneil_check: radial input required");
  OneilReport rep;
  rep.t = t_grid;
  const DecreasingProfile fp = decreasing_rearrangement(f, t_grid);
  const KernelRearrangement kr = kernel_rearrangement(k);

  DecreasingProfile tp;  // rearrangement of |Tf| on the covering grid
  const double R = f.support_radius;
  if (R > 0.0) {
    double l1 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) l1 += f.weights[i] * f.magnitude(i);
    const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
    bool covered = false;
    for (double R_out = 16.0 * R; R_out <= std::ldexp(R, 24); R_out *= 4.0) {
      const double inner = 1e-6 * R;
      const int cells = static_cast<int>(std::ceil(120.0 * std::log10(R_out / inner)));
      const auto edges = geometric_edges(inner, R_out, cells, true);
      std::vector<double> radii;
      for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        radii.push_back(edges[i] == 0.0 ? 0.5 * edges[i + 1] : std::sqrt(edges[i] * edges[i + 1]));
      }
      const auto values = radial_potential(k, f, radii);
      std::vector<double> mags(values.size());
      for (std::size_t i = 0; i < values.size(); ++i) mags[i] = std::abs(values[i]);
      tp = decreasing_rearrangement(make_radial_values(f.n, edges, mags), t_grid);
      const double outside = k.global_bound * l1 * std::pow(R_out - R, k.alpha - k.n);
      if (t_max < tp.support_measure() && outside <= tp.star_at(t_max)) {
        if (t_grid.front() < ball_volume(f.n) * std::pow(inner, f.n)) {
          throw std::runtime_error("oneil_check: covering grid too coarse for the smallest t");
        }
        covered = true;
        break;
      }
    }
    if (!covered) throw std::runtime_error("oneil_check: covering grid cannot resolve (Tf)** at the largest t");
  }
  for (double t : t_grid) {
    const double lhs = R > 0.0 ? tp.double_star_at(t) : 0.0;
    const double rhs = R > 0.0 ? t * kr.double_star(t) * fp.double_star_at(t) + kr.tail_against(fp, t) : 0.0;
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    rep.margin.push_back(rhs - lhs);
    if (rhs - lhs < -1e-6 * rhs) rep.pass = false;
    if (rhs > 0.0) rep.worst_relative_margin = std::min(rep.worst_relative_margin, (rhs - lhs) / rhs);
  }
  return rep;
}

}  // namespace adamsq
