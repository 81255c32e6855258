#include "adamsq/functional.hpp"

#include "adamsq/special.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace adamsq {

std::string Region::describe() const {
  std::ostringstream s;
  s.precision(17);
  if (is_all()) {
    s << "all";
  } else if (inner == 0.0) {
    s << "ball:" << outer;
  } else {
    s << "annulus:" << inner << ":" << outer;
  }
  return s.str();
}

namespace {

// Integral of rho^{sigma n - 1} over [a, b], the shell measure up to the
// sphere area.
double shell_moment(double a, double b, double sigma, int n) {
  const double e = sigma * n;
  return (std::pow(b, e) - std::pow(a, e)) / e;
}

// Measure of cell i inside the region under the selected density.
double cell_measure(const SampledFunction& u, std::size_t i, const Region& region, double sigma) {
  if (u.layout == Layout::radial) {
    const double a = u.edges[i], b = u.edges[i + 1];
    const double lo = std::max(a, region.inner), hi = std::min(b, region.outer);
    if (!(hi > lo)) return 0.0;
    // Ratio to the Lebesgue measure keeps partial domains (half balls) intact.
    return u.weights[i] * shell_moment(lo, hi, sigma, u.n) / shell_moment(a, b, 1.0, u.n);
  }
  const double rho = norm(u.nodes[i], u.n);
  if (rho < region.inner || rho > region.outer) return 0.0;
  if (sigma == 1.0) return u.weights[i];
  if (rho == 0.0) throw std::domain_error("exp_functional: weighted measure sampled at the origin");
  return u.weights[i] * std::pow(rho, (sigma - 1.0) * u.n);
}

double sampled_extent(const SampledFunction& u) {
  if (u.layout == Layout::radial) return u.edges.back();
  return u.half_width;
}

FunctionalReport evaluate(const SampledFunction& u, const std::vector<double>& values, const FunctionalOptions& opt) {
  if (!(opt.sigma > 0.0 && opt.sigma <= 1.0)) throw std::invalid_argument("exp_functional: sigma must lie in (0, 1]");
  if (!opt.region.is_all() && opt.region.outer > sampled_extent(u) * (1.0 + 1e-12)) {
    throw std::domain_error("exp_functional: region extends past the sampled domain");
  }
  if (opt.region.inner > opt.region.outer) throw std::domain_error("exp_functional: empty region");
  FunctionalReport rep;
  rep.constant_used = opt.constant;
  rep.region = opt.region.describe();
  {
    std::ostringstream m;
    m.precision(17);
    if (opt.sigma == 1.0) {
      m << "lebesgue";
    } else {
      m << "power_weight:" << opt.sigma;
    }
    rep.measure = m.str();
  }
  rep.truncation = opt.truncation ? *opt.truncation : -1;
  // Log-sum-exp over cells.
  std::vector<double> logs;
  logs.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double w = cell_measure(u, i, opt.region, opt.sigma);
    if (w <= 0.0) continue;
    const double t = opt.constant * std::pow(std::abs(values[i]), opt.power);
    if (t > 700.0 && !rep.overflow) {
      rep.overflow = true;
      rep.overflow_node = i;
    }
    const double le = opt.truncation ? log_truncated_exp(t, *opt.truncation) : t;
    if (le == -kInfinity) continue;
    logs.push_back(std::log(w) + le);
  }
  if (logs.empty()) {
    rep.value = 0.0;
    rep.log_value = -kInfinity;
    return rep;
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> scaled(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) scaled[i] = std::exp(logs[i] - top);
  rep.log_value = top + std::log(pairwise_sum(scaled));
  rep.value = rep.overflow ? kInfinity : std::exp(rep.log_value);
  return rep;
}

}  // namespace

FunctionalReport exp_functional(const SampledFunction& u, const FunctionalOptions& opt) {
  std::vector<double> mag(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) mag[i] = u.magnitude(i);
  return evaluate(u, mag, opt);
}

FunctionalReport exp_functional(const PotentialField& u, const SampledFunction& cells, const FunctionalOptions& opt) {
  if (u.base.size() != cells.size()) throw std::invalid_argument("exp_functional: potential and cells differ in size");
  std::vector<double> mag(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) mag[i] = u.base.magnitude(i);
  return evaluate(cells, mag, opt);
}

Sandwich regularization_sandwich(const SampledFunction& u, double c, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("regularization_sandwich: p must exceed 1");
  const double pp = p / (p - 1.0);
  Sandwich s;
  s.order = std::max(0, static_cast<int>(std::ceil(p - 2.0 - 1e-12)));
  KahanSum big, mid, norm_p;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u.magnitude(i), w = u.weights[i];
    if (a == 0.0) continue;
    const double t = c * std::pow(a, pp);
    if (a >= 1.0) big.add(w * std::exp(t));
    mid.add(w * truncated_exp(t, s.order));
    norm_p.add(w * std::pow(a, p));
  }
  const double shift = std::exp(c) * norm_p.value();
  s.lower = big.value() - shift;
  s.middle = mid.value();
  s.upper = big.value() + shift;
  return s;
}

double holder_perturbation(double tau, double p, double A, double beta, HolderMode mode) {
  if (!(beta > 1.0)) throw std::invalid_argument("holder_perturbation: beta must exceed 1");
  if (tau < 0.0 || p < 0.0 || p > 1.0) throw std::invalid_argument("holder_perturbation: need tau >= 0, p in [0, 1]");
  const double bp = beta / (beta - 1.0);
  const double rest = 1.0 - std::pow(p, bp);
  if (mode == HolderMode::B) return tau * std::pow(rest, 1.0 / bp);
  if (!(A > 0.0)) throw std::invalid_argument("holder_perturbation: A must be positive");
  if (p >= 1.0) throw std::domain_error("holder_perturbation: mode A needs p < 1");
  return std::exp(std::pow(std::pow(tau, bp) / rest, beta / bp) / A);
}

double holder_inequality_gap(double a, double c, double t, double beta) {
  const double bp = beta / (beta - 1.0);
  return std::pow(std::pow(a, beta) + std::pow(c, beta), 1.0 / beta) -
         (a * std::pow(t, 1.0 / bp) + c * std::pow(1.0 - t, 1.0 / bp));
}

RufCheck ruf_check(double f_norm, double tf_norm, int n, double alpha) {
  if (f_norm < 0.0 || tf_norm < 0.0) throw std::invalid_argument("ruf_check: norms must be nonnegative");
  const double p = n / alpha;
  RufCheck r;
  r.slack = 1.0 - (std::pow(f_norm, p) + std::pow(tf_norm, p));
  r.pass = r.slack >= -1e-12;
  return r;
}

}  // namespace adamsq
