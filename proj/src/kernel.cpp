#include "adamsq/kernel.hpp"

#include "adamsq/special.hpp"

#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace adamsq {

double norm(const Point& x, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

double dot(const Point& a, const Point& b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

namespace {

void check_order(int n, double alpha) {
  if (n < 1 || n > 3) throw std::invalid_argument("kernel: dimension must be 1, 2 or 3");
  if (!(alpha > 0.0 && alpha < n)) throw std::invalid_argument("kernel: order must lie in (0, n)");
}

Point unit(const Point& x, int n) {
  const double r = norm(x, n);
  Point u{};
  for (int i = 0; i < n; ++i) u[i] = x[i] / r;
  return u;
}

}  // namespace

KernelSpec riesz_kernel(int n, double alpha) {
  check_order(n, alpha);
  KernelSpec k;
  k.id = "riesz";
  k.family = KernelFamily::riesz;
  k.n = n;
  k.alpha = alpha;
  k.angular.evaluator = {[](const Point&) { return 1.0; }};
  k.angular.constant_length = true;
  k.angular.constant_length_value = 1.0;
  k.angular.lipschitz_bound = n - alpha;
  k.correction_exponent = 1.0;
  k.correction_bound = 0.0;
  k.global_bound = 1.0;
  k.homogeneous = true;
  k.radial = true;
  const double e = alpha - n;
  k.eval = [n, e](const Point& x, double* out) { out[0] = std::pow(norm(x, n), e); };
  return k;
}

double gradient_prefactor(int n, double alpha) {
  return gamma_fn(0.5 * (n - alpha + 1.0)) /
         (std::pow(2.0, alpha) * std::pow(kPi, 0.5 * n) * gamma_fn(0.5 * (alpha + 1.0)));
}

KernelSpec gradient_kernel(int n, double alpha) {
  check_order(n, alpha);
  KernelSpec k;
  k.id = "gradient";
  k.family = KernelFamily::gradient;
  k.n = n;
  k.alpha = alpha;
  k.components = n;
  const double pref = gradient_prefactor(n, alpha);
  for (int j = 0; j < n; ++j) {
    k.angular.evaluator.push_back([pref, j](const Point& w) { return pref * w[j]; });
  }
  k.angular.constant_length = true;
  k.angular.constant_length_value = pref;
  k.correction_bound = 0.0;
  k.global_bound = pref;
  k.homogeneous = true;
  const double e = alpha - n - 1.0;
  k.eval = [n, e, pref](const Point& x, double* out) {
    const double s = pref * std::pow(norm(x, n), e);
    for (int j = 0; j < n; ++j) out[j] = s * x[j];
  };
  return k;
}

KernelSpec perturbed_kernel(int n, double alpha, double delta, double c) {
  check_order(n, alpha);
  if (!(delta > 0.0)) throw std::invalid_argument("perturbed kernel: delta must be positive");
  KernelSpec k;
  std::ostringstream id;
  id << "perturbed:" << delta << ":" << c;
  k.id = id.str();
  k.family = KernelFamily::perturbed;
  k.n = n;
  k.alpha = alpha;
  k.angular.evaluator = {[](const Point&) { return 1.0; }};
  k.angular.constant_length = true;
  k.angular.constant_length_value = 1.0;
  k.correction_exponent = delta;
  k.correction_bound = std::abs(c);
  k.global_bound = 1.0 + std::abs(c);
  k.homogeneous = false;
  k.radial = true;
  const double e = alpha - n;
  k.eval = [n, e, delta, c](const Point& x, double* out) {
    const double r = norm(x, n);
    const double rd = std::pow(r, delta);
    out[0] = std::pow(r, e) * (1.0 + c * rd / (1.0 + rd));
  };
  return k;
}

KernelSpec custom_kernel(int n, double alpha, std::function<double(const Point&)> kfun,
                         std::function<double(const Point&)> g, double delta, double correction_bound,
                         double global_bound, bool homogeneous, int regularity) {
  check_order(n, alpha);
  KernelSpec k;
  k.id = "custom";
  k.family = KernelFamily::custom;
  k.n = n;
  k.alpha = alpha;
  k.angular.evaluator = {std::move(g)};
  k.correction_exponent = delta;
  k.correction_bound = correction_bound;
  k.global_bound = global_bound;
  k.homogeneous = homogeneous;
  k.regularity = regularity;
  k.eval = [f = std::move(kfun)](const Point& x, double* out) { out[0] = f(x); };
  return k;
}

KernelSpec make_kernel(const std::string& name, int n, double alpha) {
  if (name == "riesz") return riesz_kernel(n, alpha);
  if (name == "gradient") return gradient_kernel(n, alpha);
  if (name.rfind("perturbed:", 0) == 0) {
    const std::string rest = name.substr(10);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("kernel id: expected perturbed:<delta>:<c>");
    try {
      return perturbed_kernel(n, alpha, std::stod(rest.substr(0, colon)), std::stod(rest.substr(colon + 1)));
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const std::invalid_argument*>(&e) && std::string(e.what()).rfind("perturbed", 0) == 0) throw;
      throw std::invalid_argument("kernel id: cannot parse '" + name + "'");
    }
  }
  throw std::invalid_argument("kernel id: unknown kernel '" + name + "'");
}

std::vector<double> eval_kernel(const KernelSpec& k, const Point& x) {
  if (norm(x, k.n) == 0.0) throw std::domain_error("eval_kernel: kernel is singular at the origin");
  std::vector<double> out(k.components);
  k.eval(x, out.data());
  return out;
}

double eval_scalar(const KernelSpec& k, const Point& x) {
  double v = 0.0;
  k.eval(x, &v);
  return v;
}

double ring_average(const KernelSpec& k, double t, double s) {
  if (k.components != 1) throw std::invalid_argument("ring_average: unsupported for vector kernels");
  if (t < 0.0 || s < 0.0 || (t == 0.0 && s == 0.0)) throw std::invalid_argument("ring_average: need (t, s) != (0, 0)");
  const int n = k.n;
  if (t == s && k.alpha <= n - 1) {
    throw std::domain_error("ring_average: the sphere integral diverges at t = s when alpha <= n - 1");
  }
  if (n == 1) {
    return eval_scalar(k, Point{t - s, 0, 0}) + eval_scalar(k, Point{t + s, 0, 0});
  }
  if (s == 0.0) {
    if (k.radial) return sphere_area(n) * eval_scalar(k, Point{t, 0, 0});
  }
  // t - s cos(phi) written without cancellation; points closer than
  // 1e-150 t to the singularity are dropped (integrable, negligible mass).
  auto along = [&](double phi) { const double h = std::sin(0.5 * phi); return (t - s) + 2.0 * s * h * h; };
  const double floor_dist = 1e-150 * std::max(t, s);
  if (n == 2) {
    auto f = [&](double phi) {
      const Point y{along(phi), -s * std::sin(phi), 0};
      return norm(y, 2) < floor_dist ? 0.0 : eval_scalar(k, y);
    };
    if (k.radial) return 2.0 * integrate_endpoint_singular(f, 0.0, kPi);
    return integrate_endpoint_singular(f, 0.0, kPi) + integrate_endpoint_singular(f, -kPi, 0.0);
  }
  // n == 3: polar angle measured from e_1, inner periodic rule in the azimuth.
  auto inner = [&](double theta) {
    const double st = std::sin(theta), x1 = along(theta);
    if (std::hypot(x1, s * st) < floor_dist) return 0.0;
    if (k.radial) return 2.0 * kPi * st * eval_scalar(k, Point{x1, -s * st, 0});
    const int m = 64;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      const double phi = 2.0 * kPi * i / m;
      acc += eval_scalar(k, Point{x1, -s * st * std::cos(phi), -s * st * std::sin(phi)});
    }
    return st * acc * 2.0 * kPi / m;
  };
  return integrate_endpoint_singular(inner, 0.0, kPi);
}

KernelSample make_kernel_sample(int n, double r_min, double r_max, int radii, int directions,
                                std::size_t pair_count, unsigned long long seed) {
  if (n < 1 || n > 3) throw std::invalid_argument("kernel sample: dimension must be 1, 2 or 3");
  if (radii < 2 || !(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("kernel sample: bad radius range");
  std::vector<Point> dirs;
  if (n == 1) {
    dirs = {Point{1, 0, 0}, Point{-1, 0, 0}};
  } else if (n == 2) {
    for (int i = 0; i < directions; ++i) {
      const double a = 2.0 * kPi * (i + 0.25) / directions;
      dirs.push_back(Point{std::cos(a), std::sin(a), 0});
    }
  } else {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < directions; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / directions;
      const double rho = std::sqrt(1.0 - z * z);
      dirs.push_back(Point{rho * std::cos(golden * i), rho * std::sin(golden * i), z});
    }
  }
  KernelSample s;
  s.n = n;
  for (int i = 0; i < radii; ++i) {
    const double r = r_min * std::pow(r_max / r_min, static_cast<double>(i) / (radii - 1));
    for (const auto& d : dirs) s.points.push_back(Point{r * d[0], r * d[1], r * d[2]});
  }
  std::mt19937_64 rng(seed);
  const std::size_t base = s.points.size();
  std::uniform_int_distribution<std::size_t> pick(0, base - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> logstep(-6.0, -1.0);
  for (std::size_t p = 0; p < pair_count; ++p) {
    const std::size_t a = pick(rng);
    if (p % 2 == 0) {
      std::size_t b = pick(rng);
      if (b == a) b = (a + 1) % base;
      s.pairs.emplace_back(a, b);
    } else {
      const Point& x = s.points[a];
      const double r = norm(x, n);
      const double h = r * std::pow(10.0, logstep(rng));
      Point y = x;
      for (int i = 0; i < n; ++i) y[i] += h * gauss(rng) / std::sqrt(static_cast<double>(n));
      if (norm(y, n) == 0.0) continue;
      s.points.push_back(y);
      s.pairs.emplace_back(a, s.points.size() - 1);
    }
  }
  return s;
}

ConditionReport verify_kernel_conditions(const KernelSpec& k, const KernelSample& sample, double slack) {
  const int n = k.n;
  const int m = k.components;
  const double e = k.alpha - n;
  for (const auto& x : sample.points) {
    if (norm(x, n) == 0.0) throw std::invalid_argument("verify_kernel_conditions: sample contains the origin");
  }
  std::vector<double> values(sample.points.size() * m);
  for (std::size_t i = 0; i < sample.points.size(); ++i) k.eval(sample.points[i], &values[i * m]);

  ConditionReport rep;
  bool any_near = false;
  for (const auto& x : sample.points) any_near = any_near || norm(x, n) <= 1.0;
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    const Point& x = sample.points[i];
    const double r = norm(x, n);
    const Point w = unit(x, n);
    for (int c = 0; c < m; ++c) {
      const double kv = values[i * m + c];
      rep.rl2_ratio = std::max(rep.rl2_ratio, std::abs(kv) * std::pow(r, -e));
      if (r <= 1.0 || !any_near) {
        const double lead = k.angular.evaluator[c](w) * std::pow(r, e);
        rep.rl1_ratio = std::max(rep.rl1_ratio, std::abs(kv - lead) / std::pow(r, e + k.correction_exponent));
      }
    }
  }
  for (const auto& [a, b] : sample.pairs) {
    const Point& x1 = sample.points[a];
    const Point& x2 = sample.points[b];
    Point d{};
    for (int i = 0; i < n; ++i) d[i] = x1[i] - x2[i];
    const double dist = norm(d, n);
    if (dist == 0.0) continue;
    const double scale = std::max(std::pow(norm(x1, n), e - 1.0), std::pow(norm(x2, n), e - 1.0));
    for (int c = 0; c < m; ++c) {
      const double q = std::abs(values[a * m + c] - values[b * m + c]) / (dist * scale);
      rep.rl3_ratio = std::max(rep.rl3_ratio, q);
    }
  }
  rep.rl1_pass = std::isfinite(rep.rl1_ratio) && rep.rl1_ratio <= k.correction_bound * slack + 1e-12;
  rep.rl2_pass = std::isfinite(rep.rl2_ratio) && rep.rl2_ratio <= k.global_bound * slack;
  rep.rl3_pass = std::isfinite(rep.rl3_ratio) &&
                 (std::isnan(k.angular.lipschitz_bound) || rep.rl3_ratio <= k.angular.lipschitz_bound * slack);
  rep.pass = rep.rl1_pass && rep.rl2_pass && rep.rl3_pass;
  return rep;
}

// ---------------------------------------------------------------------------
// Taylor terms

std::vector<MultiIndex> multi_indices(int n, int j) {
  std::vector<MultiIndex> out;
  if (n == 1) {
    out.push_back({j, 0, 0});
  } else if (n == 2) {
    for (int a = j; a >= 0; --a) out.push_back({a, j - a, 0});
  } else {
    for (int a = j; a >= 0; --a)
      for (int b = j - a; b >= 0; --b) out.push_back({a, b, j - a - b});
  }
  return out;
}

double TaylorTerm::evaluate(const Point& y, int component) const {
  double s = 0.0;
  for (const auto& [k, c] : coefficients.at(component)) {
    double mono = c;
    for (int i = 0; i < n; ++i) mono *= std::pow(y[i], k[i]);
    s += mono;
  }
  return s;
}

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

double multi_factorial(const MultiIndex& k) { return factorial(k[0]) * factorial(k[1]) * factorial(k[2]); }

double binom_general(double b, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (b - i) / (i + 1.0);
  return r;
}

using Poly = std::map<MultiIndex, double>;

// (a . y)^m expanded in monomials.
Poly linear_power(const Point& a, int m, int n) {
  Poly p;
  for (const auto& k : multi_indices(n, m)) {
    double c = factorial(m) / multi_factorial(k);
    for (int i = 0; i < n; ++i) c *= std::pow(a[i], k[i]);
    p[k] += c;
  }
  return p;
}

// (|y|^2)^l expanded in monomials.
Poly square_norm_power(int l, int n) {
  Poly p;
  for (const auto& k : multi_indices(n, l)) {
    MultiIndex d{2 * k[0], 2 * k[1], 2 * k[2]};
    p[d] += factorial(l) / multi_factorial(k);
  }
  return p;
}

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) out[{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}] += ca * cb;
  return out;
}

void check_taylor_args(const KernelSpec& k, const Point& x, int j) {
  if (j < 0) throw std::invalid_argument("taylor_term: negative degree");
  if (j > k.regularity) throw std::invalid_argument("taylor_term: unsupported degree above the declared regularity");
  if (norm(x, k.n) == 0.0) throw std::domain_error("taylor_term: base point must be nonzero");
}

}  // namespace

TaylorTerm taylor_term(const KernelSpec& k, const Point& x, int j) {
  check_taylor_args(k, x, j);
  if (k.family != KernelFamily::riesz) return taylor_term_finite_difference(k, x, j);
  const int n = k.n;
  const double r = norm(x, n);
  const Point w = unit(x, n);
  const double beta = 0.5 * (k.alpha - n);
  Poly total;
  for (int kk = (j + 1) / 2; kk <= j; ++kk) {
    const int m = 2 * kk - j;
    const double c = binom_general(beta, kk) * binom_general(kk, m) * std::pow(-2.0, m);
    const Poly term = multiply(linear_power(w, m, n), square_norm_power(j - kk, n));
    for (const auto& [key, v] : term) total[key] += c * v;
  }
  const double scale = std::pow(r, k.alpha - n - j);
  TaylorTerm t;
  t.degree = j;
  t.base_point = x;
  t.n = n;
  t.coefficients.resize(1);
  for (const auto& key : multi_indices(n, j)) {
    auto it = total.find(key);
    t.coefficients[0].emplace_back(key, it == total.end() ? 0.0 : it->second * scale);
  }
  return t;
}

namespace {

// Central O(h^2) stencils for derivative orders 0..3 (offset, weight).
const std::vector<std::pair<int, double>>& stencil(int order) {
  static const std::vector<std::pair<int, double>> s0 = {{0, 1.0}};
  static const std::vector<std::pair<int, double>> s1 = {{-1, -0.5}, {1, 0.5}};
  static const std::vector<std::pair<int, double>> s2 = {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
  static const std::vector<std::pair<int, double>> s3 = {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}};
  switch (order) {
    case 0: return s0;
    case 1: return s1;
    case 2: return s2;
    case 3: return s3;
    default: throw std::invalid_argument("finite differences: derivative order above 3 per axis");
  }
}

void mixed_partial(const KernelSpec& k, const Point& x, const MultiIndex& idx, double h, double* out) {
  const int m = k.components;
  std::vector<double> acc(m, 0.0), val(m);
  const auto& s0 = stencil(idx[0]);
  const auto& s1 = stencil(k.n > 1 ? idx[1] : 0);
  const auto& s2 = stencil(k.n > 2 ? idx[2] : 0);
  for (const auto& [o0, w0] : s0)
    for (const auto& [o1, w1] : s1)
      for (const auto& [o2, w2] : s2) {
        Point y = x;
        y[0] += o0 * h;
        if (k.n > 1) y[1] += o1 * h;
        if (k.n > 2) y[2] += o2 * h;
        k.eval(y, val.data());
        for (int c = 0; c < m; ++c) acc[c] += w0 * w1 * w2 * val[c];
      }
  const double scale = std::pow(h, idx[0] + idx[1] + idx[2]);
  for (int c = 0; c < m; ++c) out[c] = acc[c] / scale;
}

}  // namespace

TaylorTerm taylor_term_finite_difference(const KernelSpec& k, const Point& x, int j) {
  check_taylor_args(k, x, j);
  const int n = k.n;
  const int m = k.components;
  const double h = 5e-3 * norm(x, n);
  TaylorTerm t;
  t.degree = j;
  t.base_point = x;
  t.n = n;
  t.coefficients.resize(m);
  std::vector<double> coarse(m), fine(m);
  for (const auto& idx : multi_indices(n, j)) {
    mixed_partial(k, x, idx, h, coarse.data());
    mixed_partial(k, x, idx, 0.5 * h, fine.data());
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    for (int c = 0; c < m; ++c) {
      const double d = (4.0 * fine[c] - coarse[c]) / 3.0;
      t.coefficients[c].emplace_back(idx, sign * d / multi_factorial(idx));
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Constants

double constant_c_alpha(int n, double alpha) {
  if (n < 1) throw std::domain_error("constant_c_alpha: dimension must be positive");
  if (!(alpha > 0.0 && alpha < n)) throw std::domain_error("constant_c_alpha: order must lie in (0, n)");
  return gamma_fn(0.5 * (n - alpha)) / (std::pow(2.0, alpha) * std::pow(kPi, 0.5 * n) * gamma_fn(0.5 * alpha));
}

double constant_A_g_quadrature(const KernelSpec& k) {
  const int n = k.n;
  const double p = n / (n - k.alpha);
  auto length = [&](const Point& w) {
    double s = 0.0;
    for (const auto& g : k.angular.evaluator) {
      const double v = g(w);
      s += v * v;
    }
    return std::pow(std::sqrt(s), p);
  };
  if (n == 1) return length(Point{1, 0, 0}) + length(Point{-1, 0, 0});
  if (n == 2) {
    const int m = 256;
    std::vector<double> v(m);
    for (int i = 0; i < m; ++i) {
      const double a = 2.0 * kPi * i / m;
      v[i] = length(Point{std::cos(a), std::sin(a), 0});
    }
    return pairwise_sum(v) * (2.0 * kPi / m) / n;
  }
  const GaussRule& gl = gauss_legendre(64);
  const int m = 128;
  std::vector<double> v;
  v.reserve(gl.nodes.size() * m);
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double z = gl.nodes[i];
    const double rho = std::sqrt(1.0 - z * z);
    for (int j = 0; j < m; ++j) {
      const double a = 2.0 * kPi * j / m;
      v.push_back(gl.weights[i] * length(Point{rho * std::cos(a), rho * std::sin(a), z}));
    }
  }
  return pairwise_sum(v) * (2.0 * kPi / m) / n;
}

double constant_A_g(const KernelSpec& k) {
  if (k.angular.constant_length) {
    return ball_volume(k.n) * std::pow(k.angular.constant_length_value, k.n / (k.n - k.alpha));
  }
  return constant_A_g_quadrature(k);
}

double constant_gamma(OperatorChoice p, int n, double alpha) {
  if (!(alpha > 0.0 && alpha < n)) throw std::domain_error("constant_gamma: order must lie in (0, n)");
  const double e = -static_cast<double>(n) / (n - alpha);
  if (p == OperatorChoice::fractional_laplacian) {
    return std::pow(constant_c_alpha(n, alpha), e) / ball_volume(n);
  }
  const bool odd_integer = alpha == std::floor(alpha) && static_cast<long>(alpha) % 2 == 1;
  if (!odd_integer) throw std::domain_error("constant_gamma: gradient_power is unsupported unless alpha is odd");
  return std::pow(gradient_prefactor(n, alpha), e) / ball_volume(n);
}

}  // namespace adamsq
