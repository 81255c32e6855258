#include "adamsq/extremal.hpp"

#include "adamsq/special.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace adamsq {

namespace {

// Integral over S^{n-1} of fn(w).
template <class Fn>
double sphere_integral(int n, Fn fn) {
  if (n == 1) return fn(Point{1, 0, 0}) + fn(Point{-1, 0, 0});
  if (n == 2) {
    const int m = 256;
    std::vector<double> v(m);
    for (int i = 0; i < m; ++i) {
      const double a = 2.0 * kPi * i / m;
      v[i] = fn(Point{std::cos(a), std::sin(a), 0});
    }
    return pairwise_sum(v) * 2.0 * kPi / m;
  }
  const GaussRule& gl = gauss_legendre(48);
  const int m = 96;
  std::vector<double> v;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double z = gl.nodes[i], rho = std::sqrt(1.0 - z * z);
    for (int j = 0; j < m; ++j) {
      const double a = 2.0 * kPi * j / m;
      v.push_back(gl.weights[i] * fn(Point{rho * std::cos(a), rho * std::sin(a), z}));
    }
  }
  return pairwise_sum(v) * 2.0 * kPi / m;
}

double kernel_length(const KernelSpec& k, const Point& y) {
  const auto v = eval_kernel(k, y);
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

}  // namespace

double b_r_constant(const KernelSpec& k, double r) {
  if (!(r > 0.0)) throw std::domain_error("b_r_constant: r must be positive");
  if (r == 1.0) return 0.0;
  if (k.homogeneous && k.angular.constant_length) return k.n * constant_A_g(k) * std::log(r);
  const double p = k.n / (k.n - k.alpha);
  // Composite Gauss-Legendre in log(rho) with panels of width <= 1/2.
  const double L = std::log(r);
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(L) / 0.5)));
  const GaussRule& gl = gauss_legendre(16);
  KahanSum sum;
  for (int i = 0; i < panels; ++i) {
    const double a = L * i / panels, b = L * (i + 1) / panels;
    for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
      const double s = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[g];
      const double rho = std::exp(s);
      const double shell = sphere_integral(k.n, [&](const Point& w) {
        return std::pow(kernel_length(k, Point{rho * w[0], rho * w[1], rho * w[2]}), p);
      });
      sum.add(0.5 * (b - a) * gl.weights[g] * shell * std::pow(rho, k.n));
    }
  }
  return sum.value();
}

ExtremalSpec make_extremal_spec(const KernelSpec& k, double epsilon, double r, double q) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("extremal: epsilon must lie in (0, 1)");
  if (!(r > 0.0)) throw std::domain_error("extremal: r must be positive");
  if (!(epsilon * r < 1.0)) throw std::domain_error("extremal: need eps * r < 1");
  if (!(q >= 1.0)) throw std::domain_error("extremal: q must be at least 1");
  ExtremalSpec s;
  s.n = k.n;
  s.alpha = k.alpha;
  s.epsilon = epsilon;
  s.r = r;
  s.q = q;
  s.A_g = constant_A_g(k);
  s.b_r = b_r_constant(k, r);
  s.b_eps_r = s.A_g * k.n * (std::log(1.0 / epsilon) - std::log(r)) + s.b_r;
  return s;
}

namespace {

std::vector<double> profile_edges(const ExtremalSpec& spec, const ProfileGrid& grid) {
  const double decades = std::log10(1.0 / spec.epsilon);
  const int M = std::max(1, static_cast<int>(std::ceil(grid.cells_per_decade * decades - 1e-9)));
  const double log_q = std::log(1.0 / spec.epsilon) / M;
  const int below = static_cast<int>(std::ceil(grid.decades_below * std::log(10.0) / log_q - 1e-9));
  const double lo = spec.epsilon * spec.r;
  std::vector<double> e;
  e.push_back(0.0);
  for (int i = -below; i <= M; ++i) e.push_back(lo * std::exp(log_q * i));
  e[1 + below] = lo;
  e.back() = spec.r;
  return e;
}

}  // namespace

SampledFunction adams_profile(const KernelSpec& k, const ExtremalSpec& spec, const ProfileGrid& grid) {
  if (k.components != 1 || !k.radial) {
    throw std::invalid_argument("adams_profile: radial scalar kernel required; use adams_profile_cartesian");
  }
  if (!(spec.epsilon * spec.r < 1.0)) throw std::domain_error("adams_profile: need eps * r < 1");
  const auto edges = profile_edges(spec, grid);
  const int n = k.n;
  const double a = k.alpha;
  const double lo = spec.epsilon * spec.r;
  std::vector<double> values(edges.size() - 1, 0.0);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double e0 = edges[i], e1 = edges[i + 1];
    if (e0 < lo * (1.0 - 1e-12) || e1 > spec.r * (1.0 + 1e-12)) continue;
    if (k.family == KernelFamily::riesz) {
      // Shell average of |y|^{-alpha}.
      const double shell = (std::pow(e1, n) - std::pow(e0, n)) / n;
      values[i] = (std::pow(e1, n - a) - std::pow(e0, n - a)) / (n - a) / shell;
    } else {
      const double rho = std::sqrt(e0 * e1);
      const double kv = eval_scalar(k, Point{rho, 0, 0});
      values[i] = kv * std::pow(std::abs(kv), a / (n - a) - 1.0);
    }
  }
  return make_radial_values(n, edges, std::move(values));
}

SampledFunction adams_profile_cartesian(const KernelSpec& k, const ExtremalSpec& spec, double half_width,
                                        int grid_points) {
  if (!(spec.epsilon * spec.r < 1.0)) throw std::domain_error("adams_profile: need eps * r < 1");
  const double lo = spec.epsilon * spec.r;
  const double e = k.alpha / (k.n - k.alpha) - 1.0;
  return make_cartesian(
      k.n, half_width, grid_points,
      [&](const Point& y) {
        std::vector<double> out(k.components, 0.0);
        const double rho = norm(y, k.n);
        if (rho <= lo || rho > spec.r) return out;
        const Point my{-y[0], -y[1], -y[2]};
        const auto v = eval_kernel(k, my);
        double len = 0.0;
        for (double c : v) len += c * c;
        len = std::sqrt(len);
        for (int c = 0; c < k.components; ++c) out[c] = v[c] * std::pow(len, e);
        return out;
      },
      k.components);
}

// ---------------------------------------------------------------------------
// Polynomials on balls

double ball_monomial_integral(int n, const MultiIndex& k, double r) {
  int total = 0;
  double prod = 1.0;
  for (int i = 0; i < n; ++i) {
    if (k[i] % 2 != 0) return 0.0;
    total += k[i];
    prod *= gamma_fn(0.5 * (k[i] + 1.0));
  }
  return 2.0 * prod / gamma_fn(0.5 * (total + n)) * std::pow(r, total + n) / (total + n);
}

double BallPolyBasis::evaluate(std::size_t k, const Point& y) const {
  double s = 0.0;
  for (std::size_t j = 0; j < monomials.size(); ++j) {
    double mono = coefficients[k][j];
    if (mono == 0.0) continue;
    for (int i = 0; i < n; ++i) mono *= std::pow(y[i], monomials[j][i]);
    s += mono;
  }
  return s;
}

double BallPolyBasis::evaluate_radial(std::size_t k, double rho) const {
  double s = 0.0;
  for (std::size_t j = 0; j < radial_coefficients[k].size(); ++j) s += radial_coefficients[k][j] * std::pow(rho, 2.0 * j);
  return s;
}

namespace {

// Rows of the inverse Cholesky factor: orthonormal combinations.
std::vector<std::vector<double>> orthonormalize(const Eigen::MatrixXd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    std::ostringstream msg;
    msg << "ball_poly_basis: Gram matrix condition " << hi / lo << " exceeds 1e12 (precision error)";
    throw std::runtime_error(msg.str());
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(gram.rows(), gram.cols()));
  std::vector<std::vector<double>> out(C.rows(), std::vector<double>(C.cols()));
  for (int i = 0; i < C.rows(); ++i)
    for (int j = 0; j < C.cols(); ++j) out[i][j] = C(i, j);
  return out;
}

}  // namespace

BallPolyBasis ball_poly_basis(int n, int m, double r) {
  if (n < 1 || n > 3) throw std::invalid_argument("ball_poly_basis: dimension must be 1, 2 or 3");
  if (m < 0 || m > n) throw std::invalid_argument("ball_poly_basis: degree must lie in [0, n]");
  if (!(r > 0.0)) throw std::invalid_argument("ball_poly_basis: radius must be positive");
  BallPolyBasis b;
  b.n = n;
  b.m = m;
  b.r = r;
  for (int d = 0; d <= m; ++d)
    for (const auto& k : multi_indices(n, d)) b.monomials.push_back(k);
  const int K = static_cast<int>(b.monomials.size());
  // Work on the unit ball, then rescale: v^r(y) = r^{-n/2} v(y/r).
  Eigen::MatrixXd gram(K, K);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) {
      const MultiIndex s{b.monomials[i][0] + b.monomials[j][0], b.monomials[i][1] + b.monomials[j][1],
                         b.monomials[i][2] + b.monomials[j][2]};
      gram(i, j) = ball_monomial_integral(n, s, 1.0);
    }
  b.coefficients = orthonormalize(gram);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) {
      const int deg = b.monomials[j][0] + b.monomials[j][1] + b.monomials[j][2];
      b.coefficients[i][j] *= std::pow(r, -0.5 * n - deg);
    }
  const int R = m / 2 + 1;
  const double omega = sphere_area(n);
  Eigen::MatrixXd rgram(R, R);
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j) rgram(i, j) = omega / (n + 2.0 * (i + j));
  b.radial_coefficients = orthonormalize(rgram);
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j) b.radial_coefficients[i][j] *= std::pow(r, -0.5 * n - 2.0 * j);
  return b;
}

namespace {

// Cell averages of the basis functions (restricted to B_r); rows = basis index.
std::vector<std::vector<double>> cell_averages(const SampledFunction& f, const BallPolyBasis& b, bool radial_only) {
  std::vector<std::vector<double>> V;
  if (f.layout == Layout::radial) {
    const std::size_t K = radial_only ? b.radial_coefficients.size() : b.coefficients.size();
    V.assign(K, std::vector<double>(f.size(), 0.0));
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double a = f.edges[i], e = std::min(f.edges[i + 1], b.r);
      if (!(e > a)) continue;
      for (std::size_t k = 0; k < K; ++k) {
        double integral = 0.0;
        if (radial_only) {
          for (std::size_t j = 0; j < b.radial_coefficients[k].size(); ++j) {
            const double pw = f.n + 2.0 * j;
            integral += b.radial_coefficients[k][j] * sphere_area(f.n) * (std::pow(e, pw) - std::pow(a, pw)) / pw;
          }
        } else {
          for (std::size_t j = 0; j < b.monomials.size(); ++j) {
            integral += b.coefficients[k][j] * (ball_monomial_integral(f.n, b.monomials[j], e) -
                                                ball_monomial_integral(f.n, b.monomials[j], a));
          }
        }
        V[k][i] = integral / f.weights[i];
      }
    }
    return V;
  }
  V.assign(b.coefficients.size(), std::vector<double>(f.size(), 0.0));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (norm(f.nodes[i], f.n) > b.r) continue;
    for (std::size_t k = 0; k < b.coefficients.size(); ++k) V[k][i] = b.evaluate(k, f.nodes[i]);
  }
  return V;
}

void check_support(const SampledFunction& f, double r) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.magnitude(i) == 0.0) continue;
    const bool outside =
        f.layout == Layout::radial ? f.edges[i + 1] > r * (1.0 + 1e-12) : norm(f.nodes[i], f.n) > r;
    if (outside) throw std::domain_error("moment_normalize: support exceeds the basis ball");
  }
}

}  // namespace

SampledFunction moment_normalize(const SampledFunction& f, const BallPolyBasis& basis) {
  if (f.n != basis.n) throw std::invalid_argument("moment_normalize: dimension mismatch");
  check_support(f, basis.r);
  const bool radial = f.layout == Layout::radial;
  const auto V = cell_averages(f, basis, radial);
  const int K = static_cast<int>(V.size());
  Eigen::MatrixXd G(K, K);
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b) {
      KahanSum s;
      for (std::size_t i = 0; i < f.size(); ++i) s.add(f.weights[i] * V[a][i] * V[b][i]);
      G(a, b) = s.value();
    }
  const Eigen::LDLT<Eigen::MatrixXd> solver(G);
  SampledFunction out = f;
  for (int c = 0; c < f.components; ++c) {
    Eigen::VectorXd rhs(K);
    for (int a = 0; a < K; ++a) {
      KahanSum s;
      for (std::size_t i = 0; i < f.size(); ++i) s.add(f.weights[i] * f.value(i, c) * V[a][i]);
      rhs(a) = s.value();
    }
    const Eigen::VectorXd coef = solver.solve(rhs);
    for (std::size_t i = 0; i < f.size(); ++i) {
      double proj = 0.0;
      for (int a = 0; a < K; ++a) proj += coef(a) * V[a][i];
      out.values[i * f.components + c] -= proj;
    }
  }
  out.refresh_support();
  return out;
}

std::vector<double> basis_moments(const SampledFunction& f, const BallPolyBasis& basis) {
  const auto V = cell_averages(f, basis, false);
  std::vector<double> m(V.size());
  for (std::size_t k = 0; k < V.size(); ++k) {
    KahanSum s;
    for (std::size_t i = 0; i < f.size(); ++i) s.add(f.weights[i] * f.value(i) * V[k][i]);
    m[k] = s.value();
  }
  return m;
}

// ---------------------------------------------------------------------------
// Schedules and normalization

namespace {

bool regime_holds(const KernelSpec& k, double eps, double q, double C1, ExtremalSpec* out) {
  const double L = k.n * std::log(1.0 / eps);
  const double inv_qp = std::isinf(q) ? 1.0 : 1.0 - 1.0 / q;
  const double rn = constant_A_g(k) / (2.0 * C1) * std::pow(L, inv_qp);
  const double r = std::pow(rn, 1.0 / k.n);
  if (!(eps * r < 1.0)) return false;
  const ExtremalSpec s = make_extremal_spec(k, eps, r, q);
  const double bound = std::isinf(q) ? 1.0 : std::pow(L, -1.0 / q);
  const bool ok = s.b_eps_r >= 0.5 * s.A_g * L && C1 * rn / s.b_eps_r <= bound * (1.0 + 1e-12);
  if (out != nullptr) *out = s;
  return ok;
}

}  // namespace

ExtremalSpec schedule_parameters(const KernelSpec& k, double epsilon, double q, double C1, double theta) {
  if (!(C1 > 0.0)) throw std::invalid_argument("schedule_parameters: C_1 must be positive");
  if (!(q >= 1.0)) throw std::invalid_argument("schedule_parameters: q must be at least 1");
  if (std::isfinite(theta)) {
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("schedule_parameters: theta must lie in (0, 1)");
    epsilon = std::exp(-1.0 / ((1.0 - theta) * k.n));
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("schedule_parameters: epsilon must lie in (0, 1)");
  ExtremalSpec s;
  if (!regime_holds(k, epsilon, q, C1, &s)) {
    // Bisect in log(eps) for the largest epsilon that passes the checks.
    double lo = std::log(1e-300), hi = std::log(epsilon);
    if (!regime_holds(k, std::exp(lo), q, C1, nullptr)) {
      throw ScheduleError("schedule_parameters: epsilon not small enough and no threshold found", 0.0);
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (regime_holds(k, std::exp(mid), q, C1, nullptr) ? lo : hi) = mid;
    }
    std::ostringstream msg;
    msg << "schedule_parameters: epsilon not small enough; the regime checks hold for epsilon <= " << std::exp(lo);
    throw ScheduleError(msg.str(), std::exp(lo));
  }
  s.C1 = C1;
  s.theta = theta;
  return s;
}

double ruf_scale(double f_norm, double tf_norm, double q, int n, double alpha) {
  if (f_norm == 0.0 && tf_norm == 0.0) throw std::domain_error("ruf_normalize: zero input");
  return 1.0 / q_norm(f_norm, tf_norm, q, n, alpha);
}

RufNormalized ruf_normalize(const SampledFunction& f_tilde, double tf_norm, double q, double alpha) {
  const double a = lp_norm(f_tilde, f_tilde.n / alpha);
  RufNormalized r;
  r.scale = ruf_scale(a, tf_norm, q, f_tilde.n, alpha);
  r.psi = f_tilde;
  for (auto& v : r.psi.values) v *= r.scale;
  return r;
}

// ---------------------------------------------------------------------------
// Moser profiles

MoserProfile moser_profile(double epsilon, MoserDomain domain, int n, MoserVariant variant) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::domain_error("moser_profile: epsilon must lie in (0, 1/2)");
  if (n < 1 || n > 3) throw std::invalid_argument("moser_profile: dimension must be 1, 2 or 3");
  MoserProfile p;
  p.n = n;
  p.epsilon = epsilon;
  p.domain = domain;
  p.variant = variant;
  return p;
}

double MoserProfile::value(double rho) const {
  if (variant == MoserVariant::capped_log) {
    if (rho < epsilon) return std::log(1.0 / epsilon);
    return rho < 1.0 ? std::log(1.0 / rho) : 0.0;
  }
  if (rho <= epsilon) return n * std::log(1.0 / epsilon);
  if (rho <= 0.5) return n * std::log(1.0 / rho);
  if (rho <= 0.75) return n * std::log(2.0) * (0.75 - rho) * 4.0;
  return 0.0;
}

double MoserProfile::gradient(double rho) const {
  if (variant == MoserVariant::capped_log) return (rho >= epsilon && rho < 1.0) ? 1.0 / rho : 0.0;
  if (rho <= epsilon) return 0.0;
  if (rho <= 0.5) return n / rho;
  if (rho <= 0.75) return 4.0 * n * std::log(2.0);
  return 0.0;
}

double MoserProfile::lp_power(double p) const {
  const double c = domain_fraction() * sphere_area(n);
  const double plateau = std::pow(value(0.0), p) * std::pow(epsilon, n) / n;
  // Log piece in s = log(1/rho).
  const double top = variant == MoserVariant::capped_log ? 1.0 : 0.5;
  const double scale = variant == MoserVariant::capped_log ? 1.0 : n;
  auto log_piece = [&](double s) { return std::pow(scale * s, p) * std::exp(-n * s); };
  double total = plateau + integrate_adaptive(log_piece, std::log(1.0 / top), std::log(1.0 / epsilon), 1e-12);
  if (variant == MoserVariant::smoothed) {
    total += integrate_adaptive([&](double rho) { return std::pow(value(rho), p) * std::pow(rho, n - 1); }, 0.5, 0.75,
                                1e-12);
  }
  return c * total;
}

double MoserProfile::gradient_lp_power(double p) const {
  const double c = domain_fraction() * sphere_area(n);
  const double top = variant == MoserVariant::capped_log ? 1.0 : 0.5;
  const double scale = variant == MoserVariant::capped_log ? 1.0 : n;
  // Integral of (scale/rho)^p rho^{n-1} over [eps, top].
  const double e = n - p;
  const double core =
      std::pow(scale, p) * (e == 0.0 ? std::log(top / epsilon) : (std::pow(top, e) - std::pow(epsilon, e)) / e);
  double total = core;
  if (variant == MoserVariant::smoothed) {
    total += std::pow(4.0 * n * std::log(2.0), p) * (std::pow(0.75, n) - std::pow(0.5, n)) / n;
  }
  return c * total;
}

SampledFunction MoserProfile::sample(int cells_per_decade) const {
  const double outer = outer_radius();
  const int cells = std::max(4, static_cast<int>(std::ceil(cells_per_decade * std::log10(outer / epsilon))));
  auto edges = geometric_edges(epsilon, outer, cells, true);
  SampledFunction f = make_radial(n, edges, [&](double rho) { return value(rho); });
  for (auto& w : f.weights) w *= domain_fraction();
  return f;
}

}  // namespace adamsq
