#include "adamsq/extremal.hpp"
#include "adamsq/field.hpp"
#include "adamsq/kernel.hpp"
#include "adamsq/special.hpp"

#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

using namespace adamsq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const double pi = std::acos(-1.0);

// Integral of y^k over B_r from the Beta-function formula, written out
// independently of the library.
double monomial_oracle(int n, const MultiIndex& k, double r) {
  double prod = 1.0;
  int deg = 0;
  for (int d = 0; d < n; ++d) {
    if (k[d] % 2 != 0) return 0.0;
    prod *= std::tgamma(0.5 * (k[d] + 1));
    deg += k[d];
  }
  return 2.0 * prod / std::tgamma(0.5 * (n + deg)) * std::pow(r, n + deg) / (n + deg);
}

double inner_product_oracle(const BallPolyBasis& b, std::size_t a, std::size_t c) {
  double s = 0.0;
  for (std::size_t i = 0; i < b.monomials.size(); ++i) {
    for (std::size_t j = 0; j < b.monomials.size(); ++j) {
      MultiIndex sum{};
      for (int d = 0; d < 3; ++d) sum[d] = b.monomials[i][d] + b.monomials[j][d];
      s += b.coefficients[a][i] * b.coefficients[c][j] * monomial_oracle(b.n, sum, b.r);
    }
  }
  return s;
}
}  // namespace

TEST_CASE("Adams profile norms") {
  const auto k = riesz_kernel(2, 1.0);
  // Cell values are shell averages of |y|^{-1}; the Jensen deficit of the
  // squared norm is about (log q)^2 / 12 relative, below 1e-6 at this spacing.
  const ProfileGrid fine{1024, 2.0};
  const auto phi = adams_profile(k, make_extremal_spec(k, 0.1, 1.0), fine);
  REQUIRE_THAT(std::pow(lp_norm(phi, 2.0), 2), WithinRel(2.0 * pi * std::log(10.0), 1e-6));
  for (double eps : {1e-2, 1e-3}) {
    for (int n = 1; n <= 3; ++n) {
      const double alpha = 0.5 * n;
      const auto kn = riesz_kernel(n, alpha);
      const auto f = adams_profile(kn, make_extremal_spec(kn, eps, 1.0), fine);
      REQUIRE_THAT(std::pow(lp_norm(f, n / alpha), n / alpha), WithinRel(sphere_area(n) * std::log(1.0 / eps), 1e-6));
    }
  }
  REQUIRE(phi.support_radius == 1.0);
  REQUIRE_THROWS_AS(make_extremal_spec(k, 0.5, 2.0), std::domain_error);
}

TEST_CASE("vector profile length") {
  const auto k = gradient_kernel(2, 1.0);
  const auto spec = make_extremal_spec(k, 0.1, 1.0);
  const auto f = adams_profile_cartesian(k, spec, 1.0, 64);
  REQUIRE(f.components == 2);
  int inside = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double rho = norm(f.nodes[i], 2);
    if (rho <= 0.1 || rho > 1.0) {
      REQUIRE(f.magnitude(i) == 0.0);
      continue;
    }
    ++inside;
    const Point minus{-f.nodes[i][0], -f.nodes[i][1], 0};
    const auto kv = eval_kernel(k, minus);
    const double len = std::hypot(kv[0], kv[1]);
    REQUIRE_THAT(f.magnitude(i), WithinRel(std::pow(len, 1.0 / (2.0 - 1.0)), 1e-12));
  }
  REQUIRE(inside > 1000);
}

TEST_CASE("orthonormal ball polynomials") {
  SECTION("Legendre on the interval") {
    const auto b = ball_poly_basis(1, 1, 1.0);
    REQUIRE(b.coefficients.size() == 2);
    REQUIRE_THAT(b.evaluate(0, Point{0.3, 0, 0}), WithinRel(1.0 / std::sqrt(2.0), 1e-14));
    REQUIRE_THAT(std::abs(b.evaluate(1, Point{0.3, 0, 0})), WithinRel(std::sqrt(1.5) * 0.3, 1e-14));
  }
  SECTION("constant element") {
    for (int n = 1; n <= 3; ++n) {
      for (double r : {0.5, 1.0, 3.0}) {
        const auto b = ball_poly_basis(n, n - 1, r);
        REQUIRE_THAT(std::abs(b.evaluate(0, Point{0.1 * r, 0, 0})),
                     WithinRel(1.0 / std::sqrt(ball_volume(n) * std::pow(r, n)), 1e-13));
      }
    }
  }
  SECTION("Gram identity") {
    for (int n = 1; n <= 3; ++n) {
      for (int m = 0; m <= n; ++m) {
        const auto b = ball_poly_basis(n, m, 2.0);
        for (std::size_t a = 0; a < b.coefficients.size(); ++a)
          for (std::size_t c = 0; c < b.coefficients.size(); ++c)
            REQUIRE_THAT(inner_product_oracle(b, a, c), WithinAbs(a == c ? 1.0 : 0.0, 1e-10));
      }
    }
    for (int n = 1; n <= 3; ++n)
      for (const auto& k : multi_indices(n, 2))
        REQUIRE_THAT(ball_monomial_integral(n, k, 1.7), WithinRel(monomial_oracle(n, k, 1.7), 1e-13));
  }
  SECTION("Gram identity, seeded Monte Carlo") {
    const auto b = ball_poly_basis(2, 2, 2.0);
    const std::size_t K = b.coefficients.size();
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> acc(K * K, 0.0);
    const int draws = 1000000;
    for (int s = 0; s < draws; ++s) {
      const Point y{u(rng), u(rng), 0};
      if (y[0] * y[0] + y[1] * y[1] > 4.0) continue;
      for (std::size_t a = 0; a < K; ++a)
        for (std::size_t c = 0; c < K; ++c) acc[a * K + c] += b.evaluate(a, y) * b.evaluate(c, y);
    }
    // Square of side 4; the standard error is a few 1e-3 at this sample size.
    for (std::size_t a = 0; a < K; ++a)
      for (std::size_t c = 0; c < K; ++c)
        REQUIRE_THAT(16.0 * acc[a * K + c] / draws, WithinAbs(a == c ? 1.0 : 0.0, 2e-2));
  }
  SECTION("projection kernel scaling") {
    const auto b1 = ball_poly_basis(2, 2, 1.0), b2 = ball_poly_basis(2, 2, 2.5);
    const Point y{0.3, -0.2, 0}, z{-0.1, 0.4, 0};
    double p1 = 0.0, p2 = 0.0;
    for (std::size_t a = 0; a < b1.coefficients.size(); ++a) {
      p1 += b1.evaluate(a, y) * b1.evaluate(a, z);
      p2 += b2.evaluate(a, Point{2.5 * y[0], 2.5 * y[1], 0}) * b2.evaluate(a, Point{2.5 * z[0], 2.5 * z[1], 0});
    }
    REQUIRE_THAT(p2, WithinRel(p1 / (2.5 * 2.5), 1e-12));
  }
}

TEST_CASE("moment normalization") {
  const auto k = riesz_kernel(2, 1.0);
  const auto basis = ball_poly_basis(2, 1, 1.0);
  SECTION("constant is annihilated") {
    const auto c = radial_grid(2, 1.0, [](double) { return 1.0 / std::sqrt(pi); }, 64);
    const auto z = moment_normalize(c, basis);
    for (double v : z.values) REQUIRE(std::abs(v) <= 1e-12);
  }
  SECTION("already orthogonal input is unchanged") {
    const auto f = make_radial_values(2, {0.0, std::sqrt(0.5), 1.0}, {1.0, -1.0});
    const auto g = moment_normalize(f, basis);
    for (std::size_t i = 0; i < f.size(); ++i) REQUIRE_THAT(g.values[i], WithinAbs(f.values[i], 1e-12));
  }
  SECTION("Adams profile at eps = 0.05") {
    const auto phi = adams_profile(k, make_extremal_spec(k, 0.05, 1.0));
    const auto t = moment_normalize(phi, basis);
    // Oracle: the zeroth moment summed shell by shell; first moments vanish by symmetry.
    KahanSum mass, l1;
    for (std::size_t i = 0; i < t.size(); ++i) {
      mass.add(t.values[i] * pi * (t.edges[i + 1] * t.edges[i + 1] - t.edges[i] * t.edges[i]));
      l1.add(std::abs(phi.values[i]) * phi.weights[i]);
    }
    REQUIRE(std::abs(mass.value()) <= 1e-9 * l1.value());
    for (double m : basis_moments(t, basis)) REQUIRE(std::abs(m) <= 1e-9 * l1.value());
  }
  SECTION("cartesian vector data") {
    const auto kg = gradient_kernel(2, 1.0);
    const auto f = adams_profile_cartesian(kg, make_extremal_spec(kg, 0.2, 1.0), 1.0, 48);
    const auto g = moment_normalize(f, basis);
    for (std::size_t a = 0; a < basis.coefficients.size(); ++a) {
      for (int c = 0; c < 2; ++c) {
        KahanSum s;
        double l1 = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (norm(g.nodes[i], 2) > 1.0) continue;
          s.add(g.weights[i] * g.value(i, c) * basis.evaluate(a, g.nodes[i]));
          l1 += g.weights[i] * std::abs(f.value(i, c));
        }
        REQUIRE(std::abs(s.value()) <= 1e-9 * l1 * 2.0);
      }
    }
  }
  SECTION("support check") {
    const auto wide = radial_grid(2, 2.0, [](double) { return 1.0; }, 16);
    REQUIRE_THROWS_AS(moment_normalize(wide, basis), std::domain_error);
  }
}

TEST_CASE("parameter schedules") {
  const auto k = riesz_kernel(2, 1.0);
  const double C1 = 20.0, A = pi;
  SECTION("q = 1 keeps r fixed") {
    for (double eps : {1e-3, 1e-6}) {
      const auto s = schedule_parameters(k, eps, 1.0, C1);
      REQUIRE_THAT(s.r * s.r, WithinRel(A / (2.0 * C1), 1e-12));
    }
  }
  SECTION("q = infinity") {
    const double eps = 1e-4;
    const auto s = schedule_parameters(k, eps, kInfinity, C1);
    REQUIRE_THAT(s.r * s.r, WithinRel(A / (2.0 * C1) * std::log(1.0 / (eps * eps)), 1e-12));
  }
  SECTION("theta fixes epsilon") {
    const auto s = schedule_parameters(k, 0.5, 2.0, C1, 0.9);
    REQUIRE_THAT(std::pow(s.epsilon, 2), WithinRel(std::exp(-10.0), 1e-12));
    REQUIRE(s.theta == 0.9);
  }
  SECTION("too large epsilon reports a threshold") {
    try {
      schedule_parameters(k, 0.9, 1.0, 0.5);
      FAIL("expected a schedule error");
    } catch (const ScheduleError& e) {
      REQUIRE(e.epsilon_threshold > 0.0);
      REQUIRE(e.epsilon_threshold < 0.9);
      REQUIRE_NOTHROW(schedule_parameters(k, 0.5 * e.epsilon_threshold, 1.0, 0.5));
    }
  }
}

TEST_CASE("Ruf normalization") {
  REQUIRE(ruf_scale(1.0, 0.0, 1.0, 2, 1.0) == 1.0);
  REQUIRE_THAT(ruf_scale(1.0, 1.0, 1.0, 2, 1.0), WithinRel(1.0 / std::sqrt(2.0), 1e-15));
  REQUIRE_THAT(ruf_scale(0.4, 0.9, kInfinity, 2, 1.0), WithinRel(1.0 / 0.9, 1e-15));
  REQUIRE_THROWS_AS(ruf_scale(0.0, 0.0, 2.0, 2, 1.0), std::domain_error);
  const auto f = radial_grid(2, 1.0, [](double r) { return 2.0 - r; }, 64);
  for (double q : {1.0, 3.0, kInfinity}) {
    const auto out = ruf_normalize(f, 0.7, q, 1.0);
    REQUIRE_THAT(q_norm(lp_norm(out.psi, 2.0), 0.7 * out.scale, q, 2, 1.0), WithinRel(1.0, 1e-10));
  }
}

TEST_CASE("b_r constants") {
  for (int n = 1; n <= 3; ++n) REQUIRE(b_r_constant(riesz_kernel(n, 0.5), 1.0) == 0.0);
  REQUIRE_THAT(b_r_constant(riesz_kernel(2, 1.0), std::exp(1.0)), WithinRel(2.0 * pi, 1e-12));
  SECTION("homogeneous kernels of constant length") {
    for (int n = 2; n <= 3; ++n) {
      const auto k = gradient_kernel(n, 1.0);
      for (double r : {1.5, 4.0}) {
        REQUIRE_THAT(b_r_constant(k, r), WithinRel(n * constant_A_g(k) * std::log(r), 1e-10));
        REQUIRE_THAT(b_r_constant(k, r), WithinRel(n * constant_A_g_quadrature(k) * std::log(r), 1e-8));
      }
    }
  }
  SECTION("non-homogeneous kernel grows like log r") {
    const auto k = perturbed_kernel(2, 1.0, 1.0, 0.5);
    double prev = 0.0;
    for (double r : {2.0, 4.0, 8.0, 16.0}) {
      const double b = b_r_constant(k, r);
      REQUIRE(b > prev);
      REQUIRE(b <= 2.0 * pi * 1.5 * 1.5 * std::log(r) * (1 + 1e-10));
      prev = b;
    }
  }
}

TEST_CASE("Moser profiles") {
  const double eps = 1e-4;
  const auto full = moser_profile(eps, MoserDomain::full_ball);
  REQUIRE_THAT(full.value(0.0), WithinRel(std::log(1.0 / eps), 1e-15));
  REQUIRE(full.value(2.0) == 0.0);
  REQUIRE_THAT(full.gradient_lp_power(2.0), WithinRel(2.0 * pi * std::log(1.0 / eps), 1e-12));
  const auto half = moser_profile(eps, MoserDomain::half_ball);
  REQUIRE_THAT(half.gradient_lp_power(2.0) / (pi * std::log(1.0 / eps)), WithinAbs(1.0, 0.03));
  SECTION("sampled norms against the closed forms") {
    const auto s = full.sample(256);
    REQUIRE_THAT(std::pow(lp_norm(s, 2.0), 2), WithinRel(full.lp_power(2.0), 1e-4));
    const auto h = half.sample(256);
    REQUIRE_THAT(h.total_measure(), WithinRel(0.5 * pi, 1e-12));
  }
  SECTION("smoothed variant") {
    const auto sm = moser_profile(0.01, MoserDomain::full_ball, 2, MoserVariant::smoothed);
    REQUIRE_THAT(sm.value(0.0), WithinRel(2.0 * std::log(100.0), 1e-15));
    REQUIRE_THAT(sm.value(0.5), WithinRel(2.0 * std::log(2.0), 1e-15));
    REQUIRE(sm.value(0.75) == 0.0);
    REQUIRE_THAT(sm.value(0.625), WithinRel(std::log(2.0), 1e-14));
  }
}
