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
}

TEST_CASE("gamma function against std::tgamma and a high-precision table") {
  for (double x = 0.05; x <= 20.0; x += 0.173) REQUIRE_THAT(gamma_fn(x), WithinRel(std::tgamma(x), 1e-13));
  // 30-digit reference values.
  REQUIRE_THAT(gamma_fn(0.5), WithinRel(1.7724538509055160272981674833, 1e-14));
  REQUIRE_THAT(gamma_fn(1.0 / 3.0), WithinRel(2.6789385347077476336556929410, 1e-13));
  REQUIRE_THAT(gamma_fn(7.25), WithinRel(1155.3810139199896872027038, 1e-13));
  REQUIRE_THAT(gamma_fn(-0.5), WithinRel(-3.5449077018110320545963349666, 1e-13));
  REQUIRE_THROWS_AS(gamma_fn(-2.0), std::domain_error);
}

TEST_CASE("Riesz kernel values") {
  const auto k = riesz_kernel(2, 1.0);
  REQUIRE(eval_kernel(k, {2, 0, 0})[0] == 0.5);
  for (int n = 1; n <= 3; ++n) {
    for (double a : {0.3, 0.5, 0.9}) {
      const auto kk = riesz_kernel(n, a);
      Point x{};
      x[n - 1] = 1.0;
      REQUIRE_THAT(eval_kernel(kk, x)[0], WithinAbs(1.0, 1e-15));
    }
  }
  REQUIRE_THROWS_AS(eval_kernel(k, {0, 0, 0}), std::domain_error);
}

TEST_CASE("gradient kernel at n = 3, alpha = 1") {
  const auto k = gradient_kernel(3, 1.0);
  const auto v = eval_kernel(k, {1, 0, 0});
  REQUIRE(v.size() == 3);
  // c_2 in three dimensions from std::tgamma directly.
  const double c2 = std::tgamma(0.5) / (4.0 * std::pow(pi, 1.5) * std::tgamma(1.0));
  REQUIRE_THAT(v[0], WithinRel(c2 * (3 - 1 - 1), 1e-13));
  REQUIRE_THAT(v[0], WithinRel(1.0 / (4.0 * pi), 1e-13));
  REQUIRE(v[1] == 0.0);
  REQUIRE(v[2] == 0.0);
}

TEST_CASE("ring average") {
  SECTION("one dimension is a two point sum") {
    const auto k = riesz_kernel(1, 0.5);
    REQUIRE_THAT(ring_average(k, 2.0, 1.0), WithinRel(1.0 + 1.0 / std::sqrt(3.0), 1e-14));
  }
  SECTION("s = 0 gives the sphere area") {
    REQUIRE_THAT(ring_average(riesz_kernel(2, 1.0), 1.0, 0.0), WithinRel(2.0 * pi, 1e-13));
  }
  SECTION("brute-force midpoint oracle") {
    const int m = 1000000;
    KahanSum s;
    for (int i = 0; i < m; ++i) {
      const double th = 2.0 * pi * (i + 0.5) / m;
      s.add(1.0 / std::sqrt(5.0 - 4.0 * std::cos(th)));
    }
    const double oracle = s.value() * 2.0 * pi / m;
    REQUIRE_THAT(ring_average(riesz_kernel(2, 1.0), 2.0, 1.0), WithinRel(oracle, 1e-8));
  }
  SECTION("errors") {
    REQUIRE_THROWS_AS(ring_average(gradient_kernel(2, 1.0), 1.0, 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(ring_average(riesz_kernel(2, 1.0), 0.0, 0.0), std::invalid_argument);
    // |t e1 - t w|^{alpha-n} is not integrable on the circle for alpha <= n - 1.
    REQUIRE_THROWS_AS(ring_average(riesz_kernel(2, 1.0), 1.0, 1.0), std::domain_error);
    REQUIRE(std::isfinite(ring_average(riesz_kernel(2, 1.5), 1.0, 1.0)));
  }
}

TEST_CASE("kernel conditions") {
  const auto sample = make_kernel_sample(2);
  SECTION("Riesz kernel: ratios at most 1 and no correction") {
    const auto rep = verify_kernel_conditions(riesz_kernel(2, 1.0), sample);
    REQUIRE(rep.pass);
    REQUIRE(rep.rl1_ratio == 0.0);
    REQUIRE(rep.rl2_ratio <= 1.0 + 1e-12);
  }
  SECTION("correction of order |x| near the origin") {
    const auto k = custom_kernel(
        2, 1.0, [](const Point& x) { const double r = norm(x, 2); return (1.0 + r) / r; },
        [](const Point&) { return 1.0; }, 1.0, 1.0, 2.0, false);
    const auto rep = verify_kernel_conditions(k, sample);
    REQUIRE(rep.rl1_ratio <= 1.0 + 1e-12);
  }
  SECTION("gradient kernel against a dense random pair oracle") {
    const auto k = gradient_kernel(2, 1.0);
    const auto rep = verify_kernel_conditions(k, sample);
    REQUIRE(rep.rl2_pass);
    REQUIRE(std::isfinite(rep.rl3_ratio));
    // Independent estimate of the Lipschitz quotient on 1e5 random pairs.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lr(std::log(1e-3), std::log(1e3)), ang(0.0, 2.0 * pi), small(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
      const double r = std::exp(lr(rng)), a = ang(rng);
      const Point x1{r * std::cos(a), r * std::sin(a), 0};
      const double h = r * std::pow(10.0, 3.0 * small(rng) - 3.0);
      const Point x2{x1[0] + h * small(rng), x1[1] + h * small(rng), 0};
      const auto v1 = eval_kernel(k, x1), v2 = eval_kernel(k, x2);
      const double d = std::hypot(v1[0] - v2[0], v1[1] - v2[1]);
      const double dx = std::hypot(x1[0] - x2[0], x1[1] - x2[1]);
      const double scale = std::max(std::pow(norm(x1, 2), -2.0), std::pow(norm(x2, 2), -2.0));
      worst = std::max(worst, d / (dx * scale));
    }
    // Both estimates see the same supremum up to sampling noise.
    REQUIRE(rep.rl3_ratio >= 0.5 * worst);
    REQUIRE(rep.rl3_ratio <= 2.0 * worst);
  }
  SECTION("homogeneity on 1000 random points") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0), lt(-3.0, 3.0);
    for (const auto& k : {riesz_kernel(3, 0.7), gradient_kernel(3, 1.0), riesz_kernel(2, 1.3)}) {
      for (int i = 0; i < 1000; ++i) {
        Point x{u(rng), u(rng), k.n == 3 ? u(rng) : 0.0};
        const double t = std::exp(lt(rng));
        const Point tx{t * x[0], t * x[1], t * x[2]};
        const auto a = eval_kernel(k, tx), b = eval_kernel(k, x);
        const double scale = std::pow(t, k.alpha - k.n);
        for (std::size_t c = 0; c < a.size(); ++c) {
          REQUIRE(std::abs(a[c] - scale * b[c]) <= 1e-12 * std::abs(b[c]) * scale + 1e-300);
        }
      }
    }
  }
}

TEST_CASE("Taylor terms") {
  const auto k = riesz_kernel(2, 1.0);
  SECTION("degree zero is the kernel value") {
    const auto t = taylor_term(k, {2, 0, 0}, 0);
    REQUIRE_THAT(t.evaluate({0.3, -0.1, 0}), WithinRel(0.5, 1e-15));
  }
  SECTION("degree one is the gradient pairing") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
      const Point x{u(rng) + 2.0, u(rng), 0}, y{u(rng), u(rng), 0};
      const double r = norm(x, 2);
      const double expected = (2 - 1.0) * std::pow(r, 1.0 - 2 - 2) * dot(x, y, 2);
      REQUIRE_THAT(taylor_term(k, x, 1).evaluate(y), WithinRel(expected, 1e-12));
    }
  }
  SECTION("degree two against a five-point stencil of |x - y|^{-1}") {
    const Point x{1, 0, 0};
    const auto t = taylor_term(k, x, 2);
    auto K = [](double a, double b) { return 1.0 / std::hypot(1.0 - a, -b); };
    const double h = 1e-3;
    // Second derivatives in y at y = 0, halved where the monomial carries 1/2.
    auto d2 = [&](int i, int j) {
      auto f = [&](double s, double u) { return i == 0 ? (j == 0 ? K(s + u, 0) : K(s, u)) : K(0, s + u); };
      if (i == j) {
        auto g = [&](double s) { return i == 0 ? K(s, 0) : K(0, s); };
        return (-g(2 * h) + 16 * g(h) - 30 * g(0) + 16 * g(-h) - g(-2 * h)) / (12 * h * h);
      }
      (void)f;
      return (K(h, h) - K(h, -h) - K(-h, h) + K(-h, -h)) / (4 * h * h);
    };
    for (const auto& [mi, c] : t.coefficients[0]) {
      double expected;
      if (mi[0] == 2) {
        expected = d2(0, 0) / 2.0;
      } else if (mi[1] == 2) {
        expected = d2(1, 1) / 2.0;
      } else {
        expected = d2(0, 1);
      }
      REQUIRE_THAT(c, WithinAbs(expected, 1e-6 * std::max(1.0, std::abs(expected))));
    }
  }
  SECTION("closed form against the finite-difference route for j <= 3") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int n = 2; n <= 3; ++n) {
      const auto kk = riesz_kernel(n, 0.8);
      for (int i = 0; i < 20; ++i) {
        Point x{g(rng), g(rng), n == 3 ? g(rng) : 0.0};
        for (int j = 1; j <= 3; ++j) {
          const auto a = taylor_term(kk, x, j), b = taylor_term_finite_difference(kk, x, j);
          double scale = 0.0;
          for (const auto& e : a.coefficients[0]) scale = std::max(scale, std::abs(e.second));
          for (std::size_t m = 0; m < a.coefficients[0].size(); ++m) {
            REQUIRE(std::abs(a.coefficients[0][m].second - b.coefficients[0][m].second) <= 1e-6 * scale);
          }
        }
      }
    }
  }
  SECTION("degree is homogeneous in the increment") {
    const auto t = taylor_term(riesz_kernel(3, 1.0), {0.4, 0.9, -0.3}, 3);
    const Point y{0.2, -0.5, 0.7}, ty{0.5, -1.25, 1.75};
    REQUIRE_THAT(t.evaluate(ty), WithinRel(std::pow(2.5, 3) * t.evaluate(y), 1e-12));
  }
  SECTION("remainder law with a constant stable across scales") {
    const auto kk = riesz_kernel(2, 1.0);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> worst_by_scale;
    for (double scale : {0.1, 1.0, 10.0}) {
      double worst = 0.0;
      for (int i = 0; i < 200; ++i) {
        const Point x{scale * (1.0 + 0.5 * u(rng)), scale * u(rng), 0};
        const double rx = norm(x, 2);
        Point y{u(rng), u(rng), 0};
        const double f = 0.5 * rx * std::abs(u(rng)) / norm(y, 2);
        for (auto& c : y) c *= f;
        double approx = 0.0;
        for (int j = 0; j < 2; ++j) approx += taylor_term(kk, x, j).evaluate(y);
        const Point xy{x[0] - y[0], x[1] - y[1], 0};
        const double rem = std::abs(eval_kernel(kk, xy)[0] - approx);
        worst = std::max(worst, rem / (std::pow(rx, 1.0 - 2 - 2) * std::pow(norm(y, 2), 2)));
      }
      worst_by_scale.push_back(worst);
    }
    for (double w : worst_by_scale) {
      REQUIRE(w < 10.0);
      REQUIRE(w > 0.1 * worst_by_scale[1]);
    }
  }
}

TEST_CASE("sharp constants") {
  REQUIRE_THAT(constant_A_g(riesz_kernel(2, 1.0)), WithinRel(pi, 1e-15));
  for (int n = 1; n <= 3; ++n) {
    for (double a : {0.25, 0.5, 0.75}) {
      const auto k = riesz_kernel(n, a);
      const double ball = std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
      REQUIRE_THAT(constant_A_g(k), WithinRel(ball, 1e-13));
      REQUIRE_THAT(constant_A_g_quadrature(k), WithinRel(ball, 1e-10));
    }
  }
  SECTION("constant angular profile 2") {
    const auto k = custom_kernel(
        2, 1.0, [](const Point& x) { return 2.0 / norm(x, 2); }, [](const Point&) { return 2.0; }, 1.0, 0.0, 2.0,
        true);
    REQUIRE_THAT(constant_A_g_quadrature(k), WithinRel(4.0 * pi, 1e-12));
  }
  SECTION("c_alpha") {
    auto oracle = [](int n, double a) {
      return std::tgamma(0.5 * (n - a)) / (std::pow(2.0, a) * std::pow(pi, 0.5 * n) * std::tgamma(0.5 * a));
    };
    REQUIRE_THAT(constant_c_alpha(2, 1.0), WithinRel(1.0 / (2.0 * pi), 1e-13));
    REQUIRE_THAT(constant_c_alpha(3, 2.0), WithinRel(1.0 / (4.0 * pi), 1e-13));
    REQUIRE_THAT(constant_c_alpha(4, 2.0), WithinRel(1.0 / (4.0 * pi * pi), 1e-13));
    REQUIRE_THAT(constant_c_alpha(3, 0.6), WithinRel(oracle(3, 0.6), 1e-13));
    REQUIRE_THROWS_AS(constant_c_alpha(2, 2.0), std::domain_error);
  }
  SECTION("gamma for both operator choices") {
    REQUIRE_THAT(constant_gamma(OperatorChoice::fractional_laplacian, 2, 1.0), WithinRel(4.0 * pi, 1e-12));
    REQUIRE_THAT(constant_gamma(OperatorChoice::gradient_power, 2, 1.0), WithinRel(4.0 * pi, 1e-12));
    const double omega3 = 2.0 * pi * pi;
    REQUIRE_THAT(constant_gamma(OperatorChoice::gradient_power, 4, 1.0),
                 WithinRel(4.0 * std::pow(omega3, 1.0 / 3.0), 1e-12));
    REQUIRE_THROWS_AS(constant_gamma(OperatorChoice::gradient_power, 3, 2.0), std::domain_error);
  }
}

TEST_CASE("kernel names") {
  REQUIRE(make_kernel("riesz", 2, 1.0).family == KernelFamily::riesz);
  REQUIRE(make_kernel("gradient", 2, 1.0).components == 2);
  const auto p = make_kernel("perturbed:0.5:0.25", 2, 1.0);
  REQUIRE(p.family == KernelFamily::perturbed);
  REQUIRE_THAT(eval_kernel(p, {1, 0, 0})[0], WithinRel(1.0 + 0.25 * 0.5, 1e-14));
  REQUIRE_THROWS_AS(make_kernel("bogus", 2, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(make_kernel("perturbed:x", 2, 1.0), std::invalid_argument);
  REQUIRE_THROWS(riesz_kernel(2, 2.0));
}
