#include "adamsq/field.hpp"
#include "adamsq/kernel.hpp"
#include "adamsq/potential.hpp"
#include "adamsq/special.hpp"

#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

using namespace adamsq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const double pi = std::acos(-1.0);

// Potential of the unit-ball indicator at tau e_1, in high precision, frozen.
struct BallValue {
  int n;
  double alpha, tau, value;
};
const BallValue kBallTable[] = {
    {1, 0.5, 0.3, 3.9536709032664270263},  {1, 0.5, 1.0, 2.8284271247461900776},
    {1, 0.5, 1.7, 1.6130152919628455848},  {1, 0.5, 3.0, 1.1715728752538099024},
    {2, 0.5, 0.3, 12.347730727232683624},  {2, 0.5, 1.0, 6.7777046783518326929},
    {2, 0.5, 1.7, 1.5867122335024370838},  {2, 0.5, 3.0, 0.62464648160922409786},
    {3, 0.7, 0.3, 17.506998216681077218},  {3, 0.7, 1.0, 8.5773652479107712937},
    {3, 0.7, 1.7, 1.3927620464876245559},  {3, 0.7, 3.0, 0.3465353078955099908},
};

// Ball potential in the plane by a plain tensor Gauss rule in polar coordinates
// about the origin; only used for tau >= 2 where the integrand is smooth.
double planar_ball_oracle(double alpha, double tau) {
  const auto& g = gauss_legendre(48);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double s = 0.5 * (g.nodes[i] + 1.0);
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      const double th = pi * (g.nodes[j] + 1.0);
      const double d2 = tau * tau + s * s - 2.0 * tau * s * std::cos(th);
      sum += 0.5 * g.weights[i] * pi * g.weights[j] * s * std::pow(d2, 0.5 * (alpha - 2.0));
    }
  }
  return sum;
}

SampledFunction chi_ball(int n, int cells = 256) { return radial_grid(n, 1.0, [](double) { return 1.0; }, cells); }
}  // namespace

TEST_CASE("ball potential table") {
  for (const auto& row : kBallTable) {
    CAPTURE(row.n, row.alpha, row.tau);
    REQUIRE_THAT(riesz_ball_potential(row.n, row.alpha, row.tau), WithinRel(row.value, 1e-10));
    REQUIRE_THAT(ball_potential_by_shells(riesz_kernel(row.n, row.alpha), row.tau), WithinRel(row.value, 1e-7));
  }
}

TEST_CASE("ball potential closed forms") {
  SECTION("logarithmic plane case through the elliptic integral") {
    for (double tau : {0.0, 0.2, 0.5, 0.8, 0.95}) {
      REQUIRE_THAT(riesz_ball_potential(2, 1.0, tau), WithinRel(4.0 * std::comp_ellint_2(tau), 1e-11));
    }
    for (double tau : {1.25, 2.0, 5.0}) {
      const double k = 1.0 / tau;
      const double v = 4.0 * tau * (std::comp_ellint_2(k) - (1.0 - k * k) * std::comp_ellint_1(k));
      REQUIRE_THAT(riesz_ball_potential(2, 1.0, tau), WithinRel(v, 1e-11));
    }
  }
  SECTION("Newtonian case in space") {
    for (double tau : {0.0, 0.4, 0.9}) {
      REQUIRE_THAT(riesz_ball_potential(3, 2.0, tau), WithinRel(2.0 * pi * (1.0 - tau * tau / 3.0), 1e-11));
    }
    for (double tau : {1.5, 3.0, 10.0}) {
      REQUIRE_THAT(riesz_ball_potential(3, 2.0, tau), WithinRel(4.0 * pi / (3.0 * tau), 1e-11));
    }
  }
  SECTION("far points against a direct quadrature") {
    for (double tau : {2.0, 3.0, 7.0}) REQUIRE_THAT(riesz_ball_potential(2, 0.5, tau), WithinRel(planar_ball_oracle(0.5, tau), 1e-10));
  }
}

TEST_CASE("potential at the centre of the unit ball") {
  for (int n = 1; n <= 3; ++n) {
    for (double alpha : {0.3, 0.5, 1.0}) {
      if (alpha >= n) continue;
      const auto f = chi_ball(n);
      const auto v = radial_potential(riesz_kernel(n, alpha), f, {0.0});
      REQUIRE_THAT(v[0], WithinRel(sphere_area(n) / alpha, 1e-9));
      const auto field = apply_potential(riesz_kernel(n, alpha), f, {Point{0, 0, 0}});
      REQUIRE_THAT(field.base.values[0], WithinRel(sphere_area(n) / alpha, 1e-9));
    }
  }
  REQUIRE_THAT(radial_potential(riesz_kernel(2, 1.0), chi_ball(2), {0.0})[0], WithinRel(2.0 * pi, 1e-12));
}

TEST_CASE("linearity and radial agreement") {
  const auto k = riesz_kernel(2, 1.0);
  const auto f = radial_grid(2, 1.0, [](double r) { return 1.0 - r * r; }, 128);
  auto twice = f;
  for (auto& v : twice.values) v *= 2.0;
  const std::vector<double> radii = {0.0, 0.1, 0.5, 0.99, 1.0, 1.7, 4.0};
  const auto a = radial_potential(k, f, radii), b = radial_potential(k, twice, radii);
  for (std::size_t i = 0; i < radii.size(); ++i) REQUIRE_THAT(b[i], WithinRel(2.0 * a[i], 1e-13));
  // The generic shell route against the ball decomposition.
  const auto shells = radial_potential(perturbed_kernel(2, 1.0, 1.0, 0.0), f, radii);
  for (std::size_t i = 0; i < radii.size(); ++i) REQUIRE_THAT(shells[i], WithinRel(a[i], 1e-7));
}

TEST_CASE("cartesian evaluation of the ball indicator") {
  // Pixelated boundary: the error is of the order of the cell size.
  const auto k = riesz_kernel(2, 1.0);
  const auto c = radial_to_cartesian(chi_ball(2), 1.0, 200);
  for (double tau : {0.0, 0.35, 0.7, 1.6}) {
    const auto field = apply_potential(k, c, {Point{tau * 0.6, tau * 0.8, 0}});
    REQUIRE_THAT(field.base.values[0], WithinRel(riesz_ball_potential(2, 1.0, tau), 1e-2));
  }
}

TEST_CASE("dilation of homogeneous potentials") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  std::vector<double> v(41);
  for (auto& x : v) x = u(rng);
  const auto f = make_radial_values(2, geometric_edges(1e-3, 1.0, 40, true), v);
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto k = riesz_kernel(2, alpha);
    const double lam = 2.0;
    const auto g = dilate(f, lam, DilationMode::density, alpha);
    const std::vector<double> radii = {0.05, 0.3, 0.8, 2.5};
    std::vector<double> scaled;
    for (double r : radii) scaled.push_back(r / lam);
    const auto a = radial_potential(k, f, radii), b = radial_potential(k, g, scaled);
    for (std::size_t i = 0; i < radii.size(); ++i) REQUIRE_THAT(b[i], WithinRel(a[i], 1e-3));
  }
}

TEST_CASE("node doubling") {
  const auto k = riesz_kernel(3, 1.0);
  const auto profile = [](double r) { return std::exp(-r) * (1.0 - r); };
  const auto coarse = radial_grid(3, 1.0, profile, 512), fine = radial_grid(3, 1.0, profile, 1024);
  const std::vector<double> probes = {0.0, 0.2, 0.6, 1.3, 3.0};
  const auto a = radial_potential(k, coarse, probes), b = radial_potential(k, fine, probes);
  for (std::size_t i = 0; i < probes.size(); ++i) REQUIRE_THAT(a[i], WithinRel(b[i], 1e-3));
}

TEST_CASE("tail integrals") {
  SECTION("ball indicator, alpha = 1/2, against a dense radial oracle") {
    const double alpha = 0.5, p = 2.0 / alpha;
    const double got = potential_tail_lp(riesz_kernel(2, alpha), chi_ball(2), 1.0, p);
    // 4096 geometric cells on [2, 2e4] with the potential from the direct
    // quadrature, plus the leading-order |B_1| rho^{alpha-2} tail beyond.
    const auto& g = gauss_legendre(4);
    const int cells = 4096;
    const double lo = std::log(2.0), hi = std::log(2e4), h = (hi - lo) / cells;
    double sum = 0.0;
    for (int c = 0; c < cells; ++c) {
      for (std::size_t q = 0; q < g.nodes.size(); ++q) {
        const double s = lo + h * (c + 0.5 * (g.nodes[q] + 1.0));
        const double rho = std::exp(s);
        const double tf = c % 16 == 0 || rho < 50 ? planar_ball_oracle(alpha, rho) : pi * std::pow(rho, alpha - 2.0) *
                                                     (1.0 + std::pow(1.0 - alpha / 2.0, 2) / (2.0 * rho * rho));
        sum += 0.5 * h * g.weights[q] * 2.0 * pi * rho * rho * std::pow(tf, p);
      }
    }
    const double R = 2e4, e = p * (2.0 - alpha) - 2.0;
    sum += 2.0 * pi * std::pow(pi, p) * std::pow(R, -e) / e;
    REQUIRE_THAT(got, WithinRel(sum, 1e-3));
  }
  SECTION("nonzero mean at alpha = n/2 does not decay") {
    REQUIRE_THROWS_AS(potential_tail_lp(riesz_kernel(2, 1.0), chi_ball(2), 1.0, 2.0), DecayError);
  }
  SECTION("mean-zero radial function at alpha = n/2 is finite") {
    // The two shells carry equal and opposite mass.
    const auto edges = std::vector<double>{0.0, std::sqrt(0.5), 1.0};
    const auto h = make_radial_values(2, edges, {1.0, -1.0});
    const double v = potential_tail_lp(riesz_kernel(2, 1.0), h, 1.0, 2.0);
    REQUIRE(std::isfinite(v));
    REQUIRE(v > 0.0);
  }
}
