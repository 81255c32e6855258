#include "adamsq/potential.hpp"

#include "adamsq/special.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace adamsq {

namespace {

void check_riesz_order(int n, double alpha) {
  if (n < 1 || n > 3) throw std::invalid_argument("potential: dimension must be 1, 2 or 3");
  if (!(alpha > 0.0 && alpha < n)) throw std::invalid_argument("potential: order must lie in (0, n)");
}

// Directions w with |t e_1 + rho w| <= R. The cosine bound c is carried as
// 1 + c and 1 - c in factored form: thin shells far from t would otherwise
// lose every digit to cancellation in R^2 - t^2 - rho^2.
double ball_directions(int n, double t, double rho, double R) {
  if (R == 0.0) return 0.0;
  const double lo = ((R - t) + rho) * ((R + t) - rho) / (2.0 * t * rho);
  const double hi = ((t - R) + rho) * (t + rho + R) / (2.0 * t * rho);
  if (lo <= 0.0) return 0.0;
  if (hi <= 0.0) return n == 1 ? 2.0 : sphere_area(n);
  if (n == 1) return 1.0;
  if (n == 3) return lo <= 1.0 ? 2.0 * kPi * lo : 4.0 * kPi - 2.0 * kPi * hi;
  return lo <= 1.0 ? 4.0 * std::asin(std::sqrt(0.5 * lo)) : 2.0 * kPi - 4.0 * std::asin(std::sqrt(0.5 * hi));
}

double riesz_ball_middle(int n, double alpha, double tau) {
  if (n == 1) {
    if (tau < 1.0) return (std::pow(1.0 + tau, alpha) + std::pow(1.0 - tau, alpha)) / alpha;
    return (std::pow(tau + 1.0, alpha) - std::pow(tau - 1.0, alpha)) / alpha;
  }
  const double omega = sphere_area(n);
  double core = 0.0;
  if (tau < 1.0) core = omega * std::pow(1.0 - tau, alpha) / alpha;
  auto integrand = [&](double rho) {
    if (rho <= 1e-200) return 0.0;
    return std::pow(rho, alpha - 1.0) * ball_directions(n, tau, rho, 1.0);
  };
  return core + integrate_endpoint_singular(integrand, std::abs(1.0 - tau), 1.0 + tau, 1e-14);
}

}  // namespace

double riesz_ball_potential(int n, double alpha, double tau) {
  check_riesz_order(n, alpha);
  if (tau < 0.0) throw std::domain_error("riesz_ball_potential: negative distance");
  const double omega = sphere_area(n);
  if (tau <= 0.5) {
    return omega / alpha * (1.0 + hyp2f1_minus_one(0.5 * (n - alpha), -0.5 * alpha, 0.5 * n, tau * tau));
  }
  if (tau >= 2.0) {
    return ball_volume(n) * std::pow(tau, alpha - n) *
           (1.0 + hyp2f1_minus_one(0.5 * (n - alpha), 0.5 * (2.0 - alpha), 0.5 * n + 1.0, 1.0 / (tau * tau)));
  }
  return riesz_ball_middle(n, alpha, tau);
}

double shell_integral(const KernelSpec& k, double t, double a, double b) {
  if (k.components != 1 || !k.radial) throw std::invalid_argument("shell_integral: needs a radial scalar kernel");
  if (!(b > a) || a < 0.0) return 0.0;
  const int n = k.n;
  // Below this radius the integrable origin singularity contributes nothing
  // at double precision, while K(rho) itself may overflow.
  const double floor_radius = 1e-90 * (t + b);
  auto radial = [&](double rho) { return eval_scalar(k, Point{rho, 0, 0}) * std::pow(rho, n - 1); };
  if (t == 0.0) {
    return sphere_area(n) *
           integrate_endpoint_singular([&](double rho) { return rho > floor_radius ? radial(rho) : 0.0; }, a, b, 1e-12);
  }
  auto integrand = [&](double rho) {
    if (rho <= floor_radius) return 0.0;
    const double w = ball_directions(n, t, rho, b) - ball_directions(n, t, rho, a);
    return w == 0.0 ? 0.0 : radial(rho) * w;
  };
  std::vector<double> cuts = {0.0, std::abs(t - a), std::abs(t - b), t + a, t + b};
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  // Accuracy is judged on the whole shell: a tiny piece next to a kink of the
  // direction measure can miss a per-piece relative target harmlessly.
  KahanSum sum;
  double error = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    sum.add(integrate_endpoint_singular(integrand, cuts[i], cuts[i + 1], 1e-12, error, l1));
  }
  if (!std::isfinite(sum.value()) || error > std::max(1e-7 * l1, 1e-300)) {
    std::ostringstream msg;
    msg << "shell_integral: quadrature tolerance not reached (t " << t << ", shell " << a << ".." << b << ", estimate "
        << sum.value() << ", error " << error << ", l1 " << l1 << ")";
    throw std::runtime_error(msg.str());
  }
  return sum.value();
}

double ball_potential_by_shells(const KernelSpec& k, double tau) { return shell_integral(k, tau, 0.0, 1.0); }

namespace {

struct Jump {
  double radius;
  double height;
};

// f = sum of height * indicator(B_radius).
std::vector<Jump> ball_decomposition(const SampledFunction& f) {
  std::vector<Jump> out;
  const std::size_t m = f.size();
  for (std::size_t k = 0; k <= m; ++k) {
    const double before = k == 0 ? 0.0 : f.values[k - 1];
    const double after = k == m ? 0.0 : f.values[k];
    const double c = before - after;
    if (c != 0.0 && f.edges[k] > 0.0) out.push_back({f.edges[k], c});
  }
  return out;
}

void require_radial_scalar(const SampledFunction& f) {
  if (f.layout != Layout::radial) throw std::invalid_argument("radial potential: input is not radial");
  if (f.components != 1) throw std::invalid_argument("radial potential: vector input is unsupported");
}

}  // namespace

std::vector<double> radial_potential(const KernelSpec& k, const SampledFunction& f, const std::vector<double>& radii) {
  require_radial_scalar(f);
  if (k.components != 1 || !k.radial) {
    throw std::invalid_argument("radial potential: needs a radial scalar kernel; resample onto a cartesian grid");
  }
  if (k.n != f.n) throw std::invalid_argument("radial potential: dimension mismatch");
  std::vector<double> out(radii.size());
  if (k.family == KernelFamily::riesz) {
    const auto jumps = ball_decomposition(f);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      KahanSum s;
      for (const auto& jp : jumps) {
        s.add(jp.height * std::pow(jp.radius, k.alpha) * riesz_ball_potential(k.n, k.alpha, radii[i] / jp.radius));
      }
      out[i] = s.value();
    }
    return out;
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    KahanSum s;
    for (std::size_t c = 0; c < f.size(); ++c) {
      if (f.values[c] != 0.0) s.add(f.values[c] * shell_integral(k, radii[i], f.edges[c], f.edges[c + 1]));
    }
    out[i] = s.value();
  }
  return out;
}

GeometricLattice detect_lattice(const SampledFunction& f) {
  GeometricLattice g;
  if (f.layout != Layout::radial || f.edges.size() < 2) return g;
  g.first = f.edges[0] == 0.0 ? 1 : 0;
  if (f.edges.size() < g.first + 2) return g;
  g.cells = f.edges.size() - 1 - g.first;
  g.e0 = f.edges[g.first];
  g.log_q = std::log(f.edges.back() / g.e0) / static_cast<double>(g.cells);
  for (std::size_t i = 0; i <= g.cells; ++i) {
    const double expected = g.e0 * std::exp(g.log_q * static_cast<double>(i));
    if (std::abs(f.edges[g.first + i] - expected) > 1e-9 * expected) return g;
  }
  g.valid = true;
  return g;
}

std::vector<double> lattice_riesz_potential(int n, double alpha, const SampledFunction& f, const GeometricLattice& g,
                                            int j_lo, int j_hi, double offset) {
  check_riesz_order(n, alpha);
  require_radial_scalar(f);
  if (!g.valid) throw std::invalid_argument("lattice potential: input is not on a geometric lattice");
  if (j_hi < j_lo) return {};
  // Jumps at lattice edges i = 0..cells; the core cell (if any) sits before edge 0.
  const int cells = static_cast<int>(g.cells);
  std::vector<double> weight(cells + 1, 0.0);
  for (int i = 0; i <= cells; ++i) {
    const std::size_t edge = g.first + i;
    const double before = edge == 0 ? 0.0 : f.values[edge - 1];
    const double after = edge == f.size() ? 0.0 : f.values[edge];
    const double c = before - after;
    if (c != 0.0) weight[i] = c * std::pow(g.e0 * std::exp(g.log_q * i), alpha);
  }
  std::vector<int> active;
  for (int i = 0; i <= cells; ++i)
    if (weight[i] != 0.0) active.push_back(i);
  // u at q^{m + offset} for m = j - i.
  const int m_lo = j_lo - cells, m_hi = j_hi;
  std::vector<double> table(m_hi - m_lo + 1);
  for (int m = m_lo; m <= m_hi; ++m) {
    table[m - m_lo] = riesz_ball_potential(n, alpha, std::exp(g.log_q * (m + offset)));
  }
  std::vector<double> out(j_hi - j_lo + 1);
  for (int j = j_lo; j <= j_hi; ++j) {
    KahanSum s;
    for (int i : active) s.add(weight[i] * table[j - i - m_lo]);
    out[j - j_lo] = s.value();
  }
  return out;
}

RieszFarField::RieszFarField(int n, double alpha, const SampledFunction& f) : n_(n), alpha_(alpha) {
  check_riesz_order(n, alpha);
  require_radial_scalar(f);
  support_ = f.support_radius;
  if (support_ == 0.0) return;
  const int terms = 80;
  const double a = 0.5 * (n - alpha), b = 0.5 * (2.0 - alpha), c = 0.5 * n + 1.0;
  double ck = 1.0;
  for (int k = 0; k < terms; ++k) {
    const double e = n + 2.0 * k;
    KahanSum s;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.values[i] == 0.0) continue;
      const double hi = std::pow(f.edges[i + 1] / support_, e);
      const double lo = std::pow(f.edges[i] / support_, e);
      s.add(f.values[i] * (hi - lo));
    }
    coeff_.push_back(ball_volume(n) * std::pow(support_, n) * ck * s.value());
    ck *= (a + k) * (b + k) / ((c + k) * (k + 1.0));
  }
}

double RieszFarField::operator()(double t) const {
  if (support_ == 0.0) return 0.0;
  if (t < 1.5 * support_) throw std::domain_error("far field: evaluation point too close to the support");
  const double z = (support_ / t) * (support_ / t);
  double s = 0.0;
  for (std::size_t k = coeff_.size(); k-- > 0;) s = s * z + coeff_[k];
  return std::pow(t, alpha_ - n_) * s;
}

// ---------------------------------------------------------------------------
// Cartesian path

namespace {

// (1/alpha) * integral_0^1 K(s^{1/alpha} z) s^{(n-alpha)/alpha} ds, i.e. the
// radial part of the cone integral divided by |z|^n.
void cone_profile(const KernelSpec& k, const Point& z, double* out) {
  const int m = k.components;
  if (k.homogeneous) {
    k.eval(z, out);
    for (int c = 0; c < m; ++c) out[c] /= k.alpha;
    return;
  }
  const GaussRule& gl = gauss_legendre(12);
  std::vector<double> v(m);
  for (int c = 0; c < m; ++c) out[c] = 0.0;
  for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
    const double s = 0.5 * (gl.nodes[g] + 1.0);
    const double sigma = std::pow(s, 1.0 / k.alpha);
    Point y{sigma * z[0], sigma * z[1], sigma * z[2]};
    k.eval(y, v.data());
    const double w = 0.5 * gl.weights[g] * std::pow(sigma, k.n - k.alpha) / k.alpha;
    for (int c = 0; c < m; ++c) out[c] += w * v[c];
  }
}

// Integral of K(y - x) over the box [lo, hi] via cones from x over each face.
void box_integral(const KernelSpec& k, const Point& x, const Point& lo, const Point& hi, double* out) {
  const int n = k.n, m = k.components;
  for (int c = 0; c < m; ++c) out[c] = 0.0;
  std::vector<double> prof(m);
  const GaussRule& gl = gauss_legendre(20);
  for (int d = 0; d < n; ++d) {
    for (int side = 0; side < 2; ++side) {
      const double plane = side == 0 ? lo[d] : hi[d];
      const double dist = side == 0 ? x[d] - lo[d] : hi[d] - x[d];
      if (dist == 0.0) continue;
      const double ad = std::abs(dist);
      Point z{};
      z[d] = plane - x[d];
      if (n == 1) {
        cone_profile(k, z, prof.data());
        for (int c = 0; c < m; ++c) out[c] += dist * prof[c];
        continue;
      }
      // Tangential coordinates of the face, split at the foot of x.
      int t1 = (d + 1) % n, t2 = (d + 2) % n;
      if (n == 2) t2 = -1;
      auto pieces = [&](int axis) {
        std::vector<std::pair<double, double>> p;  // signed offsets from the foot
        const double a = lo[axis] - x[axis], b = hi[axis] - x[axis];
        if (a < 0.0 && b > 0.0) {
          p.emplace_back(0.0, a);
          p.emplace_back(0.0, b);
        } else {
          p.emplace_back(a, b);
        }
        return p;
      };
      // Map an offset interval to w = asinh(r / ad) where r = |offset|.
      struct Seg {
        double w0, w1, sign;
      };
      auto segment = [&](std::pair<double, double> pr) {
        const double sgn = (pr.first + pr.second) >= 0.0 ? 1.0 : -1.0;
        return Seg{std::asinh(std::abs(pr.first) / ad), std::asinh(std::abs(pr.second) / ad), sgn};
      };
      if (n == 2) {
        for (const auto& pr : pieces(t1)) {
          const Seg s = segment(pr);
          const double hw = 0.5 * (s.w1 - s.w0), mw = 0.5 * (s.w1 + s.w0);
          if (hw == 0.0) continue;
          for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
            const double w = mw + hw * gl.nodes[g];
            Point zz = z;
            zz[t1] = s.sign * ad * std::sinh(w);
            cone_profile(k, zz, prof.data());
            const double jac = std::abs(hw) * gl.weights[g] * ad * std::cosh(w);
            for (int c = 0; c < m; ++c) out[c] += dist * jac * prof[c];
          }
        }
      } else {
        for (const auto& pr1 : pieces(t1)) {
          const Seg s1 = segment(pr1);
          const double h1 = 0.5 * (s1.w1 - s1.w0), m1 = 0.5 * (s1.w1 + s1.w0);
          if (h1 == 0.0) continue;
          for (const auto& pr2 : pieces(t2)) {
            const Seg s2 = segment(pr2);
            const double h2 = 0.5 * (s2.w1 - s2.w0), m2 = 0.5 * (s2.w1 + s2.w0);
            if (h2 == 0.0) continue;
            for (std::size_t g1 = 0; g1 < gl.nodes.size(); ++g1) {
              const double w1 = m1 + h1 * gl.nodes[g1];
              for (std::size_t g2 = 0; g2 < gl.nodes.size(); ++g2) {
                const double w2 = m2 + h2 * gl.nodes[g2];
                Point zz = z;
                zz[t1] = s1.sign * ad * std::sinh(w1);
                zz[t2] = s2.sign * ad * std::sinh(w2);
                cone_profile(k, zz, prof.data());
                const double jac = std::abs(h1 * h2) * gl.weights[g1] * gl.weights[g2] * ad * ad * std::cosh(w1) *
                                   std::cosh(w2);
                for (int c = 0; c < m; ++c) out[c] += dist * jac * prof[c];
              }
            }
          }
        }
      }
    }
  }
}

int output_components(const KernelSpec& k, const SampledFunction& f) {
  if (k.components > 1 && f.components > 1) {
    if (k.components != f.components) throw std::invalid_argument("potential: component counts do not match");
    return 1;
  }
  return std::max(k.components, f.components);
}

// Adds (kernel integral) x (cell value) into acc.
void accumulate(const KernelSpec& k, const SampledFunction& f, std::size_t cell, const double* kern,
                std::vector<KahanSum>& acc) {
  if (k.components > 1 && f.components > 1) {
    double s = 0.0;
    for (int c = 0; c < k.components; ++c) s += kern[c] * f.value(cell, c);
    acc[0].add(s);
  } else if (k.components > 1) {
    for (int c = 0; c < k.components; ++c) acc[c].add(kern[c] * f.value(cell));
  } else {
    for (int c = 0; c < f.components; ++c) acc[c].add(kern[0] * f.value(cell, c));
  }
}

}  // namespace

void cartesian_potential_at(const KernelSpec& k, const SampledFunction& f, const Point& x, double* out,
                            double* error_estimate) {
  if (f.layout != Layout::cartesian || f.grid_points == 0) throw std::invalid_argument("cartesian potential: bad layout");
  if (k.n != f.n) throw std::invalid_argument("cartesian potential: dimension mismatch");
  const int n = f.n, N = f.grid_points;
  const double h = 2.0 * f.half_width / N;
  const double cell_volume = std::pow(h, n);
  const int near = n == 1 ? N : (n == 2 ? 2 : 1);
  const int oc = output_components(k, f);
  std::vector<KahanSum> acc(oc), err(oc);
  std::array<long, 3> home{};
  for (int d = 0; d < n; ++d) home[d] = static_cast<long>(std::floor((x[d] + f.half_width) / h));
  std::vector<double> kern(k.components), fine(k.components), tmp(k.components);
  const GaussRule& g2 = gauss_legendre(2);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    if (f.magnitude(idx) == 0.0) continue;
    std::size_t r = idx;
    long dmax = 0;
    std::array<long, 3> cell{};
    for (int d = 0; d < n; ++d) {
      cell[d] = static_cast<long>(r % N);
      r /= N;
      dmax = std::max(dmax, std::abs(cell[d] - home[d]));
    }
    const Point& c = f.nodes[idx];
    if (dmax <= near) {
      Point lo{}, hi{};
      for (int d = 0; d < n; ++d) {
        lo[d] = c[d] - 0.5 * h;
        hi[d] = c[d] + 0.5 * h;
      }
      box_integral(k, x, lo, hi, kern.data());
    } else {
      Point z{x[0] - c[0], x[1] - c[1], x[2] - c[2]};
      k.eval(z, kern.data());
      for (auto& v : kern) v *= cell_volume;
      if (error_estimate != nullptr && dmax == near + 1) {
        // Product Gauss rule on the first far ring as an error probe.
        std::fill(fine.begin(), fine.end(), 0.0);
        const int reps = n == 1 ? 2 : (n == 2 ? 4 : 8);
        for (int q = 0; q < reps; ++q) {
          Point y = c;
          for (int d = 0; d < n; ++d) y[d] += 0.5 * h * g2.nodes[(q >> d) & 1];
          Point zz{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
          k.eval(zz, tmp.data());
          for (int cc = 0; cc < k.components; ++cc) fine[cc] += tmp[cc] * cell_volume / reps;
        }
        for (int cc = 0; cc < k.components; ++cc) tmp[cc] = fine[cc] - kern[cc];
        accumulate(k, f, idx, tmp.data(), err);
      }
    }
    accumulate(k, f, idx, kern.data(), acc);
  }
  double mag = 0.0, emag = 0.0;
  for (int c = 0; c < oc; ++c) {
    out[c] = acc[c].value();
    mag += out[c] * out[c];
    emag += err[c].value() * err[c].value();
  }
  if (error_estimate != nullptr) {
    *error_estimate = mag > 0.0 ? std::sqrt(emag / mag) : std::sqrt(emag);
  }
}

PotentialField apply_potential(const KernelSpec& k, const SampledFunction& f, const std::vector<Point>& points) {
  PotentialField field;
  field.kernel_id = k.id;
  SampledFunction& b = field.base;
  b.layout = Layout::cartesian;
  b.n = f.n;
  b.nodes = points;
  b.weights.assign(points.size(), 1.0);
  field.flagged.assign(points.size(), false);
  field.quadrature_error.assign(points.size(), 0.0);
  if (f.layout == Layout::radial) {
    std::vector<double> radii(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) radii[i] = norm(points[i], f.n);
    b.components = 1;
    b.values = radial_potential(k, f, radii);
    const double tol = k.family == KernelFamily::riesz ? 1e-12 : 1e-10;
    for (std::size_t i = 0; i < points.size(); ++i) {
      field.quadrature_error[i] = tol;
      if (!std::isfinite(b.values[i])) field.flagged[i] = true;
    }
  } else {
    const int oc = output_components(k, f);
    b.components = oc;
    b.values.assign(points.size() * oc, 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      bool finite = true;
      for (int d = 0; d < f.n; ++d) finite = finite && std::isfinite(points[i][d]);
      if (!finite) {
        field.flagged[i] = true;
        for (int c = 0; c < oc; ++c) b.values[i * oc + c] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      cartesian_potential_at(k, f, points[i], &b.values[i * oc], &field.quadrature_error[i]);
    }
  }
  b.refresh_support();
  return field;
}

SampledFunction radial_to_cartesian(const SampledFunction& f, double half_width, int grid_points) {
  require_radial_scalar(f);
  return make_cartesian_scalar(f.n, half_width, grid_points, [&](const Point& x) {
    const double r = norm(x, f.n);
    if (r < f.edges.front() || r >= f.edges.back()) return 0.0;
    const auto it = std::upper_bound(f.edges.begin(), f.edges.end(), r);
    return f.values[static_cast<std::size_t>(it - f.edges.begin()) - 1];
  });
}

// ---------------------------------------------------------------------------
// Integrals of |Tf|^p

TailIntegral potential_tail_integral(const KernelSpec& k, const SampledFunction& f, double rho0, double p) {
  require_radial_scalar(f);
  if (!(rho0 > 0.0) || !(p >= 1.0)) throw std::invalid_argument("tail integral: need rho0 > 0 and p >= 1");
  const int n = f.n;
  const double omega = sphere_area(n);
  const bool riesz = k.family == KernelFamily::riesz;
  std::unique_ptr<RieszFarField> far;
  if (riesz) far = std::make_unique<RieszFarField>(n, k.alpha, f);
  auto potential = [&](const std::vector<double>& radii) {
    if (!riesz) return radial_potential(k, f, radii);
    std::vector<double> out(radii.size());
    std::vector<double> close;
    for (double r : radii)
      if (r < 2.0 * f.support_radius) close.push_back(r);
    const std::vector<double> direct = close.empty() ? std::vector<double>{} : radial_potential(k, f, close);
    std::size_t ci = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      out[i] = radii[i] < 2.0 * f.support_radius ? direct[ci++] : (*far)(radii[i]);
    }
    return out;
  };
  auto density = [&](double rho, double tf) { return omega * std::pow(rho, n) * std::pow(std::abs(tf), p); };

  const GaussRule& gl = gauss_legendre(20);
  const double decade = std::log(10.0);
  TailIntegral res;
  KahanSum total;
  double log_start = std::log(rho0);
  double start_density = density(rho0, potential({rho0})[0]);
  const int max_decades = 40;
  for (int d = 0; d < max_decades; ++d) {
    std::vector<double> radii;
    for (double node : gl.nodes) radii.push_back(std::exp(log_start + 0.5 * decade * (node + 1.0)));
    const double end_rho = std::exp(log_start + decade);
    radii.push_back(end_rho);
    const auto tf = potential(radii);
    KahanSum piece;
    for (std::size_t g = 0; g < gl.nodes.size(); ++g) piece.add(0.5 * decade * gl.weights[g] * density(radii[g], tf[g]));
    total.add(piece.value());
    const double end_density = density(end_rho, tf.back());
    res.outer_radius = end_rho;
    if (end_density == 0.0) {
      res.remainder = 0.0;
      res.decay = kInfinity;
      break;
    }
    res.decay = start_density > 0.0 ? -(std::log(end_density) - std::log(start_density)) / decade : 0.0;
    res.remainder = res.decay > 0.0 ? end_density / res.decay : kInfinity;
    const double t = total.value();
    if (d >= 3 && res.decay < 0.5) {
      std::ostringstream msg;
      msg << "potential decays too slowly for |Tf|^" << p << " to be integrable (fitted decay exponent " << res.decay
          << " of rho^n |Tf|^p): the moment condition (vanishing moments through order n-1) is not met";
      throw DecayError(msg.str());
    }
    if (d >= 1 && res.remainder < 1e-6 * t) break;
    if (d == max_decades - 1) throw DecayError("tail integral: remainder did not fall below 1e-6 of the total");
    log_start += decade;
    start_density = end_density;
  }
  res.value = total.value() + res.remainder;
  return res;
}

double potential_tail_lp(const KernelSpec& k, const SampledFunction& f, double r, double p) {
  if (f.support_radius > r * (1.0 + 1e-12)) throw std::domain_error("potential_tail_lp: f is not supported in B_r");
  return potential_tail_integral(k, f, 2.0 * r, p).value;
}

PotentialNorm riesz_potential_lp(int n, double alpha, const SampledFunction& f, double p) {
  const GeometricLattice g = detect_lattice(f);
  if (!g.valid) throw std::invalid_argument("riesz_potential_lp: input is not on a geometric lattice");
  PotentialNorm res;
  if (f.support_radius == 0.0) return res;
  const double omega = sphere_area(n);
  // Cells j cover [e0 q^j, e0 q^{j+1}] up to twice the support.
  const int j_end = static_cast<int>(std::ceil(std::log(2.0 * f.support_radius / g.e0) / g.log_q - 1e-9));
  const double off = 0.5 / std::sqrt(3.0);
  KahanSum near;
  for (double o : {0.5 - off, 0.5 + off}) {
    const auto tf = lattice_riesz_potential(n, alpha, f, g, 0, j_end - 1, o);
    for (int j = 0; j < j_end; ++j) {
      const double rho = g.e0 * std::exp(g.log_q * (j + o));
      near.add(0.5 * g.log_q * omega * std::pow(rho, n) * std::pow(std::abs(tf[j]), p));
    }
  }
  // Ball [0, e0]: the potential is flat there to leading order.
  const KernelSpec riesz = riesz_kernel(n, alpha);
  const double center = radial_potential(riesz, f, {0.5 * g.e0})[0];
  near.add(ball_volume(n) * std::pow(g.e0, n) * std::pow(std::abs(center), p));
  res.near = near.value();
  res.tail = potential_tail_integral(riesz, f, g.e0 * std::exp(g.log_q * j_end), p).value;
  return res;
}

double pointwise_condition_constant(const KernelSpec& k, const SampledFunction& f, const std::vector<Point>& anchors,
                                    int points_per_anchor, double tf_norm, unsigned long long seed) {
  if (f.layout != Layout::cartesian) throw std::invalid_argument("pointwise condition: needs cartesian input");
  if (!(tf_norm > 0.0)) throw std::invalid_argument("pointwise condition: potential norm must be positive");
  const int n = f.n;
  // |K| as a scalar kernel.
  KernelSpec mag = k;
  mag.components = 1;
  mag.radial = false;
  const int m = k.components;
  mag.eval = [k, m](const Point& x, double* out) {
    std::vector<double> v(m);
    k.eval(x, v.data());
    double s = 0.0;
    for (double c : v) s += c * c;
    out[0] = std::sqrt(s);
  };
  mag.angular.evaluator = {[](const Point&) { return 1.0; }};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int oc = output_components(k, f);
  std::vector<double> tf(oc);
  double worst = -kInfinity;
  for (const auto& a : anchors) {
    SampledFunction local = f;
    local.components = 1;
    local.values.assign(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      Point d{f.nodes[i][0] - a[0], f.nodes[i][1] - a[1], f.nodes[i][2] - a[2]};
      if (norm(d, n) <= 2.0) local.values[i] = f.magnitude(i);
    }
    for (int s = 0; s < points_per_anchor; ++s) {
      Point dir{};
      for (int d = 0; d < n; ++d) dir[d] = gauss(rng);
      const double len = norm(dir, n);
      const double rad = std::pow(unif(rng), 1.0 / n);
      Point x = a;
      for (int d = 0; d < n; ++d) x[d] += rad * dir[d] / len;
      cartesian_potential_at(k, f, x, tf.data());
      double lhs = 0.0;
      for (double v : tf) lhs += v * v;
      lhs = std::sqrt(lhs);
      double loc = 0.0;
      cartesian_potential_at(mag, local, x, &loc);
      worst = std::max(worst, (lhs - loc) / tf_norm);
    }
  }
  return worst;
}

}  // namespace adamsq
