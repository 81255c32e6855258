#pragma once

#include "adamsq/field.hpp"
#include "adamsq/potential.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace adamsq {

/// Radial region inner <= |x| <= outer. A ball has inner == 0; `all` covers
/// whatever the samples cover.
struct Region {
  double inner = 0.0;
  double outer = kInfinity;

  static Region ball(double radius) { return {0.0, radius}; }
  static Region annulus(double a, double b) { return {a, b}; }
  static Region all() { return {}; }
  bool is_all() const { return inner == 0.0 && outer == kInfinity; }
  std::string describe() const;
};

struct FunctionalOptions {
  double constant = 1.0;
  Region region;
  /// Exponent applied to |u|, normally n/(n-alpha).
  double power = 2.0;
  /// 1 is Lebesgue measure; otherwise the density |x|^{(sigma-1)n}.
  double sigma = 1.0;
  std::optional<int> truncation;
};

struct FunctionalReport {
  double value = 0.0;
  /// log(value), finite even when value overflowed.
  double log_value = -kInfinity;
  double constant_used = 0.0;
  std::string region;
  std::string measure;
  int truncation = -1;  // -1 when no truncation
  bool overflow = false;
  std::size_t overflow_node = 0;
};

/// Integral over the region of exp(c|u|^power), or of its truncation exp_N,
/// with u piecewise constant on the cells of `u`.
FunctionalReport exp_functional(const SampledFunction& u, const FunctionalOptions& opt);
/// Potential values placed on the cells of `cells` (one point per cell).
FunctionalReport exp_functional(const PotentialField& u, const SampledFunction& cells, const FunctionalOptions& opt);

struct Sandwich {
  double lower = 0.0;
  double middle = 0.0;
  double upper = 0.0;
  int order = 0;  // N of the truncated exponential
  bool ordered() const { return lower <= middle && middle <= upper; }
};

/// Brackets the truncated integral of exp_N(c|u|^{p'}), N = ceil(p-2), between
/// the integral of exp(c|u|^{p'}) over {|u| >= 1} minus and plus e^c ||u||_p^p.
Sandwich regularization_sandwich(const SampledFunction& u, double c, double p);

enum class HolderMode { A, B };
/// Mode A: exp[(1/A)(tau^{b'}/(1-p^{b'}))^{b/b'}]; mode B: tau (1-p^{b'})^{1/b'}.
double holder_perturbation(double tau, double p, double A, double beta, HolderMode mode);
/// (a^b + c^b)^{1/b} - (a t^{1/b'} + c (1-t)^{1/b'}); never negative.
double holder_inequality_gap(double a, double c, double t, double beta);

struct RufCheck {
  bool pass = false;
  double slack = 0.0;
};
RufCheck ruf_check(double f_norm, double tf_norm, int n, double alpha);

}  // namespace adamsq
