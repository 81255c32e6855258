#pragma once

#include "adamsq/extremal.hpp"
#include "adamsq/field.hpp"
#include "adamsq/kernel.hpp"
#include "adamsq/potential.hpp"

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace adamsq {

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct ScenarioConfig {
  std::string scenario;
  std::string kernel = "riesz";
  int n = 2;
  double alpha = 1.0;
  double q = 1.0;
  std::vector<double> thetas;
  std::vector<double> epsilons;  // strictly decreasing
  std::vector<double> radii;
  std::vector<double> alphas;
  double sigma = 1.0;
  int cells_per_decade = 128;
  /// Relative to |target|; absolute when the target is 0.
  double tolerance = 0.01;
  /// Trailing sweep points used by fits.
  int fit_points = 3;
  /// Exponential constant for C_1; calibrated when unset.
  double C1 = kUnset;
  unsigned long long seed = 20240601ULL;
  std::string out_dir;
};

/// Scenario ids in their canonical order.
const std::vector<std::string>& scenario_names();
/// Defaults for a scenario; throws std::invalid_argument for an unknown id.
ScenarioConfig default_config(const std::string& scenario);
/// Throws std::invalid_argument with the offending field.
void validate_config(const ScenarioConfig& cfg);
/// Overrides from a JSON object (keys match the field names).
ScenarioConfig config_from_json(const std::string& json_text, ScenarioConfig base);

struct ReportRow {
  std::vector<std::pair<std::string, double>> params;
  double measured = kUnset;
  double target = kUnset;
  double tolerance = kUnset;
  bool pass = false;
  std::string note;
};

struct ExperimentReport {
  std::string scenario;
  double fitted = kUnset;
  double half_width = kUnset;
  double target = kUnset;
  double tolerance = kUnset;
  std::string target_label;
  bool pass = false;
  std::string diagnostic;
  std::vector<ReportRow> rows;
};

ExperimentReport run_scenario(const ScenarioConfig& cfg);

enum class ReportFormat { csv, json };
std::string render_report(const ExperimentReport& rep, ReportFormat format);
/// Writes the rendered report; throws IoError for an unwritable path.
void emit_report(const ExperimentReport& rep, ReportFormat format, const std::string& path);

// Building blocks shared with the CLI and the tests.

/// An extremal family member with its normalization and potential norm.
struct FamilyMember {
  ExtremalSpec spec;
  SampledFunction phi;        // moment-normalized when required
  double phi_power = 0.0;     // ||phi||_{n/alpha}^{n/alpha}
  double tphi_power = 0.0;    // ||T phi||_{n/alpha}^{n/alpha}
  bool normalized = false;
};

/// Moment normalization of degree n-1 is applied unless n/2 > alpha.
bool needs_moment_normalization(int n, double alpha);
FamilyMember build_member(const KernelSpec& k, const ExtremalSpec& spec, int cells_per_decade,
                          bool with_potential_norm = true);

/// max over eps in {1e-2, 1e-3, 1e-4}, r in {1, 2} of ||T phi||^{n/alpha}/r^n,
/// with 20% headroom.
double calibrate_C1(const KernelSpec& k, int cells_per_decade);

/// T(scale * phi) on a shell grid of B_{radius}: the field used by blow-up
/// functionals.
SampledFunction potential_on_ball(const KernelSpec& k, const SampledFunction& phi, double scale, double radius);

}  // namespace adamsq
