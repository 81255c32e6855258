// adamsq: command-line front end for the kernels, potentials, extremal
// families, functionals and scenario checks.

#include "adamsq/experiment.hpp"
#include "adamsq/extremal.hpp"
#include "adamsq/functional.hpp"
#include "adamsq/io.hpp"
#include "adamsq/potential.hpp"
#include "adamsq/rearrange.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace adamsq;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::string config;
  unsigned long long seed = 20240601ULL;
  bool seed_set = false;
  std::string out = ".";
  std::string format = "json";
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ReportFormat parse_format(const std::string& f) {
  if (f == "csv") return ReportFormat::csv;
  if (f == "json") return ReportFormat::json;
  throw std::invalid_argument("format must be csv or json");
}

std::string out_path(const Globals& g, const std::string& stem) {
  fs::create_directories(g.out);
  return (fs::path(g.out) / (stem + (g.format == "csv" ? ".csv" : ".json"))).string();
}

Region parse_region(const std::string& text) {
  if (text == "all") return Region::all();
  std::vector<double> nums;
  std::string kind = text.substr(0, text.find(':'));
  std::stringstream ss(text.substr(kind.size()));
  std::string item;
  while (std::getline(ss, item, ':')) {
    if (!item.empty()) nums.push_back(std::stod(item));
  }
  if (kind == "ball" && nums.size() == 1) return Region::ball(nums[0]);
  if (kind == "annulus" && nums.size() == 2) return Region::annulus(nums[0], nums[1]);
  throw std::invalid_argument("region must be all, ball:<R> or annulus:<a>:<b>");
}

int cmd_constants(const std::string& kernel, int n, double alpha) {
  const KernelSpec k = make_kernel(kernel, n, alpha);
  nlohmann::ordered_json j;
  j["kernel"] = k.id;
  j["n"] = n;
  j["alpha"] = alpha;
  j["c_alpha"] = constant_c_alpha(n, alpha);
  j["A_g"] = constant_A_g(k);
  j["gamma_fractional_laplacian"] = constant_gamma(OperatorChoice::fractional_laplacian, n, alpha);
  try {
    j["gamma_gradient_power"] = constant_gamma(OperatorChoice::gradient_power, n, alpha);
  } catch (const std::invalid_argument&) {
    j["gamma_gradient_power"] = nullptr;
  }
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

// Evaluation points: one row of n coordinates per line; blank lines, '#'
// comments and a non-numeric header are skipped.
std::vector<Point> read_points(const std::string& path, int n) {
  std::istringstream in(slurp(path));
  std::vector<Point> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    Point x{};
    int d = 0;
    bool numeric = true;
    while (std::getline(ss, cell, ',') && d < 3) {
      try {
        x[d++] = std::stod(cell);
      } catch (const std::logic_error&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (pts.empty()) continue;
      throw std::invalid_argument("points file: non-numeric row '" + line + "'");
    }
    if (d != n) throw std::invalid_argument("points file: expected " + std::to_string(n) + " coordinates per row");
    pts.push_back(x);
  }
  return pts;
}

int cmd_potential(const std::string& input, const std::string& kernel, double alpha,
                  const std::vector<double>& radii, const std::string& points_file, const std::string& output) {
  const SampledFunction f = load_sampled_csv(input);
  const KernelSpec k = make_kernel(kernel, f.n, alpha);
  std::vector<Point> points;
  if (!points_file.empty()) {
    points = read_points(points_file, f.n);
  } else if (!radii.empty()) {
    for (double r : radii) points.push_back(Point{r, 0, 0});
  } else {
    if (f.size() > 4096) throw std::invalid_argument("more than 4096 nodes: pass --points or --radii");
    points = f.nodes;
  }
  const PotentialField tf = apply_potential(k, f, points);
  std::ostringstream csv;
  const char* axis[] = {"x", "y", "z"};
  for (int d = 0; d < f.n; ++d) csv << axis[d] << ",";
  for (int c = 0; c < tf.base.components; ++c) csv << (tf.base.components == 1 ? "value" : "value" + std::to_string(c)) << ",";
  csv << "error\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int d = 0; d < f.n; ++d) csv << format_double(points[i][d]) << ",";
    for (int c = 0; c < tf.base.components; ++c) csv << format_double(tf.base.value(i, c)) << ",";
    csv << format_double(tf.quadrature_error[i]) << "\n";
  }
  if (output.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(output, csv.str());
  }
  return kExitPass;
}

int cmd_rearrange(const std::string& input, const std::string& output) {
  const SampledFunction f = load_sampled_csv(input);
  const DecreasingProfile d = decreasing_rearrangement(f);
  std::ostringstream csv;
  csv << "t,f_star,f_double_star\n";
  for (std::size_t i = 0; i < d.t_grid.size(); ++i) {
    csv << format_double(d.t_grid[i]) << "," << format_double(d.star[i]) << "," << format_double(d.double_star[i])
        << "\n";
  }
  if (output.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(output, csv.str());
  }
  return kExitPass;
}

int cmd_extremal(const std::string& kernel, int n, double alpha, double eps, double r, double q, int cpd,
                 const std::string& output) {
  const KernelSpec k = make_kernel(kernel, n, alpha);
  const ExtremalSpec spec = make_extremal_spec(k, eps, r, q);
  const bool riesz = k.family == KernelFamily::riesz;
  const FamilyMember m = build_member(k, spec, cpd, riesz);
  save_sampled_csv(output, m.phi);
  nlohmann::ordered_json j;
  j["kernel"] = k.id;
  j["n"] = n;
  j["alpha"] = alpha;
  j["epsilon"] = spec.epsilon;
  j["r"] = spec.r;
  j["q"] = std::isinf(q) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(q);
  j["A_g"] = spec.A_g;
  j["b_r"] = spec.b_r;
  j["b_eps_r"] = spec.b_eps_r;
  j["moment_normalized"] = m.normalized;
  j["phi_norm_power"] = m.phi_power;
  if (riesz) j["potential_norm_power"] = m.tphi_power;
  if (m.normalized) j["moments"] = basis_moments(m.phi, ball_poly_basis(n, n - 1, r));
  write_text_file(output + ".json", j.dump(2) + "\n");
  std::cout << output << "\n";
  return kExitPass;
}

int cmd_functional(const std::string& input, double constant, const std::string& region, double sigma,
                   const std::string& truncate, double alpha) {
  const SampledFunction u = load_sampled_csv(input);
  FunctionalOptions opt;
  opt.constant = constant;
  opt.region = parse_region(region);
  opt.sigma = sigma;
  opt.power = u.n / (u.n - alpha);
  if (truncate == "auto") {
    opt.truncation = exp_order(u.n, alpha);
  } else if (!truncate.empty() && truncate != "none") {
    opt.truncation = std::stoi(truncate);
  }
  const FunctionalReport rep = exp_functional(u, opt);
  nlohmann::ordered_json j;
  j["value"] = std::isinf(rep.value) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(rep.value);
  j["log_value"] = rep.log_value;
  j["constant_used"] = rep.constant_used;
  j["region"] = rep.region;
  j["measure"] = rep.measure;
  j["truncation"] = rep.truncation < 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(rep.truncation);
  if (rep.overflow) j["overflow_node"] = rep.overflow_node;
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

ScenarioConfig scenario_config(const Globals& g, const std::string& name) {
  ScenarioConfig cfg = default_config(name);
  if (!g.config.empty()) {
    const auto text = slurp(g.config);
    const auto j = nlohmann::json::parse(text, nullptr, false);
    // A config naming another scenario leaves this one at its defaults.
    if (!j.is_discarded() && j.is_object() && j.contains("scenario") && j["scenario"] != name) return cfg;
    cfg = config_from_json(text, cfg);
  }
  if (g.seed_set) cfg.seed = g.seed;
  return cfg;
}

int cmd_verify(const Globals& g, const std::string& which) {
  std::vector<std::string> names;
  if (which == "all") {
    names = scenario_names();
  } else {
    names = {which};
  }
  std::vector<ScenarioConfig> configs;
  for (const auto& s : names) {
    configs.push_back(scenario_config(g, s));
    validate_config(configs.back());
  }
  const ReportFormat fmt = parse_format(g.format);
  bool all_pass = true;
  for (const auto& cfg : configs) {
    const ExperimentReport rep = run_scenario(cfg);
    emit_report(rep, fmt, out_path(g, cfg.scenario));
    std::cout << cfg.scenario << ": " << (rep.pass ? "pass" : "fail") << " measured=" << format_double(rep.fitted)
              << " target=" << format_double(rep.target) << "\n";
    all_pass = all_pass && rep.pass;
  }
  return all_pass ? kExitPass : kExitFail;
}

// Summarizes the JSON reports found in the output directory.
int cmd_report(const Globals& g) {
  if (!fs::is_directory(g.out)) throw std::invalid_argument("no report directory " + g.out);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(g.out)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  bool all_pass = true;
  std::cout << "scenario,measured,target,tolerance,verdict\n";
  for (const auto& p : files) {
    const auto j = nlohmann::json::parse(slurp(p.string()), nullptr, false);
    if (j.is_discarded() || !j.contains("scenario") || !j.contains("verdict")) continue;
    auto num = [&](const char* key) { return j[key].is_number() ? format_double(j[key].get<double>()) : "nan"; };
    const std::string verdict = j["verdict"].get<std::string>();
    all_pass = all_pass && verdict == "pass";
    std::cout << j["scenario"].get<std::string>() << "," << num("fitted") << "," << num("target") << ","
              << num("tolerance") << "," << verdict << "\n";
  }
  return all_pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for sharp exponential inequalities of Riesz-type potentials"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON file with scenario overrides");
  app.add_option_function<unsigned long long>(
      "--seed", [&](const unsigned long long& s) { g.seed = s; g.seed_set = true; }, "Random seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}));

  std::string kernel = "riesz";
  int n = 2;
  double alpha = 1.0;

  auto* constants = app.add_subcommand("constants", "Sharp constants for a kernel");
  constants->add_option("--kernel", kernel);
  constants->add_option("--n", n)->check(CLI::Range(1, 3));
  constants->add_option("--alpha", alpha);

  std::string input, output, points_file;
  std::vector<double> radii;
  auto* potential = app.add_subcommand("potential", "Potential of a sampled function");
  potential->add_option("--input", input)->required();
  potential->add_option("--kernel", kernel);
  potential->add_option("--alpha", alpha)->required();
  potential->add_option("--points", points_file, "CSV of evaluation points, one per row");
  potential->add_option("--radii", radii, "Evaluation radii along the first axis");
  potential->add_option("--out", output, "Field CSV; stdout when absent");

  auto* rearrange = app.add_subcommand("rearrange", "Decreasing rearrangement of a sampled function");
  rearrange->add_option("--input", input)->required();
  rearrange->add_option("--out", output, "Profile CSV; stdout when absent");

  double eps = 1e-3, r = 1.0;
  std::string q_text = "1";
  int cpd = 64;
  auto* extremal = app.add_subcommand("extremal", "Moment-normalized extremal profile");
  extremal->add_option("--kernel", kernel);
  extremal->add_option("--n", n)->check(CLI::Range(1, 3));
  extremal->add_option("--alpha", alpha);
  extremal->add_option("--eps", eps);
  extremal->add_option("--r", r);
  extremal->add_option("--q", q_text, "Number or inf");
  extremal->add_option("--cells-per-decade", cpd);
  extremal->add_option("--out", output, "Profile CSV; a .json sidecar is written next to it")->required();

  double constant = 1.0, sigma = 1.0;
  std::string region = "all", truncate;
  auto* functional = app.add_subcommand("functional", "Exponential functional of a sampled field");
  functional->add_option("--input", input)->required();
  functional->add_option("--constant", constant)->required();
  functional->add_option("--region", region, "all, ball:<R> or annulus:<a>:<b>");
  functional->add_option("--sigma", sigma);
  functional->add_option("--truncate", truncate, "auto, none or an order N");
  functional->add_option("--alpha", alpha, "Sets the power n/(n-alpha)");

  std::string which;
  auto* verify = app.add_subcommand("verify", "Run a scenario or all of them");
  verify->add_option("scenario", which, "Scenario id or all")->required();

  auto* report = app.add_subcommand("report", "Summarize the reports in --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*constants) return cmd_constants(kernel, n, alpha);
    if (*potential) return cmd_potential(input, kernel, alpha, radii, points_file, output);
    if (*rearrange) return cmd_rearrange(input, output);
    if (*extremal) {
      const double q = q_text == "inf" ? kInfinity : std::stod(q_text);
      return cmd_extremal(kernel, n, alpha, eps, r, q, cpd, output);
    }
    if (*functional) return cmd_functional(input, constant, region, sigma, truncate, alpha);
    if (*verify) return cmd_verify(g, which);
    if (*report) return cmd_report(g);
  } catch (const std::invalid_argument& e) {
    std::cerr << "adamsq: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "adamsq: bad config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "adamsq: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
