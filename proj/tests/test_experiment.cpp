#include "adamsq/experiment.hpp"
#include "adamsq/io.hpp"
#include "adamsq/special.hpp"

#include "catch_amalgamated.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace adamsq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}
}  // namespace

TEST_CASE("config validation") {
  for (const auto& name : scenario_names()) REQUIRE_NOTHROW(validate_config(default_config(name)));
  REQUIRE_THROWS_AS(default_config("nope"), std::invalid_argument);
  auto cfg = default_config("norm_slope");
  cfg.epsilons = {1e-3, 1e-2};
  REQUIRE_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg = default_config("norm_slope");
  cfg.tolerance = -1.0;
  REQUIRE_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg = default_config("trace_blowup");
  cfg.sigma = 1.5;
  REQUIRE_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg = default_config("norm_slope");
  cfg.alpha = 2.0;
  REQUIRE_THROWS_AS(validate_config(cfg), std::invalid_argument);
}

TEST_CASE("JSON config overrides") {
  const auto base = default_config("norm_slope");
  const auto cfg = config_from_json(R"({"epsilons": [0.1, 0.01], "tolerance": 0.5, "seed": 7})", base);
  REQUIRE(cfg.epsilons == std::vector<double>{0.1, 0.01});
  REQUIRE(cfg.tolerance == 0.5);
  REQUIRE(cfg.seed == 7);
  REQUIRE(cfg.scenario == "norm_slope");
  REQUIRE(config_from_json(R"({"scenario": "taylor_match"})", base).scenario == "taylor_match");
  REQUIRE_THROWS_AS(config_from_json("{not json", base), std::invalid_argument);
  REQUIRE_THROWS_AS(config_from_json(R"({"n": "two"})", base), std::invalid_argument);
}

TEST_CASE("report rendering") {
  ExperimentReport empty;
  empty.scenario = "norm_slope";
  REQUIRE(render_report(empty, ReportFormat::csv) == "scenario,parameters,measured,target,tolerance,verdict\n");
  ExperimentReport one = empty;
  ReportRow row;
  row.params = {{"eps", 0.01}};
  row.measured = 0.1;
  row.target = 0.1;
  row.tolerance = 0.01;
  row.pass = true;
  one.rows.push_back(row);
  const auto csv = render_report(one, ReportFormat::csv);
  REQUIRE(csv == "scenario,parameters,measured,target,tolerance,verdict\n"
                 "norm_slope,eps=0.01,0.10000000000000001,0.10000000000000001,0.01,pass\n");
  const auto json = render_report(one, ReportFormat::json);
  REQUIRE(json.back() == '\n');
  REQUIRE(json[json.size() - 2] != '\n');
  const auto j = nlohmann::json::parse(json);
  REQUIRE(j.at("rows").at(0).at("verdict") == "pass");
  REQUIRE(j.at("rows").at(0).at("measured").get<double>() == 0.1);
  REQUIRE(j.at("fitted").is_null());
}

TEST_CASE("scenario fits") {
  SECTION("norm slope") {
    const auto rep = run_scenario(default_config("norm_slope"));
    REQUIRE(rep.pass);
    REQUIRE_THAT(rep.fitted, WithinRel(kPi, 0.01));
    REQUIRE(std::isfinite(rep.half_width));
    REQUIRE(rep.rows.size() == 6);
  }
  SECTION("blow-up at theta = 1.2") {
    const auto rep = run_scenario(default_config("blowup_q1"));
    REQUIRE(rep.pass);
    REQUIRE_THAT(rep.fitted, WithinRel(0.4, 0.05));
  }
  SECTION("dilation consistency of the tail law") {
    auto cfg = default_config("tail_scaling");
    const auto a = run_scenario(cfg);
    for (auto& r : cfg.radii) r *= 2.0;
    const auto b = run_scenario(cfg);
    REQUIRE(a.pass);
    REQUIRE(b.pass);
    REQUIRE_THAT(b.fitted, WithinAbs(a.fitted, 1e-3));
  }
  SECTION("a failing sub-step becomes a diagnostic row") {
    auto cfg = default_config("adachi_scaling");
    cfg.C1 = 1e-6;
    cfg.thetas = {0.5, 0.6, 0.7};
    const auto rep = run_scenario(cfg);
    REQUIRE_FALSE(rep.pass);
    REQUIRE_FALSE(rep.diagnostic.empty());
    REQUIRE_FALSE(rep.rows.empty());
    REQUIRE(rep.rows.back().pass == false);
  }
}

TEST_CASE("determinism and files") {
  const auto dir = std::filesystem::temp_directory_path() / "adamsq_experiment_test";
  std::filesystem::create_directories(dir);
  const auto cfg = default_config("taylor_match");
  const auto a = run_scenario(cfg), b = run_scenario(cfg);
  const auto pa = (dir / "a.csv").string(), pb = (dir / "b.csv").string();
  emit_report(a, ReportFormat::csv, pa);
  emit_report(b, ReportFormat::csv, pb);
  REQUIRE(slurp(pa) == slurp(pb));
  emit_report(a, ReportFormat::json, pa);
  emit_report(b, ReportFormat::json, pb);
  REQUIRE(slurp(pa) == slurp(pb));
  REQUIRE_THROWS_AS(emit_report(a, ReportFormat::csv, (dir / "missing" / "x.csv").string()), IoError);
  std::filesystem::remove_all(dir);
}
