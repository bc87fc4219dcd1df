#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "levylab/errors.hpp"
#include "levylab/report.hpp"
#include "levylab/runner.hpp"

using namespace levylab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string first_line(const fs::path& p) {
  const std::string all = slurp(p);
  return all.substr(0, all.find('\n'));
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

const char* kBaseConfig = R"({
  "seed": 42,
  "paths": 40,
  "grid": {"t_max": 1.0, "theta": 0.5, "count": 11},
  "driver": {"kind": "compound_poisson", "rate": 5.0,
             "jumps": {"kind": "uniform", "a": -1.0, "b": 1.0},
             "drift": [0.3]},
  "sigma": {"kind": "sinusoid", "a": 2.0, "b": 1.0, "c": 0.0, "d": 0.0},
  "x0": [0.0],
  "scaling": {"kind": "power", "exponent": 1.0},
  "verifiers": [{"name": "estimate_limit", "target": "driver"},
                {"name": "estimate_limit", "target": "solution"},
                {"name": "coupling_gap"},
                {"name": "qv_decay", "p": 1.0}]
})";

ConfigError capture(const std::string& text) {
  try {
    parse_experiment_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("unreachable", "");
}

/// Rewrites one top-level entry of the base config.
std::string with(const std::string& key, const std::string& json_value) {
  nlohmann::json root = nlohmann::json::parse(kBaseConfig);
  if (json_value.empty()) {
    root.erase(key);
  } else {
    root[key] = nlohmann::json::parse(json_value);
  }
  return root.dump(2);
}

}  // namespace

TEST_CASE("config parsing reports the offending field") {
  CHECK(capture(with("seed", "")).field == "seed");
  CHECK(capture(with("seed", "-3")).field == "seed");
  CHECK(capture(with("seed", "1.5")).field == "seed");
  CHECK(capture(with("paths", "1")).field == "paths");
  CHECK(capture(with("x0", "[0.0, 1.0]")).field == "x0");
  CHECK(capture(with("grid", R"({"t_max": 1.0, "theta": 1.2, "count": 11})"))
            .field == "grid");
  CHECK(capture(with("verifiers", R"([{"name": "nope"}])")).field ==
        "verifiers[0].name");
  CHECK(capture(with("verifiers", R"([{"name": "qv_decay"}])")).field ==
        "verifiers[0].p");
  CHECK(capture(with("driver", R"({"kind": "warp"})")).field ==
        "driver.kind");
  CHECK(capture(with("driver",
                     R"({"kind": "stable", "alpha": 2.0, "beta": 0.5,
                         "scale": 1.0})"))
            .field == "driver.beta");

  // Unknown keys anywhere are hard errors, with their full path.
  nlohmann::json extra = nlohmann::json::parse(kBaseConfig);
  extra["typo"] = 1;
  CHECK(capture(extra.dump()).field == "typo");
  nlohmann::json nested = nlohmann::json::parse(kBaseConfig);
  nested["grid"]["tmax"] = 1.0;
  CHECK(capture(nested.dump()).field == "grid.tmax");
}

TEST_CASE("config syntax errors carry a line number") {
  const ConfigError e = capture("{\n  \"seed\": 42,\n  oops\n}");
  CHECK(e.field == "(syntax)");
  CHECK(e.line == 3);
}

TEST_CASE("parsed fields land in the experiment config") {
  const ExperimentConfig cfg = parse_experiment_config(kBaseConfig);
  CHECK(cfg.seed == 42);
  CHECK(cfg.paths == 40);
  CHECK(cfg.grid.times.size() == 12);
  CHECK(cfg.driver_kind == "compound_poisson");
  CHECK(cfg.triplet.dim == 1);
  CHECK(cfg.sigma->state_dim() == 1);
  CHECK(cfg.initial_state[0] == 0.0);
  REQUIRE(cfg.verifiers.size() == 4);
  CHECK(cfg.verifiers[1].target == "solution");
  CHECK(cfg.verifiers[3].p == 1.0);
  CHECK(cfg.workers == 1);

  // The sampled driver honours the declared seed/path addressing.
  const PathSkeleton p0 = cfg.make_driver(0);
  const PathSkeleton p0_again = cfg.make_driver(0);
  CHECK((p0.values - p0_again.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("experiments write a deterministic report tree") {
  const fs::path dir_a = fresh_dir("levylab_runner_a");
  const fs::path dir_b = fresh_dir("levylab_runner_b");

  ExperimentConfig cfg = parse_experiment_config(kBaseConfig);
  cfg.dump_paths = true;

  cfg.output_dir = dir_a;
  cfg.workers = 1;
  std::ostringstream log_a;
  const int rc_a = run_experiment(cfg, log_a);
  CHECK(rc_a == 0);

  cfg.output_dir = dir_b;
  cfg.workers = 4;
  std::ostringstream log_b;
  const int rc_b = run_experiment(cfg, log_b);
  CHECK(rc_b == 0);

  const char* expected_files[] = {
      "report.json",
      "verdicts.csv",
      "verifier_01_estimate_limit.csv",
      "verifier_02_estimate_limit_solution.csv",
      "verifier_03_coupling_gap.csv",
      "verifier_04_qv_decay.csv",
      "driver_paths.csv",
      "solution_paths.csv",
  };
  for (const char* f : expected_files) {
    CAPTURE(f);
    REQUIRE(fs::exists(dir_a / f));
    REQUIRE(fs::exists(dir_b / f));
    // Byte-identical regardless of worker count.
    CHECK(slurp(dir_a / f) == slurp(dir_b / f));
  }

  CHECK(first_line(dir_a / "verdicts.csv") ==
        "verifier,verdict,agrees_with_oracle,pass");
  CHECK(first_line(dir_a / "verifier_01_estimate_limit.csv") ==
        "time,median,q25,q75,max,n_paths");
  CHECK(first_line(dir_a / "driver_paths.csv") ==
        "path_id,time,component_index,value,is_pre_jump");
  CHECK(first_line(dir_a / "solution_paths.csv") ==
        "path_id,time,component_index,value,is_pre_jump,kind");

  const nlohmann::json report =
      nlohmann::json::parse(slurp(dir_a / "report.json"));
  CHECK(report.at("schema_version") == 1);
  CHECK(report.at("all_pass") == true);
  CHECK(report.at("config").at("seed") == 42);
  CHECK(report.at("config").at("driver") == "compound_poisson");
  CHECK(report.at("config").count("workers") == 0);
  REQUIRE(report.at("verifiers").is_array());
  CHECK(report.at("verifiers").size() == 4);
  for (const auto& v : report.at("verifiers"))
    CHECK(v.at("agrees_with_oracle") == true);

  // The jump-limit verifier sees the bounded-variation drift...
  CHECK(report.at("verifiers")[0].at("verdict") == "converges");
  const double limit = report.at("verifiers")[0].at("limit")[0].get<double>();
  CHECK(limit == doctest::Approx(0.3).epsilon(0.05));
  // ...and the solution-side limit picks up sigma(x0) = 2.
  const double tl = report.at("verifiers")[1].at("limit")[0].get<double>();
  CHECK(tl == doctest::Approx(0.6).epsilon(0.05));

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("a failing verifier flips the exit code and the report") {
  const fs::path dir = fresh_dir("levylab_runner_fail");
  // Rescaling a drifting jump process by sqrt(t) diverges, so demanding a
  // stable Brownian-style band must fail.
  nlohmann::json root = nlohmann::json::parse(kBaseConfig);
  root["scaling"] = {{"kind", "power"}, {"exponent", 0.4}};
  root["verifiers"] = nlohmann::json::array(
      {{{"name", "estimate_limit"}, {"target", "driver"}}});
  root["grid"] = {{"t_max", 0.01}, {"theta", 0.5}, {"count", 14}};

  ExperimentConfig cfg = parse_experiment_config(root.dump());
  cfg.output_dir = dir;
  std::ostringstream log;
  const int rc = run_experiment(cfg, log);

  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
  const bool all = report.at("all_pass").get<bool>();
  CHECK(rc == (all ? 0 : 1));
  if (!all) CHECK(log.str().find("disagrees") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("the environment can redirect output") {
  const fs::path dir = fresh_dir("levylab_runner_env");
  setenv("LEVYLAB_OUTPUT_DIR", dir.string().c_str(), 1);
  ExperimentConfig cfg = parse_experiment_config(kBaseConfig);
  cfg.output_dir.clear();
  std::ostringstream log;
  run_experiment(cfg, log);
  unsetenv("LEVYLAB_OUTPUT_DIR");
  CHECK(fs::exists(dir / "report.json"));
  CHECK_FALSE(fs::exists(dir / "driver_paths.csv"));  // dump_paths off
  fs::remove_all(dir);

  // With neither a directory nor the environment, the run must refuse.
  ExperimentConfig bare = parse_experiment_config(kBaseConfig);
  bare.output_dir.clear();
  std::ostringstream sink;
  CHECK_THROWS_AS(run_experiment(bare, sink), ConfigError);
}

TEST_CASE("the catalog lists every config name") {
  const std::string catalog = list_catalog();
  for (const char* needle :
       {"brownian", "compound_poisson", "stable", "truncated_exponential",
        "constant", "diagonal", "affine", "sinusoid", "bilinear", "power",
        "khintchine", "coupling_gap", "estimate_limit", "limsup",
        "qv_decay"}) {
    CAPTURE(needle);
    CHECK(catalog.find(needle) != std::string::npos);
  }
  CHECK(catalog == list_catalog());
}

TEST_CASE("doubles survive the report round trip") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, 2.5e-308,
                   123456789.123456789}) {
    CAPTURE(x);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-2.0) == "-2");
}
