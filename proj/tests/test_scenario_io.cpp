#include <cmath>

#include <doctest.h>

#include "adt/scenario_io.hpp"

using namespace adt;

namespace {

const char* kUnivariate = R"({
  "family": "gamma",
  "use_condition": -0.4,
  "alpha": 0.5,
  "times": [0.25, 0.5, 0.75, 1.0],
  "gamma1": {"beta0": 0.23, "beta1": 0.53, "nu": 1.0, "z0": 5.16}
})";

}  // namespace

TEST_CASE("parses a minimal univariate config") {
  const ScenarioFile f = parse_scenario_json(kUnivariate, "test");
  CHECK(f.scenario.family == ModelFamily::Gamma);
  CHECK(f.scenario.use_condition == -0.4);
  CHECK(f.scenario.alpha == 0.5);
  CHECK(f.scenario.schedule.intervals() == 4);
  CHECK(f.scenario.gamma1.z0 == 5.16);
  CHECK(f.warnings.empty());
  CHECK_FALSE(f.sweep.has_value());
  CHECK_FALSE(f.fixed_design.has_value());
  // defaults
  CHECK(f.optimizer.grid_step == 0.01);
}

TEST_CASE("rejects unknown keys at every level") {
  CHECK_THROWS_AS(parse_scenario_json(R"({"family": "gamma", "use_condition": -0.4,
      "alpha": 0.5, "times": [1.0],
      "gamma1": {"beta0": 0, "beta1": 1, "nu": 1, "z0": 1},
      "extra_key": 3})",
                                      "test"),
                  ConfigError);
  CHECK_THROWS_AS(parse_scenario_json(R"({"family": "gamma", "use_condition": -0.4,
      "alpha": 0.5, "times": [1.0],
      "gamma1": {"beta0": 0, "beta1": 1, "nu": 1, "z0": 1, "typo": 2}})",
                                      "test"),
                  ConfigError);
}

TEST_CASE("rejects malformed or inconsistent configs") {
  CHECK_THROWS_AS(parse_scenario_json("not json at all", "test"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_json(R"({"family": "weibull"})", "test"), ConfigError);
  // missing gamma1
  CHECK_THROWS_AS(parse_scenario_json(R"({"family": "gamma", "use_condition": -0.4,
      "alpha": 0.5, "times": [1.0]})",
                                      "test"),
                  ConfigError);
  // alpha out of range
  CHECK_THROWS_AS(parse_scenario_json(R"({"family": "gamma", "use_condition": -0.4,
      "alpha": 1.5, "times": [1.0],
      "gamma1": {"beta0": 0, "beta1": 1, "nu": 1, "z0": 1}})",
                                      "test"),
                  ConfigError);
  // gamma2 present for the univariate family
  CHECK_THROWS_AS(parse_scenario_json(R"({"family": "gamma", "use_condition": -0.4,
      "alpha": 0.5, "times": [1.0],
      "gamma1": {"beta0": 0, "beta1": 1, "nu": 1, "z0": 1},
      "gamma2": {"beta0": 0, "beta1": 1, "nu": 1, "z0": 1}})",
                                      "test"),
                  ConfigError);
  // non-increasing times
  CHECK_THROWS_AS(parse_scenario_json(R"({"family": "gamma", "use_condition": -0.4,
      "alpha": 0.5, "times": [0.5, 0.5],
      "gamma1": {"beta0": 0, "beta1": 1, "nu": 1, "z0": 1}})",
                                      "test"),
                  ConfigError);
}

TEST_CASE("collects soft warnings") {
  const ScenarioFile f = parse_scenario_json(R"({"family": "gamma", "use_condition": 0.3,
      "alpha": 0.5, "times": [1.0],
      "gamma1": {"beta0": 0, "beta1": -1, "nu": 1, "z0": 1}})",
                                             "test");
  CHECK(f.warnings.size() == 2);
}

TEST_CASE("parses optional sections") {
  const ScenarioFile f = parse_scenario_json(R"({
    "family": "gamma_lmem",
    "use_condition": -0.4,
    "alpha": 0.5,
    "times": [0.25, 0.5, 0.75, 1.0],
    "gamma1": {"beta0": 0.23, "beta1": 0.53, "nu": 1.0, "z0": 5.16},
    "lmem": {"beta20": 2.35, "beta21": 0.06, "beta22": 0.28, "beta23": 0.04,
             "sigma0_sq": 0.0064, "sigma_eps_sq": 0.0081, "y20": 3.73},
    "optimizer": {"grid_step": 0.02, "tol": 1e-6, "max_iter": 2000},
    "sweep": {"param": "beta10", "from": -1.0, "to": 2.0, "step": 0.05},
    "fixed_design": {"points": [0.0, 1.0], "weights": [0.78, 0.22]},
    "validate": {"n_units": 100, "replications": 50, "seed": 7}
  })",
                                             "test");
  CHECK(f.optimizer.grid_step == 0.02);
  CHECK(f.optimizer.max_iter == 2000);
  REQUIRE(f.sweep.has_value());
  CHECK(f.sweep->param == "beta10");
  REQUIRE(f.fixed_design.has_value());
  CHECK(f.fixed_design->weights()[0] == 0.78);
  REQUIRE(f.validate.has_value());
  CHECK(f.validate->seed == 7);
}

TEST_CASE("sweep parameter resolution is family dependent") {
  ScenarioFile gl = parse_scenario_json(R"({
    "family": "gamma_lmem", "use_condition": -0.4, "alpha": 0.5, "times": [1.0],
    "gamma1": {"beta0": 0.23, "beta1": 0.53, "nu": 1.0, "z0": 5.16},
    "lmem": {"beta20": 2.35, "beta21": 0.06, "beta22": 0.28, "beta23": 0.04,
             "sigma0_sq": 0.0064, "sigma_eps_sq": 0.0081, "y20": 3.73}
  })",
                                        "test");
  set_sweep_parameter(gl.scenario, "beta10", 1.0);
  CHECK(gl.scenario.gamma1.beta0 == 1.0);
  set_sweep_parameter(gl.scenario, "beta20", 9.0);
  CHECK(gl.scenario.lmem->beta20 == 9.0);  // lmem block under gamma_lmem
  set_sweep_parameter(gl.scenario, "x_u", -0.2);
  CHECK(gl.scenario.use_condition == -0.2);
  CHECK_THROWS_AS(set_sweep_parameter(gl.scenario, "nu2", 1.0), ConfigError);
  CHECK_THROWS_AS(set_sweep_parameter(gl.scenario, "banana", 1.0), ConfigError);

  ScenarioFile gg = parse_scenario_json(R"({
    "family": "gamma_gamma", "use_condition": -0.4, "alpha": 0.5, "times": [1.0],
    "gamma1": {"beta0": 0.23, "beta1": 0.53, "nu": 1.0, "z0": 5.16},
    "gamma2": {"beta0": 0.31, "beta1": 0.35, "nu": 0.88, "z0": 4.6}
  })",
                                        "test");
  set_sweep_parameter(gg.scenario, "beta20", 0.5);
  CHECK(gg.scenario.gamma2->beta0 == 0.5);  // second gamma block under gamma_gamma
  set_sweep_parameter(gg.scenario, "nu2", 1.0);
  CHECK(gg.scenario.gamma2->nu == 1.0);
  CHECK_THROWS_AS(set_sweep_parameter(gg.scenario, "beta22", 1.0), ConfigError);
}

TEST_CASE("number formatting is stable at 10 significant digits") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.7884404686) == "0.7884404686");
  CHECK(format_number(5.391566272789783) == "5.391566273");
  CHECK(format_number(1e-12) == "1e-12");
}
