#include "adt/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

namespace adt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ConfigError(origin + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& origin, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail(origin, "unknown key '" + it.key() + "' in " + where);
}

double require_number(const json& obj, const std::string& key, const std::string& origin,
                      const std::string& where) {
  if (!obj.contains(key)) fail(origin, "missing key '" + key + "' in " + where);
  if (!obj[key].is_number()) fail(origin, "key '" + key + "' in " + where + " must be a number");
  return obj[key].get<double>();
}

GammaComponentParams parse_gamma(const json& obj, const std::string& origin,
                                 const std::string& where) {
  if (!obj.is_object()) fail(origin, where + " must be an object");
  reject_unknown_keys(obj, {"beta0", "beta1", "nu", "z0"}, origin, where);
  GammaComponentParams p;
  p.beta0 = require_number(obj, "beta0", origin, where);
  p.beta1 = require_number(obj, "beta1", origin, where);
  p.nu = require_number(obj, "nu", origin, where);
  p.z0 = require_number(obj, "z0", origin, where);
  return p;
}

LmemComponentParams parse_lmem(const json& obj, const std::string& origin) {
  if (!obj.is_object()) fail(origin, "lmem must be an object");
  reject_unknown_keys(
      obj, {"beta20", "beta21", "beta22", "beta23", "sigma0_sq", "sigma_eps_sq", "y20"}, origin,
      "lmem");
  LmemComponentParams p;
  p.beta20 = require_number(obj, "beta20", origin, "lmem");
  p.beta21 = require_number(obj, "beta21", origin, "lmem");
  p.beta22 = require_number(obj, "beta22", origin, "lmem");
  p.beta23 = require_number(obj, "beta23", origin, "lmem");
  p.sigma0_sq = require_number(obj, "sigma0_sq", origin, "lmem");
  p.sigma_eps_sq = require_number(obj, "sigma_eps_sq", origin, "lmem");
  p.y20 = require_number(obj, "y20", origin, "lmem");
  return p;
}

Design parse_design(const json& obj, const std::string& origin, const std::string& where) {
  if (!obj.is_object()) fail(origin, where + " must be an object");
  reject_unknown_keys(obj, {"points", "weights"}, origin, where);
  if (!obj.contains("points") || !obj.contains("weights"))
    fail(origin, where + " requires 'points' and 'weights' arrays");
  std::vector<double> pts, wts;
  try {
    pts = obj["points"].get<std::vector<double>>();
    wts = obj["weights"].get<std::vector<double>>();
  } catch (const json::exception& e) {
    fail(origin, where + ": " + e.what());
  }
  try {
    return Design(std::move(pts), std::move(wts));
  } catch (const std::exception& e) {
    fail(origin, where + ": " + e.what());
  }
}

}  // namespace

ScenarioFile parse_scenario_json(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!root.is_object()) fail(origin, "top level must be a JSON object");
  reject_unknown_keys(root,
                      {"family", "use_condition", "alpha", "times", "gamma1", "gamma2", "lmem",
                       "optimizer", "sweep", "fixed_design", "validate"},
                      origin, "top level");

  ScenarioFile out;
  Scenario& s = out.scenario;

  if (!root.contains("family") || !root["family"].is_string())
    fail(origin, "'family' must be one of \"gamma\", \"gamma_gamma\", \"gamma_lmem\"");
  const std::string fam = root["family"].get<std::string>();
  if (fam == "gamma")
    s.family = ModelFamily::Gamma;
  else if (fam == "gamma_gamma")
    s.family = ModelFamily::GammaGamma;
  else if (fam == "gamma_lmem")
    s.family = ModelFamily::GammaLmem;
  else
    fail(origin, "unknown family '" + fam + "'");

  s.use_condition = require_number(root, "use_condition", origin, "top level");
  s.alpha = require_number(root, "alpha", origin, "top level");

  if (!root.contains("times") || !root["times"].is_array())
    fail(origin, "'times' must be an array of measurement times");
  std::vector<double> times;
  try {
    times = root["times"].get<std::vector<double>>();
  } catch (const json::exception& e) {
    fail(origin, std::string("'times': ") + e.what());
  }
  try {
    s.schedule = MeasurementSchedule(std::move(times));
  } catch (const std::exception& e) {
    fail(origin, e.what());
  }

  if (!root.contains("gamma1")) fail(origin, "missing 'gamma1' component");
  s.gamma1 = parse_gamma(root["gamma1"], origin, "gamma1");
  if (root.contains("gamma2")) s.gamma2 = parse_gamma(root["gamma2"], origin, "gamma2");
  if (root.contains("lmem")) s.lmem = parse_lmem(root["lmem"], origin);

  try {
    out.warnings = validate(s);
  } catch (const std::exception& e) {
    fail(origin, e.what());
  }

  if (root.contains("optimizer")) {
    const json& opt = root["optimizer"];
    if (!opt.is_object()) fail(origin, "optimizer must be an object");
    reject_unknown_keys(opt, {"grid_step", "tol", "max_iter"}, origin, "optimizer");
    if (opt.contains("grid_step"))
      out.optimizer.grid_step = require_number(opt, "grid_step", origin, "optimizer");
    if (opt.contains("tol")) out.optimizer.tol = require_number(opt, "tol", origin, "optimizer");
    if (opt.contains("max_iter")) {
      if (!opt["max_iter"].is_number_integer())
        fail(origin, "optimizer.max_iter must be an integer");
      out.optimizer.max_iter = opt["max_iter"].get<int>();
    }
    if (!(out.optimizer.grid_step > 0.0 && out.optimizer.grid_step <= 0.5))
      fail(origin, "optimizer.grid_step must be in (0, 0.5]");
    if (out.optimizer.max_iter < 1) fail(origin, "optimizer.max_iter must be positive");
    if (!(out.optimizer.tol > 0.0)) fail(origin, "optimizer.tol must be positive");
  }

  if (root.contains("sweep")) {
    const json& sw = root["sweep"];
    if (!sw.is_object()) fail(origin, "sweep must be an object");
    reject_unknown_keys(sw, {"param", "from", "to", "step"}, origin, "sweep");
    SweepSettings settings;
    if (!sw.contains("param") || !sw["param"].is_string())
      fail(origin, "sweep.param must be a string");
    settings.param = sw["param"].get<std::string>();
    settings.from = require_number(sw, "from", origin, "sweep");
    settings.to = require_number(sw, "to", origin, "sweep");
    settings.step = require_number(sw, "step", origin, "sweep");
    if (!(settings.step > 0.0)) fail(origin, "sweep.step must be positive");
    if (settings.to < settings.from) fail(origin, "sweep.to must be >= sweep.from");
    // reject unknown parameter names up front
    Scenario probe = s;
    try {
      set_sweep_parameter(probe, settings.param, settings.from);
    } catch (const ConfigError&) {
      throw;
    }
    out.sweep = settings;
  }

  if (root.contains("fixed_design"))
    out.fixed_design = parse_design(root["fixed_design"], origin, "fixed_design");

  if (root.contains("validate")) {
    const json& va = root["validate"];
    if (!va.is_object()) fail(origin, "validate must be an object");
    reject_unknown_keys(va, {"n_units", "replications", "seed"}, origin, "validate");
    ValidateSettings settings;
    if (va.contains("n_units")) {
      if (!va["n_units"].is_number_integer()) fail(origin, "validate.n_units must be an integer");
      settings.n_units = va["n_units"].get<int>();
    }
    if (va.contains("replications")) {
      if (!va["replications"].is_number_integer())
        fail(origin, "validate.replications must be an integer");
      settings.replications = va["replications"].get<int>();
    }
    if (va.contains("seed")) {
      if (!va["seed"].is_number_unsigned() && !va["seed"].is_number_integer())
        fail(origin, "validate.seed must be an integer");
      settings.seed = va["seed"].get<std::uint64_t>();
    }
    if (settings.n_units < 4) fail(origin, "validate.n_units must be >= 4");
    if (settings.replications < 1) fail(origin, "validate.replications must be >= 1");
    out.validate = settings;
  }

  return out;
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scenario_json(text, path);
}

void set_sweep_parameter(Scenario& scenario, const std::string& name, double value) {
  auto unknown = [&]() {
    throw ConfigError("unknown sweep parameter '" + name + "' for family " +
                      family_name(scenario.family));
  };
  if (name == "x_u" || name == "use_condition") {
    scenario.use_condition = value;
    return;
  }
  if (name == "alpha") {
    scenario.alpha = value;
    return;
  }
  // first gamma component; beta0/beta1 and the paper's beta10/beta11 aliases
  if (name == "beta0" || name == "beta10") {
    scenario.gamma1.beta0 = value;
    return;
  }
  if (name == "beta1" || name == "beta11") {
    scenario.gamma1.beta1 = value;
    return;
  }
  if (name == "nu" || name == "nu1") {
    scenario.gamma1.nu = value;
    return;
  }
  if (name == "z0" || name == "z10") {
    scenario.gamma1.z0 = value;
    return;
  }
  if (scenario.family == ModelFamily::GammaGamma) {
    if (name == "beta20") {
      scenario.gamma2->beta0 = value;
      return;
    }
    if (name == "beta21") {
      scenario.gamma2->beta1 = value;
      return;
    }
    if (name == "nu2") {
      scenario.gamma2->nu = value;
      return;
    }
    if (name == "z20") {
      scenario.gamma2->z0 = value;
      return;
    }
    unknown();
  }
  if (scenario.family == ModelFamily::GammaLmem) {
    if (name == "beta20") {
      scenario.lmem->beta20 = value;
      return;
    }
    if (name == "beta21") {
      scenario.lmem->beta21 = value;
      return;
    }
    if (name == "beta22") {
      scenario.lmem->beta22 = value;
      return;
    }
    if (name == "beta23") {
      scenario.lmem->beta23 = value;
      return;
    }
    if (name == "sigma0_sq") {
      scenario.lmem->sigma0_sq = value;
      return;
    }
    if (name == "sigma_eps_sq") {
      scenario.lmem->sigma_eps_sq = value;
      return;
    }
    if (name == "y20") {
      scenario.lmem->y20 = value;
      return;
    }
    unknown();
  }
  unknown();
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace adt
