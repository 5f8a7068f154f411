#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adt/mc_validate.hpp"
#include "adt/optimizer.hpp"
#include "adt/parallel.hpp"
#include "adt/scenario_io.hpp"

namespace {

using namespace adt;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError(out_path + ": cannot open for writing");
  out << content;
}

void print_warnings(const ScenarioFile& file) {
  for (const auto& w : file.warnings) std::cerr << "warning: " << w << "\n";
}

std::vector<double> parse_alphas(const std::string& list) {
  std::vector<double> alphas;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      alphas.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("--alphas: cannot parse '" + tok + "'");
    }
  }
  if (alphas.empty()) throw ConfigError("--alphas: empty list");
  return alphas;
}

int cmd_design(const ScenarioFile& file, const std::string& out_path, int apportion_n) {
  const OptimizeResult res = multiplicative_optimize(file.scenario, file.optimizer);
  const CertificateReport cert =
      optimality_certificate(file.scenario, res.design, file.optimizer.grid_step);
  if (!res.converged)
    std::cerr << "warning: multiplicative algorithm stopped at max_iter without reaching tol\n";

  std::vector<int> units;
  if (apportion_n > 0) units = apportion_largest_remainder(res.design, apportion_n);

  std::ostringstream csv;
  csv << "x,weight" << (apportion_n > 0 ? ",units" : "")
      << ",criterion,certificate_excess,certificate_pass,converged\n";
  for (std::size_t i = 0; i < res.design.size(); ++i) {
    csv << format_number(res.design.points()[i]) << ',' << format_number(res.design.weights()[i]);
    if (apportion_n > 0) csv << ',' << units[i];
    csv << ',' << format_number(res.criterion) << ',' << format_number(cert.max_excess) << ','
        << (cert.pass ? 1 : 0) << ',' << (res.converged ? 1 : 0) << '\n';
  }
  write_output(out_path, csv.str());
  return 0;
}

int cmd_quantile(const ScenarioFile& file, const std::string& out_path, const std::string& alphas,
                 const std::string& trace_path, double trace_step, double trace_to) {
  std::vector<double> levels =
      alphas.empty() ? std::vector<double>{file.scenario.alpha} : parse_alphas(alphas);
  std::ostringstream csv;
  csv << "alpha,t_alpha,cdf_check\n";
  for (double a : levels) {
    const double t = quantile(file.scenario, a);
    csv << format_number(a) << ',' << format_number(t) << ','
        << format_number(system_cdf(file.scenario, t)) << '\n';
  }
  write_output(out_path, csv.str());

  if (!trace_path.empty()) {
    const Scenario& s = file.scenario;
    std::ostringstream trace;
    const bool compound = s.family != ModelFamily::Gamma;
    trace << (compound ? "t,f_t,f_t1,f_t2\n" : "t,f_t\n");
    for (double t = trace_step; t <= trace_to + 1e-12; t += trace_step) {
      trace << format_number(t) << ',' << format_number(system_cdf(s, t));
      if (compound) {
        trace << ',' << format_number(gamma_cdf_T(s.gamma1, s.use_condition, t)) << ',';
        if (s.family == ModelFamily::GammaGamma)
          trace << format_number(gamma_cdf_T(*s.gamma2, s.use_condition, t));
        else
          trace << format_number(lmem_cdf_T(*s.lmem, s.use_condition, t));
      }
      trace << '\n';
    }
    std::ofstream out(trace_path, std::ios::binary);
    if (!out) throw ConfigError(trace_path + ": cannot open for writing");
    out << trace.str();
  }
  return 0;
}

int cmd_sweep(const ScenarioFile& file, const std::string& out_path, std::string param,
              std::optional<double> from, std::optional<double> to, std::optional<double> step) {
  SweepSettings sw;
  if (file.sweep) sw = *file.sweep;
  if (!param.empty()) sw.param = param;
  if (from) sw.from = *from;
  if (to) sw.to = *to;
  if (step) sw.step = *step;
  if (sw.param.empty())
    throw ConfigError("sweep: no parameter given (use --param or a sweep section in the config)");
  if (!(sw.step > 0.0)) throw ConfigError("sweep: step must be positive");
  if (sw.to < sw.from) throw ConfigError("sweep: 'to' must be >= 'from'");

  {
    Scenario probe = file.scenario;  // reject unknown names before running
    set_sweep_parameter(probe, sw.param, sw.from);
  }

  // Reference design whose efficiency is tracked along the sweep: the
  // explicit fixed design if given, otherwise the optimal at the nominal
  // values.
  const Design reference =
      file.fixed_design ? *file.fixed_design : two_point_search(file.scenario).design;

  const int n_values = static_cast<int>(std::floor((sw.to - sw.from) / sw.step + 1e-9)) + 1;
  const bool compound = file.scenario.family != ModelFamily::Gamma;
  std::vector<std::string> rows(n_values);
  std::vector<std::string> errors(n_values);
  parallel_for(static_cast<std::size_t>(n_values), [&](std::size_t i) {
    try {
      const double value = sw.from + static_cast<double>(i) * sw.step;
      Scenario sc = file.scenario;
      set_sweep_parameter(sc, sw.param, value);
      const CriterionContext ctx = make_criterion_context(sc);
      const OptimizeResult best = two_point_search(sc);
      const double eff = avar(ctx, best.design) / avar(ctx, reference);
      std::ostringstream row;
      row << format_number(value) << ',' << format_number(best.design.weights().front()) << ','
          << format_number(best.criterion) << ',' << format_number(ctx.t_alpha) << ','
          << format_number(eff);
      if (compound) row << ',' << format_number(ctx.c1) << ',' << format_number(ctx.c2);
      row << '\n';
      rows[i] = row.str();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const auto& err : errors)
    if (!err.empty()) throw std::runtime_error("sweep: " + err);

  std::ostringstream csv;
  csv << "value,w_star,criterion,t_alpha,efficiency" << (compound ? ",c1,c2" : "") << '\n';
  for (const auto& row : rows) csv << row;
  write_output(out_path, csv.str());
  return 0;
}

int cmd_validate(const ScenarioFile& file, const std::string& out_path, std::optional<int> n_units,
                 std::optional<int> replications, std::optional<std::uint64_t> seed) {
  ValidateSettings settings;
  if (file.validate) settings = *file.validate;
  if (n_units) settings.n_units = *n_units;
  if (replications) settings.replications = *replications;
  if (seed) settings.seed = *seed;
  if (settings.n_units < 4) throw ConfigError("validate: n_units must be >= 4");
  if (settings.replications < 1) throw ConfigError("validate: replications must be >= 1");

  SimConfig sim;
  sim.n_units = settings.n_units;
  sim.replications = settings.replications;
  sim.seed = settings.seed;
  sim.design =
      file.fixed_design ? *file.fixed_design : multiplicative_optimize(file.scenario, file.optimizer).design;

  const AvarReport report = empirical_avar_check(file.scenario, sim);
  std::ostringstream csv;
  csv << "n_units,replications,seed,empirical_variance,predicted_avar_over_n,ratio,fit_failures\n";
  csv << report.n_units << ',' << report.replications << ',' << report.seed << ','
      << format_number(report.empirical_variance) << ','
      << format_number(report.predicted_avar / report.n_units) << ','
      << format_number(report.ratio) << ',' << report.fit_failures << '\n';
  write_output(out_path, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally c-optimal stress designs for accelerated degradation tests"};
  app.require_subcommand(1);

  std::string config_path, out_path;

  auto* design = app.add_subcommand("design", "Optimal design for a scenario config");
  int apportion_n = 0;
  double grid_step_flag = 0.0;
  design->add_option("--config", config_path, "Scenario JSON file")->required();
  design->add_option("--out", out_path, "Output CSV path (default: stdout)");
  design->add_option("--grid-step", grid_step_flag, "Stress grid step (overrides config)");
  design->add_option("--apportion", apportion_n, "Round weights to unit counts for n units");

  auto* quant = app.add_subcommand("quantile", "Failure-time quantiles");
  std::string alphas, trace_path;
  double trace_step = 0.05, trace_to = 12.0;
  quant->add_option("--config", config_path, "Scenario JSON file")->required();
  quant->add_option("--out", out_path, "Output CSV path (default: stdout)");
  quant->add_option("--alphas", alphas, "Comma-separated quantile levels");
  quant->add_option("--trace", trace_path, "Write a CDF trace CSV to this path");
  quant->add_option("--trace-step", trace_step, "Time step of the CDF trace");
  quant->add_option("--trace-to", trace_to, "Upper end of the CDF trace");

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep of the optimal design");
  std::string sweep_param;
  std::optional<double> sweep_from, sweep_to, sweep_step;
  double from_v = 0, to_v = 0, step_v = 0;
  sweep->add_option("--config", config_path, "Scenario JSON file")->required();
  sweep->add_option("--out", out_path, "Output CSV path (default: stdout)");
  sweep->add_option("--param", sweep_param, "Parameter name to sweep");
  auto* fo = sweep->add_option("--from", from_v, "Sweep start");
  auto* toop = sweep->add_option("--to", to_v, "Sweep end");
  auto* st = sweep->add_option("--step", step_v, "Sweep step");

  auto* validate_cmd = app.add_subcommand("validate", "Monte Carlo check of the asymptotics");
  std::optional<int> n_units, replications;
  std::optional<std::uint64_t> seed;
  int n_v = 0, reps_v = 0;
  std::uint64_t seed_v = 0;
  validate_cmd->add_option("--config", config_path, "Scenario JSON file")->required();
  validate_cmd->add_option("--out", out_path, "Output CSV path (default: stdout)");
  auto* nopt = validate_cmd->add_option("--n", n_v, "Number of test units");
  auto* ropt = validate_cmd->add_option("--reps", reps_v, "Number of replications");
  auto* sopt = validate_cmd->add_option("--seed", seed_v, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    ScenarioFile file = load_scenario_file(config_path);
    print_warnings(file);
    if (design->parsed()) {
      if (grid_step_flag > 0.0) file.optimizer.grid_step = grid_step_flag;
      return cmd_design(file, out_path, apportion_n);
    }
    if (quant->parsed()) return cmd_quantile(file, out_path, alphas, trace_path, trace_step, trace_to);
    if (sweep->parsed()) {
      if (fo->count()) sweep_from = from_v;
      if (toop->count()) sweep_to = to_v;
      if (st->count()) sweep_step = step_v;
      return cmd_sweep(file, out_path, sweep_param, sweep_from, sweep_to, sweep_step);
    }
    if (validate_cmd->parsed()) {
      if (nopt->count()) n_units = n_v;
      if (ropt->count()) replications = reps_v;
      if (sopt->count()) seed = seed_v;
      return cmd_validate(file, out_path, n_units, replications, seed);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
