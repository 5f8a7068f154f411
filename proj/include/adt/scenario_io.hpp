#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adt/design.hpp"
#include "adt/optimizer.hpp"

namespace adt {

// Schema or semantic violation in a scenario file; the CLI maps these to
// exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSettings {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  double step = 0.0;
};

struct ValidateSettings {
  int n_units = 100;
  int replications = 1000;
  std::uint64_t seed = 20240613;
};

// Parsed scenario file: the scenario itself plus optional optimizer, sweep,
// fixed-design and validation sections.
struct ScenarioFile {
  Scenario scenario;
  OptimizeOptions optimizer;
  std::optional<SweepSettings> sweep;
  std::optional<Design> fixed_design;
  std::optional<ValidateSettings> validate;
  std::vector<std::string> warnings;  // soft scenario warnings collected on load
};

// Loads and validates a JSON scenario file. Unknown keys anywhere are
// rejected; every scenario invariant is re-checked. Throws ConfigError with
// a location-anchored message.
ScenarioFile load_scenario_file(const std::string& path);
ScenarioFile parse_scenario_json(const std::string& text, const std::string& origin);

// Applies "param = value" to a scenario for sweeps; throws ConfigError for
// unknown names. Valid names depend on the family (beta20/beta21 address the
// second gamma component under gamma_gamma and the LMEM block under
// gamma_lmem, matching that family's parameter naming).
void set_sweep_parameter(Scenario& scenario, const std::string& name, double value);

// Number formatted with 10 significant digits, '.' decimal point.
std::string format_number(double v);

}  // namespace adt
