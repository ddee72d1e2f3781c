// Flag/config-file plumbing for the spinsense CLI. Multi-valued flags keep
// their surface grammar as strings (N ranges, gamma lists, time grids) and
// are expanded here.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <spinsense/metrics.hpp>

namespace spinsense::cli {

struct RunConfig {
  std::string channel = "dephasing";  // dephasing | emission | both (verify)
  std::string state = "ghz";          // ghz | product | delta
  std::string n_spec = "2";           // INT | INT:INT | v1,v2,...
  std::string gamma_spec = "1";       // FLOAT | comma list
  std::optional<std::string> rates_spec;  // comma list, dephasing product only
  double phi = 1.0;
  double delta = 0.0;
  std::string t_grid = "auto";        // auto | log:COUNT:LO:HI | list:v1,...
  std::string out_path;               // empty -> stdout
  std::string format = "csv";         // csv | json
  std::string config_path;            // flat JSON file; flags override it
  double tol = 1e-6;
  int n_max = 3;                      // verify only
};

// Usage/config problems surface as this and map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_int_list(const std::string& spec);
std::vector<double> parse_double_list(const std::string& spec);

Channel parse_channel(const std::string& name);
StateKind parse_state(const RunConfig& cfg);

/// Scenario for one (n, gamma) cell of the config.
SensingScenario scenario_from(const RunConfig& cfg, int n, double gamma);

/// Expands the --t-grid grammar; "auto" derives the grid from the scenario.
std::vector<double> parse_time_grid(const std::string& spec,
                                    const SensingScenario& sc);

/// Loads a flat JSON object and copies each entry into cfg unless the
/// matching flag was given on the command line (seen_keys). Returns the
/// keys actually applied.
std::vector<std::string> merge_config_file(
    const std::string& path, const std::vector<std::string>& seen_keys,
    RunConfig& cfg);

}  // namespace spinsense::cli
