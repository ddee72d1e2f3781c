#include "spinsense/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include <spinsense/metrics.hpp>
#include <spinsense/oracle.hpp>

#include "spinsense/config.hpp"
#include "spinsense/output.hpp"

namespace spinsense::cli {

namespace {

constexpr int kOracleSiteCap = 6;

// Quadrature runs tighter than the reporting tolerance so that table values
// are limited by the physics, not the integrator.
double quad_tol(const RunConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw UsageError("--tol must be positive");
  return std::min(cfg.tol, 1e-9);
}

std::ostream& resolve_sink(const RunConfig& cfg, std::ostream& fallback,
                           std::unique_ptr<std::ofstream>& holder) {
  if (cfg.out_path.empty()) return fallback;
  holder = std::make_unique<std::ofstream>(cfg.out_path);
  if (!*holder) throw UsageError("cannot open output file '" + cfg.out_path + "'");
  return *holder;
}

void check_format(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json") {
    throw UsageError("--format must be csv or json");
  }
}

int single_n(const RunConfig& cfg) {
  const auto ns = parse_int_list(cfg.n_spec);
  if (ns.size() != 1) throw UsageError("this command takes a single --n");
  return ns.front();
}

double single_gamma(const RunConfig& cfg) {
  const auto gs = parse_double_list(cfg.gamma_spec);
  if (gs.size() != 1) throw UsageError("this command takes a single --gamma");
  return gs.front();
}

int cmd_run(const RunConfig& cfg, std::ostream& out) {
  check_format(cfg);
  const int n = single_n(cfg);
  const double gamma = single_gamma(cfg);
  const SensingScenario sc = scenario_from(cfg, n, gamma);
  const auto times = parse_time_grid(cfg.t_grid, sc);
  const GainCurve curve = compute_gain_curve(sc, times, quad_tol(cfg));

  std::unique_ptr<std::ofstream> file;
  std::ostream& sink = resolve_sink(cfg, out, file);
  if (cfg.format == "csv") {
    write_gain_curve_csv(sink, curve);
  } else {
    write_gain_curve_json(sink, curve, cfg, n, gamma);
  }
  return 0;
}

int cmd_img(const RunConfig& cfg, std::ostream& out) {
  check_format(cfg);
  const auto ns = parse_int_list(cfg.n_spec);
  const auto gammas = parse_double_list(cfg.gamma_spec);

  std::vector<ImgRow> rows;
  for (int n : ns) {
    for (double gamma : gammas) {
      const SensingScenario sc = scenario_from(cfg, n, gamma);
      ImgRow row{};
      row.n = n;
      row.gamma = gamma;
      row.img_numeric = integrated_gain(sc, quad_tol(cfg));
      const ImgReference ref = closed_form_img(sc);
      row.img_closed_form = ref.value;
      row.bound = ref.upper_bound;
      row.rel_deviation =
          std::abs(row.img_numeric - ref.value) / std::abs(ref.value);
      rows.push_back(row);
    }
  }

  std::unique_ptr<std::ofstream> file;
  std::ostream& sink = resolve_sink(cfg, out, file);
  if (cfg.format == "csv") {
    write_img_table_csv(sink, rows);
  } else {
    write_img_table_json(sink, rows, cfg);
  }
  return 0;
}

int cmd_crossover(const RunConfig& cfg, std::ostream& out) {
  check_format(cfg);
  const auto ns = parse_int_list(cfg.n_spec);
  const double gamma = single_gamma(cfg);
  if (cfg.channel != "dephasing" && cfg.channel != "emission") {
    throw UsageError("crossover needs --channel dephasing or emission");
  }
  const Channel channel = parse_channel(cfg.channel);

  std::vector<CrossoverRow> rows;
  for (int n : ns) {
    try {
      const CrossoverResult r = gain_ratio_crossover(n, gamma, channel);
      rows.push_back({n, r.t_star, r.analytic_reference});
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  std::unique_ptr<std::ofstream> file;
  std::ostream& sink = resolve_sink(cfg, out, file);
  if (cfg.format == "csv") {
    write_crossover_table_csv(sink, rows);
  } else {
    write_crossover_table_json(sink, rows, cfg);
  }
  return 0;
}

struct VerifyCheck {
  std::string label;
  double worst = 0.0;
  std::string detail;
  bool pass = false;
};

std::vector<double> oracle_sample_times(double gamma) {
  std::vector<double> times{0.0};
  const auto tail = log_spaced(29, 1e-3 / gamma, 5.0 / gamma);
  times.insert(times.end(), tail.begin(), tail.end());
  return times;
}

VerifyCheck oracle_check(Channel channel, const StateKind& state, int n,
                         double gamma, double phi, double tol,
                         const std::string& label) {
  const ComplexMatrix rho0 = density_from_pure(make_initial_state(state, n));
  LindbladProblem problem;
  Propagator analytic;
  if (channel == Channel::Dephasing) {
    problem = make_dephasing_problem(n, std::vector<double>(n, gamma), phi, rho0);
    const DephasingChannel ch = DephasingChannel::uniform(n, gamma, phi);
    analytic = [ch](const ComplexMatrix& r0, double t) {
      return dephasing_propagate(r0, ch, t);
    };
  } else {
    problem = make_emission_problem(n, gamma, phi, rho0);
    const EmissionChannel ch{gamma, phi};
    analytic = [ch](const ComplexMatrix& r0, double t) {
      return emission_propagate(r0, ch, t);
    };
  }
  IntegratorConfig icfg;
  icfg.step = default_step(gamma, phi);
  const TrajectoryDeviation dev = compare_trajectories(
      analytic, problem, oracle_sample_times(gamma), icfg);

  VerifyCheck check;
  check.label = label + " oracle";
  check.worst = dev.max_abs;
  std::ostringstream detail;
  detail << "worst t=" << dev.worst_time << " entry=(" << dev.worst_row << ","
         << dev.worst_col << ")";
  check.detail = detail.str();
  check.pass = dev.max_abs < tol;
  return check;
}

VerifyCheck closed_form_check(Channel channel, const StateKind& state, int n,
                              double gamma, double phi, double tol,
                              const std::string& label) {
  SensingScenario sc{n, channel, state, gamma, std::nullopt, phi};
  VerifyCheck check;
  check.label = label + " closed-form gain";
  double worst = 0.0;
  double worst_t = 0.0;
  for (double t : log_spaced(20, 1e-3 / gamma, 5.0 / gamma)) {
    const double reference = closed_form_gain(sc, t);
    const double numeric = gain_numeric(sc, t);
    const double rel = std::abs(numeric - reference) /
                       std::max(std::abs(reference), 1e-300);
    if (rel > worst) {
      worst = rel;
      worst_t = t;
    }
  }
  check.worst = worst;
  std::ostringstream detail;
  detail << "worst t=" << worst_t;
  check.detail = detail.str();
  check.pass = worst < tol;
  return check;
}

int cmd_verify(const RunConfig& cfg, bool channel_given, bool gamma_given,
               std::ostream& out) {
  if (cfg.n_max < 1) throw UsageError("--n-max must be >= 1");
  if (cfg.n_max > kOracleSiteCap) {
    throw UsageError("--n-max exceeds the oracle cap of " +
                     std::to_string(kOracleSiteCap) + " sites");
  }
  if (!(cfg.tol > 0.0)) throw UsageError("--tol must be positive");

  std::vector<Channel> channels;
  if (channel_given) {
    channels.push_back(parse_channel(cfg.channel));
  } else {
    channels = {Channel::Dephasing, Channel::Emission};
  }
  const std::vector<double> gammas =
      gamma_given ? parse_double_list(cfg.gamma_spec)
                  : std::vector<double>{0.25, 1.0};

  std::vector<VerifyCheck> checks;
  for (Channel channel : channels) {
    const std::string cname =
        channel == Channel::Dephasing ? "dephasing" : "emission";
    for (int n = 1; n <= cfg.n_max; ++n) {
      for (double gamma : gammas) {
        if (!(gamma > 0.0)) throw UsageError("verify needs gamma > 0");
        struct NamedState {
          StateKind kind;
          const char* name;
        };
        std::vector<NamedState> states{{StateKind::ghz(), "ghz"},
                                       {StateKind::product_plus(), "product"}};
        if (n == 1) {
          states.push_back({StateKind::single_qubit_delta(cfg.delta), "delta"});
        }
        for (const auto& [state, sname] : states) {
          std::ostringstream label;
          label << cname << " " << sname << " N=" << n << " gamma=" << gamma;
          checks.push_back(oracle_check(channel, state, n, gamma, cfg.phi,
                                        cfg.tol, label.str()));
          if (channel == Channel::Dephasing ||
              state.kind != StateKind::Kind::SingleQubitDelta) {
            checks.push_back(closed_form_check(channel, state, n, gamma,
                                               cfg.phi, cfg.tol, label.str()));
          }
        }
      }
    }
  }

  int failures = 0;
  for (const auto& check : checks) {
    out << (check.pass ? "[PASS] " : "[FAIL] ") << check.label
        << " max_dev=" << fmt17(check.worst) << " " << check.detail << "\n";
    if (!check.pass) ++failures;
  }
  out << (failures == 0 ? "verify: all " : "verify: FAILED ")
      << (failures == 0 ? std::to_string(checks.size()) + " checks passed"
                        : std::to_string(failures) + " of " +
                              std::to_string(checks.size()) + " checks")
      << "\n";
  return failures == 0 ? 0 : 1;
}

void add_common_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--channel", cfg.channel, "dephasing | emission");
  sub->add_option("--state", cfg.state, "ghz | product | delta");
  sub->add_option("--n", cfg.n_spec, "site count: INT, INT:INT or comma list");
  sub->add_option("--gamma", cfg.gamma_spec, "dissipation rate or comma list");
  sub->add_option("--rates", cfg.rates_spec,
                  "per-site dephasing rates (product state only)");
  sub->add_option("--phi", cfg.phi, "field strength");
  sub->add_option("--delta", cfg.delta, "delta-state weight in [-1, 1]");
  sub->add_option("--t-grid", cfg.t_grid, "auto | log:COUNT:LO:HI | list:...");
  sub->add_option("--out", cfg.out_path, "output path (default stdout)");
  sub->add_option("--format", cfg.format, "csv | json");
  sub->add_option("--config", cfg.config_path,
                  "flat JSON config file; flags override");
  sub->add_option("--tol", cfg.tol, "tolerance");
}

const std::vector<std::string> kConfigKeys = {
    "channel", "state", "n",   "gamma",  "rates", "phi",
    "delta",   "t-grid", "out", "format", "tol",   "n-max"};

}  // namespace

int run_app(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"spin-ensemble magnetometry gain explorer"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "sample a gain trajectory");
  CLI::App* img = app.add_subcommand("img", "integrated gain table");
  CLI::App* verify =
      app.add_subcommand("verify", "oracle and closed-form verification");
  CLI::App* crossover =
      app.add_subcommand("crossover", "entangled/separable crossover times");
  for (CLI::App* sub : {run, img, verify, crossover}) {
    add_common_options(sub, cfg);
  }
  verify->add_option("--n-max", cfg.n_max, "largest N to verify (cap 6)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* active = nullptr;
  for (CLI::App* sub : {run, img, verify, crossover}) {
    if (sub->parsed()) active = sub;
  }
  if (active == nullptr) {
    err << "spinsense: expected a subcommand\n";
    return 2;
  }

  try {
    std::vector<std::string> seen;
    for (const std::string& key : kConfigKeys) {
      const CLI::Option* opt = active->get_option_no_throw("--" + key);
      if (opt != nullptr && opt->count() > 0) seen.push_back(key);
    }
    if (!cfg.config_path.empty()) {
      const auto applied = merge_config_file(cfg.config_path, seen, cfg);
      seen.insert(seen.end(), applied.begin(), applied.end());
    }
    const bool channel_given =
        std::find(seen.begin(), seen.end(), "channel") != seen.end();
    const bool gamma_given =
        std::find(seen.begin(), seen.end(), "gamma") != seen.end();

    if (active == run) return cmd_run(cfg, out);
    if (active == img) return cmd_img(cfg, out);
    if (active == crossover) return cmd_crossover(cfg, out);
    return cmd_verify(cfg, channel_given, gamma_given, out);
  } catch (const UsageError& e) {
    err << "spinsense: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "spinsense: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "spinsense: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "spinsense: internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace spinsense::cli
