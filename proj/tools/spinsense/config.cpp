#include "spinsense/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spinsense::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    parts.push_back(item);
  }
  return parts;
}

int to_int(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw UsageError("not an integer: '" + s + "'");
  return v;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& spec) {
  if (spec.empty()) throw UsageError("empty integer list");
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 2) throw UsageError("range must be LO:HI: '" + spec + "'");
    const int lo = to_int(parts[0]);
    const int hi = to_int(parts[1]);
    if (hi < lo) throw UsageError("range must have LO <= HI: '" + spec + "'");
    std::vector<int> out;
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::vector<int> out;
  for (const auto& part : split(spec, ',')) out.push_back(to_int(part));
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& spec) {
  std::vector<double> out;
  for (const auto& part : split(spec, ',')) out.push_back(to_double(part));
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

Channel parse_channel(const std::string& name) {
  if (name == "dephasing") return Channel::Dephasing;
  if (name == "emission") return Channel::Emission;
  throw UsageError("unknown channel '" + name +
                   "' (expected dephasing or emission)");
}

StateKind parse_state(const RunConfig& cfg) {
  if (cfg.state == "ghz") return StateKind::ghz();
  if (cfg.state == "product") return StateKind::product_plus();
  if (cfg.state == "delta") return StateKind::single_qubit_delta(cfg.delta);
  throw UsageError("unknown state '" + cfg.state +
                   "' (expected ghz, product or delta)");
}

SensingScenario scenario_from(const RunConfig& cfg, int n, double gamma) {
  SensingScenario sc;
  sc.sites = n;
  sc.channel = parse_channel(cfg.channel);
  sc.state = parse_state(cfg);
  sc.gamma = gamma;
  sc.phi = cfg.phi;
  if (cfg.rates_spec) {
    sc.rates = parse_double_list(*cfg.rates_spec);
  }
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return sc;
}

std::vector<double> parse_time_grid(const std::string& spec,
                                    const SensingScenario& sc) {
  if (spec == "auto") {
    try {
      return auto_time_grid(sc);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("auto time grid: ") + e.what());
    }
  }
  if (spec.rfind("log:", 0) == 0) {
    const auto parts = split(spec.substr(4), ':');
    if (parts.size() != 3) {
      throw UsageError("--t-grid log form is log:COUNT:LO:HI");
    }
    const int count = to_int(parts[0]);
    const double lo = to_double(parts[1]);
    const double hi = to_double(parts[2]);
    if (count < 1 || !(lo > 0.0) || !(hi > lo)) {
      throw UsageError("--t-grid log form needs COUNT >= 1 and 0 < LO < HI");
    }
    return log_spaced(count, lo, hi);
  }
  if (spec.rfind("list:", 0) == 0) {
    const std::string body = spec.substr(5);
    if (body.empty()) throw UsageError("--t-grid list is empty");
    auto times = parse_double_list(body);
    if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0) {
      throw UsageError("--t-grid list must be ascending and non-negative");
    }
    return times;
  }
  throw UsageError("unknown --t-grid spec '" + spec + "'");
}

std::vector<std::string> merge_config_file(
    const std::string& path, const std::vector<std::string>& seen_keys,
    RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  if (!doc.is_object()) {
    throw UsageError("config file must hold a flat JSON object");
  }

  const auto seen = [&](const std::string& key) {
    return std::find(seen_keys.begin(), seen_keys.end(), key) != seen_keys.end();
  };
  const auto as_string = [](const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };

  std::vector<std::string> applied;
  for (const auto& [key, value] : doc.items()) {
    if (seen(key)) continue;  // command-line flags override file values
    applied.push_back(key);
    if (key == "channel") cfg.channel = as_string(value);
    else if (key == "state") cfg.state = as_string(value);
    else if (key == "n") cfg.n_spec = as_string(value);
    else if (key == "gamma") cfg.gamma_spec = as_string(value);
    else if (key == "rates") cfg.rates_spec = as_string(value);
    else if (key == "phi") cfg.phi = value.is_number() ? value.get<double>() : to_double(as_string(value));
    else if (key == "delta") cfg.delta = value.is_number() ? value.get<double>() : to_double(as_string(value));
    else if (key == "t-grid") cfg.t_grid = as_string(value);
    else if (key == "out") cfg.out_path = as_string(value);
    else if (key == "format") cfg.format = as_string(value);
    else if (key == "tol") cfg.tol = value.is_number() ? value.get<double>() : to_double(as_string(value));
    else if (key == "n-max") cfg.n_max = value.is_number_integer() ? value.get<int>() : to_int(as_string(value));
    else throw UsageError("config file: unknown key '" + key + "'");
  }
  return applied;
}

}  // namespace spinsense::cli
