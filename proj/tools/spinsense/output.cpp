#include "spinsense/output.hpp"

#include <cstdio>

#include <json.hpp>

namespace spinsense::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json config_echo(const RunConfig& cfg, int n, double gamma) {
  ordered_json j;
  j["channel"] = cfg.channel;
  j["state"] = cfg.state;
  j["n"] = n;
  j["gamma"] = gamma;
  if (cfg.rates_spec) j["rates"] = *cfg.rates_spec;
  j["phi"] = cfg.phi;
  if (cfg.state == "delta") j["delta"] = cfg.delta;
  j["t-grid"] = cfg.t_grid;
  j["format"] = cfg.format;
  j["tol"] = cfg.tol;
  return j;
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_gain_curve_csv(std::ostream& os, const GainCurve& curve) {
  os << "t,qfi,gain,gain_closed_form,img_cumulative\n";
  const bool covered = !curve.closed_form_gain.empty();
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    os << fmt17(curve.times[i]) << ',' << fmt17(curve.qfi[i]) << ','
       << fmt17(curve.gain[i]) << ',';
    if (covered) os << fmt17(curve.closed_form_gain[i]);
    os << ',' << fmt17(curve.img_cumulative[i]) << '\n';
  }
}

void write_gain_curve_json(std::ostream& os, const GainCurve& curve,
                           const RunConfig& cfg, int n, double gamma) {
  ordered_json doc;
  doc["config"] = config_echo(cfg, n, gamma);
  ordered_json rows = ordered_json::array();
  const bool covered = !curve.closed_form_gain.empty();
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    ordered_json row;
    row["t"] = curve.times[i];
    row["qfi"] = curve.qfi[i];
    row["gain"] = curve.gain[i];
    if (covered) {
      row["gain_closed_form"] = curve.closed_form_gain[i];
    } else {
      row["gain_closed_form"] = nullptr;
    }
    row["img_cumulative"] = curve.img_cumulative[i];
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << '\n';
}

void write_img_table_csv(std::ostream& os, const std::vector<ImgRow>& rows) {
  os << "n,gamma,img_numeric,img_closed_form,bound,rel_deviation\n";
  for (const auto& r : rows) {
    os << r.n << ',' << fmt17(r.gamma) << ',' << fmt17(r.img_numeric) << ','
       << fmt17(r.img_closed_form) << ',';
    if (r.bound) os << fmt17(*r.bound);
    os << ',' << fmt17(r.rel_deviation) << '\n';
  }
}

void write_img_table_json(std::ostream& os, const std::vector<ImgRow>& rows,
                          const RunConfig& cfg) {
  ordered_json doc;
  doc["config"] = config_echo(cfg, 0, 0.0);
  doc["config"].erase("n");
  doc["config"].erase("gamma");
  doc["config"]["n"] = cfg.n_spec;
  doc["config"]["gamma"] = cfg.gamma_spec;
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row;
    row["n"] = r.n;
    row["gamma"] = r.gamma;
    row["img_numeric"] = r.img_numeric;
    row["img_closed_form"] = r.img_closed_form;
    if (r.bound) {
      row["bound"] = *r.bound;
    } else {
      row["bound"] = nullptr;
    }
    row["rel_deviation"] = r.rel_deviation;
    out.push_back(std::move(row));
  }
  doc["rows"] = std::move(out);
  os << doc.dump(2) << '\n';
}

void write_crossover_table_csv(std::ostream& os,
                               const std::vector<CrossoverRow>& rows) {
  os << "n,t_star,analytic_reference\n";
  for (const auto& r : rows) {
    os << r.n << ',' << fmt17(r.t_star) << ',' << fmt17(r.analytic_reference)
       << '\n';
  }
}

void write_crossover_table_json(std::ostream& os,
                                const std::vector<CrossoverRow>& rows,
                                const RunConfig& cfg) {
  ordered_json doc;
  doc["config"]["channel"] = cfg.channel;
  doc["config"]["n"] = cfg.n_spec;
  doc["config"]["gamma"] = cfg.gamma_spec;
  doc["config"]["format"] = cfg.format;
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row;
    row["n"] = r.n;
    row["t_star"] = r.t_star;
    row["analytic_reference"] = r.analytic_reference;
    out.push_back(std::move(row));
  }
  doc["rows"] = std::move(out);
  os << doc.dump(2) << '\n';
}

}  // namespace spinsense::cli
