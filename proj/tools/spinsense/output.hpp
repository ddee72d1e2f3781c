#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <spinsense/metrics.hpp>

#include "spinsense/config.hpp"

namespace spinsense::cli {

/// 17 significant digits: doubles survive a text round trip unchanged.
std::string fmt17(double v);

struct ImgRow {
  int n;
  double gamma;
  double img_numeric;
  double img_closed_form;
  std::optional<double> bound;
  double rel_deviation;
};

struct CrossoverRow {
  int n;
  double t_star;
  double analytic_reference;
};

void write_gain_curve_csv(std::ostream& os, const GainCurve& curve);
void write_gain_curve_json(std::ostream& os, const GainCurve& curve,
                           const RunConfig& cfg, int n, double gamma);

void write_img_table_csv(std::ostream& os, const std::vector<ImgRow>& rows);
void write_img_table_json(std::ostream& os, const std::vector<ImgRow>& rows,
                          const RunConfig& cfg);

void write_crossover_table_csv(std::ostream& os,
                               const std::vector<CrossoverRow>& rows);
void write_crossover_table_json(std::ostream& os,
                                const std::vector<CrossoverRow>& rows,
                                const RunConfig& cfg);

}  // namespace spinsense::cli
