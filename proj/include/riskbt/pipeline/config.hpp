// Run configuration: every field of a backtest run, parsed from a
// line-oriented `key = value` file with [sections]. CLI flags override file
// values; the effective configuration is echoed into the run manifest so a
// run can be replayed byte-identically.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "riskbt/scoring.hpp"

namespace riskbt {

struct RunConfig {
  // [input]
  std::string csv_path;                 // empty: simulated input
  bool prices_to_losses = true;         // price column -> negated log-returns
  // [simulation]
  bool simulate = false;
  std::size_t out_of_sample = 1000;     // reduced-scale default
  std::size_t burnin = 500;
  // [run]
  std::size_t window = 500;
  std::vector<std::string> methods = {"n-FP", "n-FHS", "n-EVT", "t-FP", "t-FHS",
                                      "t-EVT", "st-FP", "st-FHS", "st-EVT", "opt"};
  std::vector<double> var_levels = {0.90, 0.95, 0.99};
  std::vector<double> expectile_levels = {0.96561, 0.98761, 0.99855};
  std::vector<double> vares_levels = {0.754, 0.875, 0.975};
  // score variants per functional: "homogeneous" (linear/quadratic/sqrt),
  // "zero" (the 0-homogeneous-difference log forms), or both.
  std::vector<std::string> scores = {"homogeneous", "zero"};
  double eta = 0.05;
  std::uint64_t seed = 1;
  int hac_lags = 0;
  std::size_t fhs_resample = 10000;
  bool warm_start = true;   // chain window fits serially from the previous fit
  bool parallel = false;    // OpenMP across windows (forces moment starts)
  // [output]
  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv", "term"};

  // Score specs selected by `scores` for one functional at one level.
  std::vector<ScoreSpec> score_specs(Functional f, double level) const;
  const std::vector<double>& levels(Functional f) const;

  void validate() const;  // throws std::invalid_argument on violations
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);
std::string render_config(const RunConfig& cfg);

}  // namespace riskbt
