// Turns rolling forecasts into the deliverable tables: per-method summaries
// (mean forecasts, % violations, scaled mean scores with ranks), traditional
// backtest p-values (simple/general x two-/one-sided conditional calibration
// tests) and traffic-light matrices per scoring variant.
//
// Scores follow the cross-method zeroing rule: at any timestamp where some
// method's forecast violates the positivity restriction (the ES coordinate
// for (VaR,ES), the forecast itself otherwise), every method's score at that
// timestamp is set to zero for that functional/level, and rankings are
// computed after zeroing.
#pragma once

#include <string>
#include <vector>

#include "riskbt/calibration.hpp"
#include "riskbt/comparative.hpp"
#include "riskbt/pipeline/runner.hpp"

namespace riskbt {

struct SummaryRow {
  std::string method;
  double mean_forecast = 0.0;   // r1 (VaR/expectile) or r2 ((VaR,ES))
  double pct_violations = 0.0;  // VaR only; NaN otherwise
  std::vector<double> scaled_mean_scores;
  std::vector<int> ranks;
};

struct SummaryTable {
  Functional functional;
  double level;
  std::vector<std::string> score_ids;
  std::vector<SummaryRow> rows;
};

struct PValueRow {
  std::string method;
  CalibrationReport two_sided_simple;
  CalibrationReport two_sided_general;
  CalibrationReport one_sided_simple;
  CalibrationReport one_sided_general;
};

struct PValueTable {
  Functional functional;
  double level;
  std::vector<PValueRow> rows;
};

struct TrafficEntry {
  Functional functional;
  double level;
  std::string score_id;
  TrafficLightMatrix matrix;
};

struct ZeroingNote {
  Functional functional;
  double level;
  std::size_t zeroed_timestamps = 0;
};

struct ReportBundle {
  RunConfig config;
  std::vector<SummaryTable> summaries;
  std::vector<PValueTable> pvalues;
  std::vector<TrafficEntry> traffic;
  std::vector<ZeroingNote> zeroing;
  std::size_t out_of_sample = 0;
  std::size_t carried_forward = 0;
};

// Score series for one slot across methods, after the zeroing rule.
std::vector<std::vector<double>> zeroed_score_series(
    const RunConfig& cfg, const RollingResult& rolling, std::size_t slot,
    const ScoreSpec& spec, std::size_t* zeroed_out);

std::vector<IdentValue> identification_series(const ForecastSeries& fs);

ReportBundle build_reports(const RunConfig& cfg, const RollingResult& rolling);

}  // namespace riskbt
