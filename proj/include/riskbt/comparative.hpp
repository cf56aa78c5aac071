// Comparative backtests: Diebold-Mariano tests on consistent score
// differences, the three-zone verdict, traffic-light matrices and mean-score
// rankings.
//
// For score differences d_t = S(internal_t, x_t) - S(standard_t, x_t) with
// limit lambda of the averaged expectations, the test statistic is
//   T = mean(d) / (sigma_hat / sqrt(n)),  sigma_hat^2 an HAC estimator.
// H0+: lambda >= 0 is rejected when Phi(T) <= eta  -> green (passed),
// H0-: lambda <= 0 is rejected when 1 - Phi(T) <= eta -> red (failed),
// otherwise yellow. Diagonal cells of a traffic-light matrix are neutral.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "riskbt/stats.hpp"

namespace riskbt {

enum class Zone { red, yellow, green, neutral };

std::string zone_name(Zone z);

struct ComparisonVerdict {
  double mean_score_diff = 0.0;  // estimator of lambda
  double dm_statistic = 0.0;
  double p_plus = 1.0;   // p-value for H0+
  double p_minus = 1.0;  // p-value for H0-
  Zone zone = Zone::yellow;
  bool degenerate = false;
};

ComparisonVerdict dm_test(std::span<const double> score_diffs, double eta,
                          HacPolicy hac = HacPolicy::none());

struct TrafficLightMatrix {
  std::vector<std::string> methods;  // standards on rows, internals on columns
  std::vector<ComparisonVerdict> cells;

  const ComparisonVerdict& at(std::size_t standard, std::size_t internal_m) const {
    return cells[standard * methods.size() + internal_m];
  }
  Zone zone(std::size_t standard, std::size_t internal_m) const {
    return at(standard, internal_m).zone;
  }
};

// scores[m] is the aligned per-time score series of method m. Cell
// (i standard, j internal) tests d = scores[j] - scores[i].
TrafficLightMatrix traffic_light_matrix(const std::vector<std::string>& methods,
                                        const std::vector<std::vector<double>>& scores,
                                        double eta,
                                        HacPolicy hac = HacPolicy::none());

struct MethodRank {
  std::string method;
  double scaled_mean_score = 0.0;  // mean score / (1 - level)
  int rank = 0;                    // 1 = best (lowest mean score)
};

// Ranks ascending by mean score; reported values are scaled by 1/(1-level).
// Ties keep registration order.
std::vector<MethodRank> rank_by_mean_score(const std::vector<std::string>& methods,
                                           const std::vector<std::vector<double>>& scores,
                                           double level);

struct SignPreferenceTable {
  std::vector<std::string> methods;
  // percent[i*M+j]: % of replicates where column method j beat row method i.
  std::vector<double> percent;
  std::vector<bool> tie;  // all replicates tied (reported as 50)
};

// replicate_means[r][m] = mean score of method m in replicate r.
SignPreferenceTable sign_preference_table(
    const std::vector<std::string>& methods,
    const std::vector<std::vector<double>>& replicate_means);

}  // namespace riskbt
