#include "riskbt/comparative.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "riskbt/special.hpp"

namespace riskbt {

std::string zone_name(Zone z) {
  switch (z) {
    case Zone::red: return "red";
    case Zone::yellow: return "yellow";
    case Zone::green: return "green";
    case Zone::neutral: return "neutral";
  }
  return "?";
}

ComparisonVerdict dm_test(std::span<const double> score_diffs, double eta,
                          HacPolicy hac) {
  if (score_diffs.size() < 30) {
    throw std::invalid_argument("dm_test: need at least 30 observations");
  }
  if (!(eta > 0.0 && eta < 1.0)) {
    throw std::invalid_argument("dm_test: eta must lie in (0,1)");
  }
  ComparisonVerdict v;
  const double n = static_cast<double>(score_diffs.size());
  v.mean_score_diff = mean(score_diffs);
  const double lrv = hac_long_run_variance(score_diffs, hac);
  if (!(lrv > 0.0)) {
    v.degenerate = true;
    v.zone = Zone::yellow;
    return v;
  }
  v.dm_statistic = v.mean_score_diff / std::sqrt(lrv / n);
  v.p_plus = norm_cdf(v.dm_statistic);
  v.p_minus = 1.0 - norm_cdf(v.dm_statistic);
  if (v.p_plus <= eta) {
    v.zone = Zone::green;
  } else if (v.p_minus <= eta) {
    v.zone = Zone::red;
  } else {
    v.zone = Zone::yellow;
  }
  return v;
}

TrafficLightMatrix traffic_light_matrix(const std::vector<std::string>& methods,
                                        const std::vector<std::vector<double>>& scores,
                                        double eta, HacPolicy hac) {
  const std::size_t m = methods.size();
  if (scores.size() != m) {
    throw std::invalid_argument("traffic_light_matrix: method/series count mismatch");
  }
  const std::size_t n = m == 0 ? 0 : scores[0].size();
  for (const auto& s : scores) {
    if (s.size() != n) {
      throw std::invalid_argument("traffic_light_matrix: unaligned score series");
    }
  }
  TrafficLightMatrix out;
  out.methods = methods;
  out.cells.resize(m * m);
  std::vector<double> diffs(n);
  for (std::size_t i = 0; i < m; ++i) {    // standard
    for (std::size_t j = 0; j < m; ++j) {  // internal
      if (i == j) {
        ComparisonVerdict diag;
        diag.zone = Zone::neutral;
        out.cells[i * m + j] = diag;
        continue;
      }
      for (std::size_t t = 0; t < n; ++t) diffs[t] = scores[j][t] - scores[i][t];
      out.cells[i * m + j] = dm_test(diffs, eta, hac);
    }
  }
  return out;
}

std::vector<MethodRank> rank_by_mean_score(const std::vector<std::string>& methods,
                                           const std::vector<std::vector<double>>& scores,
                                           double level) {
  if (methods.size() != scores.size()) {
    throw std::invalid_argument("rank_by_mean_score: method/series count mismatch");
  }
  const std::size_t m = methods.size();
  std::vector<MethodRank> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[i].method = methods[i];
    out[i].scaled_mean_score = mean(scores[i]) / (1.0 - level);
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out[a].scaled_mean_score < out[b].scaled_mean_score;
  });
  for (std::size_t pos = 0; pos < m; ++pos) out[order[pos]].rank = static_cast<int>(pos) + 1;
  return out;
}

SignPreferenceTable sign_preference_table(
    const std::vector<std::string>& methods,
    const std::vector<std::vector<double>>& replicate_means) {
  const std::size_t m = methods.size();
  const std::size_t reps = replicate_means.size();
  if (reps < 2) {
    throw std::invalid_argument("sign_preference_table: need at least 2 replicates");
  }
  for (const auto& row : replicate_means) {
    if (row.size() != m) {
      throw std::invalid_argument("sign_preference_table: replicate size mismatch");
    }
  }
  SignPreferenceTable out;
  out.methods = methods;
  out.percent.assign(m * m, 0.0);
  out.tie.assign(m * m, false);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;  // diagonal excluded by convention
      int wins = 0, losses = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        const double d = replicate_means[r][j] - replicate_means[r][i];
        if (d < 0.0) {
          ++wins;
        } else if (d > 0.0) {
          ++losses;
        }
      }
      if (wins + losses == 0) {
        out.percent[i * m + j] = 50.0;
        out.tie[i * m + j] = true;
      } else {
        out.percent[i * m + j] = 100.0 * wins / static_cast<double>(reps);
      }
    }
  }
  return out;
}

}  // namespace riskbt
