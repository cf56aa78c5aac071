// Shared time-series statistics: HAC long-run variance and basic moments.
#pragma once

#include <span>

namespace riskbt {

struct HacPolicy {
  // Number of autocovariance lags in the Bartlett kernel. 0 (the default)
  // reduces to the plain sample variance, appropriate for one-step-ahead
  // martingale-difference series. -1 selects floor(n^{1/3}).
  int lags = 0;

  static HacPolicy none() { return HacPolicy{0}; }
  static HacPolicy automatic() { return HacPolicy{-1}; }
  static HacPolicy bartlett(int lags) { return HacPolicy{lags}; }
};

double mean(std::span<const double> x);
double sample_variance(std::span<const double> x);  // denominator n

// Bartlett-kernel long-run variance of the mean-centered series:
//   gamma_0 + 2 * sum_{j=1..L} (1 - j/(L+1)) gamma_j
double hac_long_run_variance(std::span<const double> x, HacPolicy policy);

}  // namespace riskbt
