#include "riskbt/stats.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace riskbt {

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean: empty series");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

double hac_long_run_variance(std::span<const double> x, HacPolicy policy) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("hac_long_run_variance: need n >= 2");
  int lags = policy.lags;
  if (lags < 0) lags = static_cast<int>(std::floor(std::cbrt(static_cast<double>(n))));
  if (lags >= static_cast<int>(n)) lags = static_cast<int>(n) - 1;
  const double m = mean(x);
  double gamma0 = 0.0;
  for (double v : x) gamma0 += (v - m) * (v - m);
  gamma0 /= static_cast<double>(n);
  double lrv = gamma0;
  for (int j = 1; j <= lags; ++j) {
    double gj = 0.0;
    for (std::size_t t = j; t < n; ++t) gj += (x[t] - m) * (x[t - j] - m);
    gj /= static_cast<double>(n);
    lrv += 2.0 * (1.0 - static_cast<double>(j) / (lags + 1.0)) * gj;
  }
  return lrv;
}

}  // namespace riskbt
