#include "riskbt/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskbt {

double empirical_quantile(std::span<const double> sample, double p) {
  if (sample.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("empirical_quantile: p in (0,1)");
  std::vector<double> s(sample.begin(), sample.end());
  const std::size_t n = s.size();
  std::size_t idx = static_cast<std::size_t>(std::ceil(p * n));
  if (idx < 1) idx = 1;
  if (idx > n) idx = n;
  std::nth_element(s.begin(), s.begin() + (idx - 1), s.end());
  return s[idx - 1];
}

double empirical_expectile(std::span<const double> sample, double tau) {
  if (sample.size() < 2) throw std::invalid_argument("empirical_expectile: need >= 2 points");
  if (!(tau > 0.0 && tau < 1.0)) throw std::domain_error("empirical_expectile: tau in (0,1)");
  double e = 0.0;
  for (double z : sample) e += z;
  e /= static_cast<double>(sample.size());
  for (int it = 0; it < 500; ++it) {
    double wsum = 0.0, wzsum = 0.0;
    for (double z : sample) {
      const double w = z > e ? tau : 1.0 - tau;
      wsum += w;
      wzsum += w * z;
    }
    const double next = wzsum / wsum;
    if (std::fabs(next - e) < 1e-10) return next;
    e = next;
  }
  return e;
}

double empirical_expected_shortfall(std::span<const double> sample, double level) {
  const double q = empirical_quantile(sample, level);
  double sum = 0.0;
  std::size_t count = 0;
  for (double z : sample) {
    if (z > q) {
      sum += z;
      ++count;
    }
  }
  if (count == 0) {
    throw std::runtime_error("empirical_expected_shortfall: no exceedances over the quantile");
  }
  return sum / static_cast<double>(count);
}

RiskEstimate fp_risk(const FilterState& state, Functional functional, double level) {
  const Distribution z = state.innovation_distribution();
  RiskEstimate out;
  switch (functional) {
    case Functional::var:
      out.r1 = z.quantile(level);
      break;
    case Functional::expectile:
      out.r1 = z.expectile(level);
      break;
    case Functional::var_es:
      out.r1 = z.quantile(level);
      out.r2 = z.expected_shortfall(level);
      break;
  }
  return out;
}

RiskEstimate fhs_risk(std::span<const double> residuals, Functional functional,
                      double level, std::size_t resample_size, Rng& rng,
                      bool resample) {
  if (residuals.size() < 2) throw std::invalid_argument("fhs_risk: need >= 2 residuals");
  std::vector<double> draw;
  std::span<const double> z = residuals;
  if (resample) {
    draw.resize(resample_size);
    const std::size_t n = residuals.size();
    for (std::size_t i = 0; i < resample_size; ++i) {
      draw[i] = residuals[static_cast<std::size_t>(rng.below(n))];
    }
    z = draw;
  }
  RiskEstimate out;
  switch (functional) {
    case Functional::var:
      out.r1 = empirical_quantile(z, level);
      break;
    case Functional::expectile:
      out.r1 = empirical_expectile(z, level);
      break;
    case Functional::var_es:
      out.r1 = empirical_quantile(z, level);
      out.r2 = empirical_expected_shortfall(z, level);
      break;
  }
  return out;
}

}  // namespace riskbt
