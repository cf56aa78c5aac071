// Second-stage risk estimators operating on standardized residuals: fully
// parametric (FP), filtered historical simulation (FHS) and the empirical
// primitives they share. EVT-based estimation lives in evt.hpp.
#pragma once

#include <span>
#include <vector>

#include "riskbt/garch.hpp"
#include "riskbt/scoring.hpp"

namespace riskbt {

// Scalar functionals fill `r1` only; (VaR,ES) fills the pair.
struct RiskEstimate {
  double r1 = 0.0;  // VaR / expectile
  double r2 = 0.0;  // ES ((VaR,ES) only)
};

// Empirical quantile, inf{x : Fhat(x) >= p} (the ceil(n p) order statistic).
double empirical_quantile(std::span<const double> sample, double p);

// Least-asymmetric-weighted-squares expectile via the weighted-mean
// fixed-point iteration e <- sum w_i z_i / sum w_i with
// w_i = tau 1{z_i > e} + (1-tau) 1{z_i <= e}; tolerance 1e-10, max 500
// iterations.
double empirical_expectile(std::span<const double> sample, double tau);

// Mean of the observations strictly exceeding the empirical quantile at
// `level`. Throws when there are no exceedances.
double empirical_expected_shortfall(std::span<const double> sample, double level);

// Risk of the fitted standardized innovation distribution.
RiskEstimate fp_risk(const FilterState& state, Functional functional, double level);

// Bootstrap-resamples `resample_size` residuals (with replacement) and takes
// the empirical functional. `resample = false` uses the residuals directly.
RiskEstimate fhs_risk(std::span<const double> residuals, Functional functional,
                      double level, std::size_t resample_size, Rng& rng,
                      bool resample = true);

}  // namespace riskbt
