// Peaks-over-threshold estimation: GPD maximum likelihood on excesses over a
// high threshold u = z_(k+1) (the (k+1)-th descending order statistic) and
// the tail estimators built on it,
//   VaR_a(Z) = u + beta/xi ((k / ((1-a) n))^xi - 1)
//   ES_a(Z)  = (VaR_a(Z) + beta - xi u) / (1 - xi),         xi < 1
// plus the expectile obtained by inverting GHat_Z = 1/(1 + OmegaHat_Z) above
// u, where OmegaHat_Z combines the GPD tail with the empirical body through
//   c = zbar_u + (k/n)(u + beta/(1-xi)),  zbar_u = (1/n) sum z_t 1{z_t <= u}.
// When GHat_Z(u) >= tau the expectile lies below the threshold and the
// empirical estimator is used instead.
#pragma once

#include <span>

#include "riskbt/scoring.hpp"
#include "riskbt/estimators.hpp"

namespace riskbt {

struct GpdFit {
  double beta = 0.0;
  double xi = 0.0;
  double se_beta = 0.0;  // asymptotic standard errors
  double se_xi = 0.0;
  std::size_t n = 0;
  bool converged = false;
};

// Profile MLE over xi/beta; supports xi < 0 (with beta + xi max(y) > 0).
// Requires at least 10 strictly positive excesses.
GpdFit gpd_fit_mle(std::span<const double> excesses);

struct EvtFit {
  double threshold = 0.0;  // u = z_(k+1)
  std::size_t k = 0;       // excess count
  double tail_fraction = 0.0;
  std::size_t n = 0;
  GpdFit gpd;
};

EvtFit evt_tail_fit(std::span<const double> sample, std::size_t k);

double evt_var(const EvtFit& fit, double alpha);
double evt_es(const EvtFit& fit, double alpha);  // requires xi < 1

struct EvtExpectile {
  double value = 0.0;
  bool used_empirical_fallback = false;
  bool shape_warning = false;  // xi above 0.9: the tail estimate is fragile
};

// Needs the full sample again for the body term zbar_u and the empirical
// fallback.
EvtExpectile evt_expectile(const EvtFit& fit, std::span<const double> sample,
                           double tau);

// Default tail count: 60 for windows of 500, proportional otherwise.
std::size_t default_tail_count(std::size_t n);

// Convenience dispatcher mirroring fp_risk / fhs_risk.
RiskEstimate evt_risk(std::span<const double> residuals, Functional functional,
                      double level, std::size_t k);

}  // namespace riskbt
