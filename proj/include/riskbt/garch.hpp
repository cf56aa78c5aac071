// AR(1)-GARCH(1,1) simulation, maximum-likelihood filtering and one-step
// forecasts:
//   X_t = c + phi X_{t-1} + eps_t,  eps_t = sigma_t Z_t,
//   sigma_t^2 = omega + alpha eps_{t-1}^2 + beta sigma_{t-1}^2,
// with zero-mean unit-variance innovations Z_t.
//
// Fitting maximizes the conditional log-likelihood with Nelder-Mead over an
// unconstrained reparameterization (tanh for |phi|<1, log for omega, a
// logistic persistence/share pair keeping alpha, beta >= 0 and
// alpha + beta < 1, log(nu - 2), log(gamma)). Multi-start: variance-targeting
// moment estimates and, when provided, the previous window's fit.
// Recursion initialization: sigma_1^2 = the window's sample variance,
// presample eps_0 = 0.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "riskbt/distributions.hpp"
#include "riskbt/rng.hpp"

namespace riskbt {

enum class InnovationFamily { normal, student_t, skewed_t };

std::string innovation_family_name(InnovationFamily f);

struct ArGarchParams {
  double ar_intercept = 0.0;  // c
  double ar_coef = 0.0;       // phi, |phi| < 1
  double omega = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  Distribution innovation = Distribution::normal(0.0, 1.0);

  void validate() const;  // throws std::domain_error on violations
  // Unconditional variance of eps_t: omega / (1 - alpha - beta).
  double stationary_eps_variance() const { return omega / (1.0 - alpha - beta); }
};

struct SimPath {
  std::vector<double> x;      // losses
  std::vector<double> mu;     // conditional means
  std::vector<double> sigma;  // conditional volatilities
};

// Simulates n observations after discarding `burnin`; reproducible by seed.
SimPath simulate_ar_garch(const ArGarchParams& params, std::size_t n,
                          std::size_t burnin, Rng& rng);

struct FilterState {
  InnovationFamily family = InnovationFamily::normal;
  double c = 0.0, phi = 0.0, omega = 0.0, alpha = 0.0, beta = 0.0;
  double nu = 0.0;     // t / skewed-t shape
  double gamma = 1.0;  // skewed-t skewness
  double log_likelihood = 0.0;
  bool converged = false;

  std::vector<double> mu_hat;     // fitted conditional means
  std::vector<double> sigma_hat;  // fitted conditional volatilities
  std::vector<double> residuals;  // standardized residuals, one per window obs

  double next_mu = 0.0;     // c + phi x_n
  double next_sigma = 0.0;  // sqrt(omega + alpha eps_n^2 + beta sigma_n^2)

  // Standardized innovation distribution implied by the fitted family.
  Distribution innovation_distribution() const;
};

// `warm_start`, when given, seeds an extra optimizer start from a previous
// fit of the same family.
FilterState fit_ar_garch_mle(std::span<const double> window, InnovationFamily family,
                             const FilterState* warm_start = nullptr);

struct OneStepForecast {
  double mu = 0.0;
  double sigma = 0.0;
};

OneStepForecast forecast_one_step(const FilterState& state);

// Filters a window with known parameters (no estimation); used by tests and
// the oracle forecaster.
FilterState filter_with_params(std::span<const double> window,
                               InnovationFamily family, double c, double phi,
                               double omega, double alpha, double beta,
                               double nu = 0.0, double gamma = 1.0);

}  // namespace riskbt
