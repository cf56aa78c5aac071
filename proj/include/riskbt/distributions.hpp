// Innovation distributions: Normal, Exponential, Student-t, Pareto,
// generalized Pareto, skewed-t (Fernandez-Steel) and asymmetric Student-t
// (Zhu-Galbraith). Each family carries analytic density/CDF/quantile,
// partial moments M_X(z) = E[X 1{X<=z}], the expectile curve G_X, expected
// shortfall and inverse-CDF sampling. A distribution can be standardized
// (location-scale transformed to mean 0, variance 1), which is how they are
// used as GARCH innovations.
//
// All objects are immutable after construction and safe to share across
// threads; sampling draws uniforms from an explicitly passed Rng.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "riskbt/rng.hpp"

namespace riskbt {

enum class DistFamily { normal, exponential, student_t, pareto, gpd, skewed_t, ast };

class Distribution {
 public:
  static Distribution normal(double mu, double sigma);
  static Distribution exponential(double rate);
  static Distribution student_t(double nu);          // nu > 1
  static Distribution pareto(double alpha);          // alpha > 1, density a x^{-a-1} on x >= 1
  static Distribution gpd(double scale, double shape);
  static Distribution skewed_t(double nu, double gamma);        // nu > 2
  static Distribution ast(double alpha, double nu1, double nu2);  // nu1, nu2 > 2

  // Location-scale transform of *this to mean 0, variance 1. Requires a
  // finite variance.
  Distribution standardized() const;

  DistFamily family() const { return family_; }
  bool is_standardized() const { return standardized_; }
  std::string name() const;

  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;

  bool has_finite_mean() const;
  bool has_finite_variance() const;
  // Supremum of q with E|X|^q finite (the tail index for the heavy-tailed
  // families; +inf for normal/exponential).
  double max_finite_moment_order() const;
  double mean() const;
  double variance() const;

  // Partial moment M_X(z); requires a finite mean.
  double partial_moment(double z) const;

  // Expectile curve G_X(z) using the per-family closed form.
  double expectile_curve(double z) const;
  // The same curve assembled from the generic partial-moment representation
  //   G(z) = (z F(z) - M(z)) / (2 (z F(z) - M(z)) + E X - z).
  // Kept as an independent route for cross-checks.
  double expectile_curve_generic(double z) const;
  // Omega ratio (upside over downside partial moment); satisfies
  // Omega(r) = 1/G(r) - 1.
  double omega_ratio(double z) const;

  // tau-expectile: monotone bisection on the expectile curve.
  double expectile(double tau) const;

  // E(X | X >= VaR_level).
  double expected_shortfall(double level) const;

  double sample_one(Rng& rng) const;
  std::vector<double> sample(std::size_t n, Rng& rng) const;

  double support_lower() const;
  double support_upper() const;

 private:
  Distribution() = default;
  void finalize();

  // Base-family functions in the raw parameterization.
  double base_pdf(double x) const;
  double base_cdf(double x) const;
  double base_quantile(double p) const;
  double base_partial_moment(double z) const;
  double base_expectile_curve(double z) const;
  double base_support_lower() const;
  double base_support_upper() const;

  DistFamily family_ = DistFamily::normal;
  bool standardized_ = false;
  // parameters (meaning depends on family_)
  double p1_ = 0.0, p2_ = 1.0, p3_ = 0.0;
  // cached family constants
  double base_mean_ = 0.0, base_var_ = 1.0;
  bool finite_mean_ = true, finite_var_ = true;
  double ast_alpha_star_ = 0.0, ast_b_ = 0.0;  // AST helpers
  // standardization transform: standardized value z corresponds to base
  // value loc_ + scale_ * z
  double loc_ = 0.0, scale_ = 1.0;
};

}  // namespace riskbt
