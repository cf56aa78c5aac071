// Scalar special functions used throughout the library. All of them are
// self-contained double-precision implementations validated against
// high-precision references in the test suite (target: <= 1e-12 relative
// error on the tabulated points).
#pragma once

namespace riskbt {

// Standard normal density, distribution function and quantile.
double norm_pdf(double x);
double norm_cdf(double x);
// Inverse of norm_cdf for p in (0,1). Throws std::domain_error otherwise.
double norm_quantile(double p);

// log Gamma(x) for x > 0.
double log_gamma(double x);
// log Beta(a,b) for a,b > 0.
double log_beta(double a, double b);

// Regularized incomplete beta function I_x(a,b), x in [0,1].
double reg_inc_beta(double a, double b, double x);

// Regularized lower incomplete gamma function P(a,x), a > 0, x >= 0.
double reg_inc_gamma(double a, double x);

// Chi-square distribution function with k degrees of freedom.
double chi2_cdf(double x, double k);

// Student-t distribution with nu degrees of freedom (location 0, scale 1).
double student_t_pdf(double x, double nu);
double student_t_cdf(double x, double nu);
double student_t_quantile(double p, double nu);

}  // namespace riskbt
