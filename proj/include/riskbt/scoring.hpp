// Consistent scoring functions for VaR, expectiles and the (VaR, ES) pair.
//
// VaR (level alpha, increasing G):
//   S(r,x) = (1 - alpha - 1{x > r}) G(r) + 1{x > r} G(x)
// expectile (level tau, convex phi with subgradient phi'):
//   S(r,x) = 1{x > r}(1-2 tau)(phi(r) - phi(x) - phi'(r)(r-x))
//            - (1-tau)(phi(r) - phi'(r)(r-x))
// (VaR, ES) (level nu, increasing G1, increasing concave calG2, G2 = calG2'):
//   S(r1,r2,x) = 1{x > r1}(-G1(r1) + G1(x) - G2(r2)(r1-x))
//                + (1-nu)(G1(r1) - G2(r2)(r2-r1) + calG2(r2))
//
// The generator menu covers the positive-homogeneous families (degrees b)
// plus the log choices whose score *differences* are 0-homogeneous. Log-type
// generators restrict forecasts to be strictly positive ((VaR,ES): only the
// ES coordinate); violations raise std::domain_error rather than returning
// NaN.
#pragma once

#include <optional>
#include <string>

#include "riskbt/distributions.hpp"
#include "riskbt/rng.hpp"

namespace riskbt {

enum class Functional { var, expectile, var_es };

std::string functional_name(Functional f);

class ScoreSpec {
 public:
  enum class Generator {
    linear,       // VaR: G(y) = y, 1-homogeneous
    log_form,     // G = log / phi = -log / calG2 = log: 0-homogeneous differences
    quadratic,    // expectile: phi(y) = y^2, 2-homogeneous
    sqrt_form,    // (VaR,ES): calG2(y) = sqrt(y), (1/2)-homogeneous
    power,        // custom power family of declared degree b
    xlogx,        // expectile: phi(y) = y log y, 1-homogeneous differences
    logistic_g2,  // (VaR,ES): the companion lower-tail form (G1 identity,
                  // G2 logistic) applied to losses through negation
  };

  static ScoreSpec var_linear(double alpha);
  static ScoreSpec var_log(double alpha);
  static ScoreSpec var_power(double alpha, double b);
  static ScoreSpec expectile_quadratic(double tau);
  static ScoreSpec expectile_neglog(double tau);
  static ScoreSpec expectile_power(double tau, double b);
  static ScoreSpec expectile_xlogx(double tau);
  static ScoreSpec vares_sqrt(double nu);
  static ScoreSpec vares_log(double nu);
  static ScoreSpec vares_power(double nu, double b);
  static ScoreSpec vares_logistic(double nu);

  Functional functional() const { return functional_; }
  double level() const { return level_; }
  Generator generator() const { return generator_; }
  double power_degree() const { return power_; }

  // Homogeneity degree of the score itself, or of the score differences when
  // differences_only() is true. Empty for the logistic generator.
  std::optional<double> declared_homogeneity() const;
  bool differences_only() const;
  // True when forecasts must be strictly positive (the ES coordinate for
  // (VaR,ES) specs).
  bool requires_positive_forecast() const;

  std::string id() const;  // short label used in tables, e.g. "var-log"

 private:
  ScoreSpec(Functional f, double level, Generator g, double power);
  Functional functional_;
  double level_;
  Generator generator_;
  double power_;
};

// Scalar functionals (VaR, expectile).
double score(const ScoreSpec& spec, double r, double x);
// (VaR, ES): r1 = VaR forecast, r2 = ES forecast.
double score(const ScoreSpec& spec, double r1, double r2, double x);

double score_difference(const ScoreSpec& spec, double r, double r_alt, double x);
double score_difference(const ScoreSpec& spec, double r1, double r2,
                        double r1_alt, double r2_alt, double x);

// E S(r, X) under dist, adaptive quadrature split at the forecast kink.
// Throws std::runtime_error when the defining integral does not exist
// (insufficient moments) or fails to converge.
double expected_score(const ScoreSpec& spec, const Distribution& dist, double r);
double expected_score(const ScoreSpec& spec, const Distribution& dist, double r1,
                      double r2);

struct HomogeneityReport {
  bool degree_confirmed = false;
  double max_rel_err = 0.0;
};

// Draws random positive (c, r, x) triples and checks S(c r, c x) = c^b S(r,x)
// (or the score-difference analogue) to 1e-10 relative error.
HomogeneityReport validate_homogeneity(const ScoreSpec& spec, int trials, Rng& rng);

}  // namespace riskbt
