// Traditional backtests as conditional calibration tests.
//
// Two-sided Wald statistic over an F-predictable test-function sequence
// h_t (q x k):
//   T1 = n (mean h_t V_t)' OmegaHat^{-1} (mean h_t V_t),
//   OmegaHat = (1/n) sum (h_t V_t)(h_t V_t)',    T1 -> chi^2_q under H0.
// One-sided version: componentwise z-statistics T2_m = sqrt(n)^{-1}
// OmegaHat_mm^{-1/2} sum_t Z_{t,m} with p-values Phi(T2_m) for
// super-calibration (1 - Phi for sub-calibration), combined by the Hommel
// rule pi_(m) <= m eta / (q C_q), C_q = sum_{r<=q} 1/r, and by Bonferroni.
//
// OmegaHat is inverted through a symmetric eigendecomposition with a
// condition-number guard of 1e12; an ill-conditioned matrix yields a
// degenerate report (never a pseudo-inverse and never a p-value).
#pragma once

#include <span>
#include <string>
#include <vector>

#include "riskbt/identification.hpp"
#include "riskbt/stats.hpp"

namespace riskbt {

struct CalibrationReport {
  double statistic = 0.0;                     // T1 / z / exceedance count
  std::vector<double> component_statistics;   // T2 components (one-sided)
  int df = 0;                                 // q
  double p_value = 1.0;                       // chi2 p (two-sided) or combined p
  std::vector<double> per_component_p;
  double combined_p_hommel = 1.0;
  double combined_p_bonferroni = 1.0;
  bool degenerate = false;
  std::string degeneracy_reason;
};

// Test-function sequences: n matrices of shape q x k stored flat.
class TestFunctionSeries {
 public:
  TestFunctionSeries() = default;
  TestFunctionSeries(std::size_t n, int q, int k)
      : n_(n), q_(q), k_(k), a_(n * q * k, 0.0) {}
  double& at(std::size_t t, int i, int j) { return a_[(t * q_ + i) * k_ + j]; }
  double at(std::size_t t, int i, int j) const { return a_[(t * q_ + i) * k_ + j]; }
  std::size_t size() const { return n_; }
  int q() const { return q_; }
  int k() const { return k_; }

 private:
  std::size_t n_ = 0;
  int q_ = 0, k_ = 0;
  std::vector<double> a_;
};

enum class TestFunctionKind {
  constant,              // h_t = I_k ("simple" tests)
  var_standard,          // h_t = (1, r_t)'
  var_abs,               // h_t = (1, |r_t|)'      (one-sided)
  dynamic_quantile,      // h_t = (1, V_{t-1}, ..., V_{t-p}, r_t)'
  inverse_sigma,         // h_t = 1 / sigma_t
  mcneil_frey,           // h_t = sigma_t^{-1}((r2-r1)/(1-nu), 1)
  one_sided_block_diag,  // rows (1,0), (|r1|,0), (0,1), (0,1/sigma)
};

struct TestFunctionSpec {
  TestFunctionKind kind = TestFunctionKind::constant;
  int lags = 1;  // dynamic_quantile only
};

struct TestFunctionInputs {
  std::span<const double> forecast_r1;      // VaR / expectile forecasts
  std::span<const double> forecast_r2;      // ES forecasts ((VaR,ES) only)
  std::span<const double> sigma_hat;        // predicted volatilities
  std::span<const IdentValue> ident_values; // lagged-V builders only
  double level = 0.0;                       // risk-measure level
};

struct BuiltTestFunctions {
  TestFunctionSeries h;
  // Number of initial observations dropped (lagged builders); align the V
  // series by the same offset.
  std::size_t offset = 0;
};

BuiltTestFunctions build_test_functions(const TestFunctionSpec& spec, int k,
                                        std::size_t n,
                                        const TestFunctionInputs& inputs);

enum class CalibrationSide { super, sub };

CalibrationReport two_sided_cct(std::span<const IdentValue> values, int k,
                                const TestFunctionSeries& h);

// h must be componentwise nonnegative.
CalibrationReport one_sided_cct(std::span<const IdentValue> values, int k,
                                const TestFunctionSeries& h, CalibrationSide side);

CalibrationReport average_calibration_test(std::span<const IdentValue> values,
                                           int k, HacPolicy hac);

enum class BinomialSide { two_sided, super, sub };

// Exact binomial test on the exceedance count (Bin(n, 1-alpha) under H0).
// Two-sided p-values sum the probabilities of all outcomes no more likely
// than the observed count.
CalibrationReport binomial_var_test(int exceedances, int n, double alpha,
                                    BinomialSide side);

struct ExceedanceResidualStat {
  double statistic = 0.0;          // mean exceedance residual
  double cct_approximation = 0.0;  // (1/n) sum h_t V_t with the McNeil-Frey h
  int exceedances = 0;
};

// Mean exceedance residual (1/#exc) sum (x_t - r2_t)/sigma_t over t with
// x_t > r1_t, plus its conditional-calibration approximation.
ExceedanceResidualStat mcneil_frey_statistic(std::span<const double> x,
                                             std::span<const double> r1,
                                             std::span<const double> r2,
                                             std::span<const double> sigma_hat,
                                             double nu);

}  // namespace riskbt
