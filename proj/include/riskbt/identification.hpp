// Identification (moment) functions V with E V(Theta(F), X) = 0 exactly at
// the true functional value; the primitive behind the calibration tests.
//
//   VaR (alpha):        V(r,x)  = 1 - alpha - 1{x > r}
//   expectile (tau):    V(r,x)  = |1 - tau - 1{x > r}| (r - x)
//   (VaR,ES) (nu):      V1      = 1 - nu - 1{x > r1}
//                       V2      = r1 - r2 - 1{x > r1}(r1 - x)/(1 - nu)
//
// Indicators are strict (x > r); ties x = r count as non-exceedances. The
// (VaR,ES) second component keeps the 1/(1-nu) factor inside so that the
// McNeil-Frey test-function algebra reproduces the exceedance-residual
// statistic exactly.
//
// Orientation: for VaR and expectiles, componentwise E V >= 0
// (super-calibration) corresponds to forecasts at least as large as the true
// functional.
#pragma once

#include <array>

#include "riskbt/distributions.hpp"
#include "riskbt/scoring.hpp"

namespace riskbt {

class IdentificationSpec {
 public:
  static IdentificationSpec var(double alpha);
  static IdentificationSpec expectile(double tau);
  static IdentificationSpec var_es(double nu);

  Functional functional() const { return functional_; }
  double level() const { return level_; }
  int dimension() const { return functional_ == Functional::var_es ? 2 : 1; }

 private:
  IdentificationSpec(Functional f, double level);
  Functional functional_;
  double level_;
};

// Fixed-capacity component vector; entries beyond dimension() are zero.
using IdentValue = std::array<double, 2>;

IdentValue identify(const IdentificationSpec& spec, double r, double x);
IdentValue identify(const IdentificationSpec& spec, double r1, double r2, double x);

// E V(forecast, X) under dist by quadrature (split at the indicator kink).
IdentValue expected_identification(const IdentificationSpec& spec,
                                   const Distribution& dist, double r);
IdentValue expected_identification(const IdentificationSpec& spec,
                                   const Distribution& dist, double r1, double r2);

}  // namespace riskbt
