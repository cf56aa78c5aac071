// Derivative-free minimization (Nelder-Mead) used by the likelihood fits.
#pragma once

#include <functional>
#include <vector>

namespace riskbt {

struct NelderMeadResult {
  std::vector<double> x;
  double fmin = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Minimizes f starting from x0. `step` sets the initial simplex edge per
// coordinate. Converges when the simplex function-value spread falls below
// tol (absolute).
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0,
                             const std::vector<double>& step, double tol = 1e-8,
                             int max_evaluations = 20000);

}  // namespace riskbt
