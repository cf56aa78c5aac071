// Adaptive Gauss-Kronrod (15-point) quadrature over finite, half-infinite and
// doubly infinite intervals. Infinite endpoints are mapped to (-pi/2, pi/2)
// by the substitution y = tan(t) before subdividing.
#pragma once

#include <functional>

namespace riskbt {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
};

// Integrate f over [a, b]; a and b may be +/-infinity.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double rel_tol = 1e-9,
                           int max_subdivisions = 2000);

// Convenience wrapper that throws std::runtime_error on non-convergence.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-9);

}  // namespace riskbt
