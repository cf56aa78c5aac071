#include "riskbt/identification.hpp"

#include <cmath>
#include <stdexcept>

#include "riskbt/quadrature.hpp"

namespace riskbt {

IdentificationSpec::IdentificationSpec(Functional f, double level)
    : functional_(f), level_(level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("IdentificationSpec: level must lie in (0,1)");
  }
}

IdentificationSpec IdentificationSpec::var(double alpha) {
  return {Functional::var, alpha};
}
IdentificationSpec IdentificationSpec::expectile(double tau) {
  return {Functional::expectile, tau};
}
IdentificationSpec IdentificationSpec::var_es(double nu) {
  return {Functional::var_es, nu};
}

IdentValue identify(const IdentificationSpec& spec, double r, double x) {
  const double lvl = spec.level();
  const double ind = x > r ? 1.0 : 0.0;
  switch (spec.functional()) {
    case Functional::var:
      return {1.0 - lvl - ind, 0.0};
    case Functional::expectile:
      return {std::fabs(1.0 - lvl - ind) * (r - x), 0.0};
    case Functional::var_es:
      throw std::domain_error("identify: (VaR,ES) spec needs a forecast pair");
  }
  return {0.0, 0.0};
}

IdentValue identify(const IdentificationSpec& spec, double r1, double r2, double x) {
  if (spec.functional() != Functional::var_es) {
    throw std::domain_error("identify: pair forecast requires a (VaR,ES) spec");
  }
  const double nu = spec.level();
  const double ind = x > r1 ? 1.0 : 0.0;
  return {1.0 - nu - ind, r1 - r2 - ind * (r1 - x) / (1.0 - nu)};
}

namespace {

IdentValue expected_impl(const IdentificationSpec& spec, const Distribution& dist,
                         double r1, double r2, bool pair) {
  if (spec.functional() != Functional::var && !dist.has_finite_mean()) {
    throw std::domain_error("expected_identification: infinite mean under " +
                            dist.name());
  }
  const double lo = dist.support_lower();
  const double hi = dist.support_upper();
  IdentValue out{0.0, 0.0};
  const int k = spec.dimension();
  for (int c = 0; c < k; ++c) {
    auto integrand = [&](double x) {
      const double f = dist.pdf(x);
      if (f == 0.0) return 0.0;
      const IdentValue v = pair ? identify(spec, r1, r2, x) : identify(spec, r1, x);
      return v[static_cast<std::size_t>(c)] * f;
    };
    double total = 0.0;
    if (r1 > lo && r1 < hi) {
      total += integrate_or_throw(integrand, lo, r1, 1e-10);
      total += integrate_or_throw(integrand, r1, hi, 1e-10);
    } else {
      total = integrate_or_throw(integrand, lo, hi, 1e-10);
    }
    out[static_cast<std::size_t>(c)] = total;
  }
  return out;
}

}  // namespace

IdentValue expected_identification(const IdentificationSpec& spec,
                                   const Distribution& dist, double r) {
  return expected_impl(spec, dist, r, 0.0, false);
}

IdentValue expected_identification(const IdentificationSpec& spec,
                                   const Distribution& dist, double r1, double r2) {
  if (spec.functional() != Functional::var_es) {
    throw std::domain_error("expected_identification: pair forecast requires (VaR,ES)");
  }
  return expected_impl(spec, dist, r1, r2, true);
}

}  // namespace riskbt
