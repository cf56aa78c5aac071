#include "riskbt/scoring.hpp"

#include <cmath>
#include <stdexcept>

#include "riskbt/quadrature.hpp"

namespace riskbt {

namespace {

double sign_power(double y, double b) {
  // (1{y>=0} - 1{y<0}) |y|^b
  if (y == 0.0) return 0.0;
  return y > 0.0 ? std::pow(y, b) : -std::pow(-y, b);
}

void require_positive(double r, const char* what) {
  if (!(r > 0.0)) {
    throw std::domain_error(std::string(what) +
                            ": generator requires a strictly positive forecast");
  }
}

}  // namespace

std::string functional_name(Functional f) {
  switch (f) {
    case Functional::var: return "var";
    case Functional::expectile: return "expectile";
    case Functional::var_es: return "var-es";
  }
  return "?";
}

ScoreSpec::ScoreSpec(Functional f, double level, Generator g, double power)
    : functional_(f), level_(level), generator_(g), power_(power) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("ScoreSpec: level must lie in (0,1)");
  }
  if (g == Generator::power) {
    const bool bad = (f == Functional::var && power == 0.0) ||
                     (f == Functional::expectile && (power == 0.0 || power == 1.0)) ||
                     (f == Functional::var_es && (power == 0.0 || power >= 1.0));
    if (bad) {
      throw std::domain_error(
          "ScoreSpec: no strictly consistent power score of this degree");
    }
  }
}

ScoreSpec ScoreSpec::var_linear(double a) { return {Functional::var, a, Generator::linear, 1.0}; }
ScoreSpec ScoreSpec::var_log(double a) { return {Functional::var, a, Generator::log_form, 0.0}; }
ScoreSpec ScoreSpec::var_power(double a, double b) { return {Functional::var, a, Generator::power, b}; }
ScoreSpec ScoreSpec::expectile_quadratic(double t) { return {Functional::expectile, t, Generator::quadratic, 2.0}; }
ScoreSpec ScoreSpec::expectile_neglog(double t) { return {Functional::expectile, t, Generator::log_form, 0.0}; }
ScoreSpec ScoreSpec::expectile_power(double t, double b) { return {Functional::expectile, t, Generator::power, b}; }
ScoreSpec ScoreSpec::expectile_xlogx(double t) { return {Functional::expectile, t, Generator::xlogx, 1.0}; }
ScoreSpec ScoreSpec::vares_sqrt(double n) { return {Functional::var_es, n, Generator::sqrt_form, 0.5}; }
ScoreSpec ScoreSpec::vares_log(double n) { return {Functional::var_es, n, Generator::log_form, 0.0}; }
ScoreSpec ScoreSpec::vares_power(double n, double b) { return {Functional::var_es, n, Generator::power, b}; }
ScoreSpec ScoreSpec::vares_logistic(double n) { return {Functional::var_es, n, Generator::logistic_g2, 0.0}; }

std::optional<double> ScoreSpec::declared_homogeneity() const {
  switch (generator_) {
    case Generator::linear: return 1.0;
    case Generator::quadratic: return 2.0;
    case Generator::sqrt_form: return 0.5;
    case Generator::power: return power_;
    case Generator::log_form: return 0.0;
    case Generator::xlogx: return 1.0;
    case Generator::logistic_g2: return std::nullopt;
  }
  return std::nullopt;
}

bool ScoreSpec::differences_only() const {
  return generator_ == Generator::log_form || generator_ == Generator::xlogx;
}

bool ScoreSpec::requires_positive_forecast() const {
  switch (generator_) {
    case Generator::log_form:
    case Generator::sqrt_form:
    case Generator::xlogx:
      return true;
    case Generator::power:
      return functional_ == Functional::var_es || power_ < (functional_ == Functional::expectile ? 1.0 : 0.0) ||
             (functional_ == Functional::var && power_ < 0.0);
    default:
      return false;
  }
}

std::string ScoreSpec::id() const {
  std::string g;
  switch (generator_) {
    case Generator::linear: g = "linear"; break;
    case Generator::log_form: g = functional_ == Functional::expectile ? "neglog" : "log"; break;
    case Generator::quadratic: g = "quadratic"; break;
    case Generator::sqrt_form: g = "sqrt"; break;
    case Generator::power: g = "power" + std::to_string(power_); break;
    case Generator::xlogx: g = "xlogx"; break;
    case Generator::logistic_g2: g = "logistic"; break;
  }
  return functional_name(functional_) + "-" + g;
}

double score(const ScoreSpec& spec, double r, double x) {
  const double lvl = spec.level();
  const bool exceed = x > r;
  switch (spec.functional()) {
    case Functional::var: {
      const double w = 1.0 - lvl - (exceed ? 1.0 : 0.0);
      switch (spec.generator()) {
        case ScoreSpec::Generator::linear:
          return w * r + (exceed ? x : 0.0);
        case ScoreSpec::Generator::log_form:
          require_positive(r, "var-log score");
          return w * std::log(r) + (exceed ? std::log(x) : 0.0);
        case ScoreSpec::Generator::power: {
          const double b = spec.power_degree();
          if (b > 0.0) return w * sign_power(r, b) + (exceed ? sign_power(x, b) : 0.0);
          require_positive(r, "var-power score");
          return w * (-std::pow(r, b)) + (exceed ? -std::pow(x, b) : 0.0);
        }
        default:
          throw std::domain_error("score: generator not valid for VaR");
      }
    }
    case Functional::expectile: {
      double phi_r, dphi_r, phi_x = 0.0;
      switch (spec.generator()) {
        case ScoreSpec::Generator::quadratic:
          phi_r = r * r;
          dphi_r = 2.0 * r;
          if (exceed) phi_x = x * x;
          break;
        case ScoreSpec::Generator::log_form:
          require_positive(r, "expectile-neglog score");
          phi_r = -std::log(r);
          dphi_r = -1.0 / r;
          if (exceed) phi_x = -std::log(x);
          break;
        case ScoreSpec::Generator::xlogx:
          require_positive(r, "expectile-xlogx score");
          phi_r = r * std::log(r);
          dphi_r = std::log(r) + 1.0;
          if (exceed) phi_x = x * std::log(x);
          break;
        case ScoreSpec::Generator::power: {
          const double b = spec.power_degree();
          if (b > 1.0) {
            phi_r = std::pow(std::fabs(r), b);
            dphi_r = b * sign_power(r, b - 1.0);
            if (exceed) phi_x = std::pow(std::fabs(x), b);
          } else {
            require_positive(r, "expectile-power score");
            phi_r = std::pow(r, b) / (b * (b - 1.0));
            dphi_r = std::pow(r, b - 1.0) / (b - 1.0);
            if (exceed) phi_x = std::pow(x, b) / (b * (b - 1.0));
          }
          break;
        }
        default:
          throw std::domain_error("score: generator not valid for expectiles");
      }
      const double tail = exceed ? (1.0 - 2.0 * lvl) * (phi_r - phi_x - dphi_r * (r - x)) : 0.0;
      return tail - (1.0 - lvl) * (phi_r - dphi_r * (r - x));
    }
    case Functional::var_es:
      throw std::domain_error("score: (VaR,ES) spec needs a forecast pair");
  }
  return 0.0;
}

double score(const ScoreSpec& spec, double r1, double r2, double x) {
  if (spec.functional() != Functional::var_es) {
    throw std::domain_error("score: pair forecast requires a (VaR,ES) spec");
  }
  const double nu = spec.level();
  const bool exceed = x > r1;
  double g1_r1 = 0.0, g1_x = 0.0, g2, calg2;
  switch (spec.generator()) {
    case ScoreSpec::Generator::sqrt_form:
      require_positive(r2, "var-es-sqrt score");
      g2 = 0.5 / std::sqrt(r2);
      calg2 = std::sqrt(r2);
      break;
    case ScoreSpec::Generator::log_form:
      require_positive(r2, "var-es-log score");
      g2 = 1.0 / r2;
      calg2 = std::log(r2);
      break;
    case ScoreSpec::Generator::power: {
      const double b = spec.power_degree();
      require_positive(r2, "var-es-power score");
      if (b > 0.0) {
        g1_r1 = sign_power(r1, b);
        if (exceed) g1_x = sign_power(x, b);
        g2 = b * std::pow(r2, b - 1.0);
        calg2 = std::pow(r2, b);
      } else {
        g2 = -b * std::pow(r2, b - 1.0);
        calg2 = -std::pow(r2, b);
      }
      break;
    }
    case ScoreSpec::Generator::logistic_g2: {
      // The companion lower-tail form with G1 the identity and G2 the
      // logistic function, applied to losses through negation:
      //   S = (1{x>r1} - (1-nu))(x - r1)
      //       + G2(-r2) ((1{x>r1}(x - r1))/(1-nu) + r1 - r2)
      //       - calG2(-r2),  calG2' = G2.
      // Unlike the other generators it weights exceedances by 1/(1-nu) and
      // needs no positivity restriction.
      const double a = 1.0 - nu;
      const double ind = exceed ? 1.0 : 0.0;
      const double g2m = 1.0 / (1.0 + std::exp(r2));  // logistic at -r2
      const double calg2m =
          r2 > 0.0 ? std::log1p(std::exp(-r2)) : -r2 + std::log1p(std::exp(r2));
      return (ind - a) * (x - r1) + g2m * (ind * (x - r1) / a + r1 - r2) - calg2m;
    }
    default:
      throw std::domain_error("score: generator not valid for (VaR,ES)");
  }
  const double tail = exceed ? (-g1_r1 + g1_x - g2 * (r1 - x)) : 0.0;
  return tail + (1.0 - nu) * (g1_r1 - g2 * (r2 - r1) + calg2);
}

double score_difference(const ScoreSpec& spec, double r, double r_alt, double x) {
  return score(spec, r, x) - score(spec, r_alt, x);
}

double score_difference(const ScoreSpec& spec, double r1, double r2, double r1_alt,
                        double r2_alt, double x) {
  return score(spec, r1, r2, x) - score(spec, r1_alt, r2_alt, x);
}

namespace {

double moment_order_needed(const ScoreSpec& spec) {
  switch (spec.generator()) {
    case ScoreSpec::Generator::linear: return 1.0;
    case ScoreSpec::Generator::quadratic: return 2.0;
    case ScoreSpec::Generator::sqrt_form: return 1.0;
    case ScoreSpec::Generator::log_form:
      return spec.functional() == Functional::var ? 1e-9 : 1.0;
    case ScoreSpec::Generator::xlogx: return 1.0 + 1e-9;
    case ScoreSpec::Generator::logistic_g2: return 1.0;
    case ScoreSpec::Generator::power: {
      const double b = spec.power_degree();
      if (spec.functional() == Functional::var_es) return std::max(1.0, b);
      return std::max(b, spec.functional() == Functional::expectile ? 1.0 : 1e-9);
    }
  }
  return 1.0;
}

double expected_score_impl(const Distribution& dist, double r_kink,
                           const std::function<double(double)>& integrand) {
  const double lo = dist.support_lower();
  const double hi = dist.support_upper();
  double total = 0.0;
  if (r_kink > lo && r_kink < hi) {
    total += integrate_or_throw(integrand, lo, r_kink, 1e-9);
    total += integrate_or_throw(integrand, r_kink, hi, 1e-9);
  } else {
    total = integrate_or_throw(integrand, lo, hi, 1e-9);
  }
  if (!std::isfinite(total)) throw std::runtime_error("expected_score: divergent integral");
  return total;
}

void check_integrability(const ScoreSpec& spec, const Distribution& dist) {
  const double need = moment_order_needed(spec);
  if (need >= dist.max_finite_moment_order()) {
    throw std::runtime_error("expected_score: E|X|^" + std::to_string(need) +
                             " does not exist under " + dist.name());
  }
}

}  // namespace

double expected_score(const ScoreSpec& spec, const Distribution& dist, double r) {
  if (spec.functional() == Functional::var_es) {
    throw std::domain_error("expected_score: (VaR,ES) spec needs a forecast pair");
  }
  check_integrability(spec, dist);
  auto integrand = [&](double x) {
    const double f = dist.pdf(x);
    return f == 0.0 ? 0.0 : score(spec, r, x) * f;
  };
  return expected_score_impl(dist, r, integrand);
}

double expected_score(const ScoreSpec& spec, const Distribution& dist, double r1,
                      double r2) {
  check_integrability(spec, dist);
  auto integrand = [&](double x) {
    const double f = dist.pdf(x);
    return f == 0.0 ? 0.0 : score(spec, r1, r2, x) * f;
  };
  return expected_score_impl(dist, r1, integrand);
}

HomogeneityReport validate_homogeneity(const ScoreSpec& spec, int trials, Rng& rng) {
  const auto degree = spec.declared_homogeneity();
  if (!degree) throw std::domain_error("validate_homogeneity: spec declares no degree");
  const double b = *degree;
  HomogeneityReport rep;
  rep.degree_confirmed = true;
  const bool pair = spec.functional() == Functional::var_es;
  for (int i = 0; i < trials; ++i) {
    // Positive draws spanning a couple of orders of magnitude.
    auto draw = [&] { return std::exp(2.5 * (2.0 * rng.uniform01() - 1.0)); };
    const double c = draw();
    const double x = draw();
    double lhs, rhs;
    if (!spec.differences_only()) {
      if (pair) {
        const double r1 = draw(), r2 = r1 + draw();
        lhs = score(spec, c * r1, c * r2, c * x);
        rhs = std::pow(c, b) * score(spec, r1, r2, x);
      } else {
        const double r = draw();
        lhs = score(spec, c * r, c * x);
        rhs = std::pow(c, b) * score(spec, r, x);
      }
    } else {
      if (pair) {
        const double r1 = draw(), r2 = r1 + draw();
        const double q1 = draw(), q2 = q1 + draw();
        lhs = score_difference(spec, c * r1, c * r2, c * q1, c * q2, c * x);
        rhs = std::pow(c, b) * score_difference(spec, r1, r2, q1, q2, x);
      } else {
        const double r = draw(), q = draw();
        lhs = score_difference(spec, c * r, c * q, c * x);
        rhs = std::pow(c, b) * score_difference(spec, r, q, x);
      }
    }
    const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-30});
    const double rel = std::fabs(lhs - rhs) / scale;
    rep.max_rel_err = std::max(rep.max_rel_err, rel);
    if (rel > 1e-10) rep.degree_confirmed = false;
  }
  return rep;
}

}  // namespace riskbt
