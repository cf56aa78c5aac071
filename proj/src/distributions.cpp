#include "riskbt/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "riskbt/special.hpp"

namespace riskbt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Below this |shape| the GPD formulas switch to their exponential limits.
constexpr double kGpdShapeEps = 1e-8;

double t_kconst(double nu) {
  // K(nu) = Gamma((nu+1)/2) / (Gamma(nu/2) sqrt(nu pi))
  return std::exp(log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) -
                  0.5 * std::log(nu * 3.14159265358979323846));
}
}  // namespace

Distribution Distribution::normal(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("normal: sigma > 0 required");
  Distribution d;
  d.family_ = DistFamily::normal;
  d.p1_ = mu;
  d.p2_ = sigma;
  d.finalize();
  return d;
}

Distribution Distribution::exponential(double rate) {
  if (!(rate > 0.0)) throw std::domain_error("exponential: rate > 0 required");
  Distribution d;
  d.family_ = DistFamily::exponential;
  d.p1_ = rate;
  d.finalize();
  return d;
}

Distribution Distribution::student_t(double nu) {
  if (!(nu > 1.0)) throw std::domain_error("student_t: nu > 1 required");
  Distribution d;
  d.family_ = DistFamily::student_t;
  d.p1_ = nu;
  d.finalize();
  return d;
}

Distribution Distribution::pareto(double alpha) {
  if (!(alpha > 1.0)) throw std::domain_error("pareto: alpha > 1 required");
  Distribution d;
  d.family_ = DistFamily::pareto;
  d.p1_ = alpha;
  d.finalize();
  return d;
}

Distribution Distribution::gpd(double scale, double shape) {
  if (!(scale > 0.0)) throw std::domain_error("gpd: scale > 0 required");
  Distribution d;
  d.family_ = DistFamily::gpd;
  d.p1_ = scale;
  d.p2_ = shape;
  d.finalize();
  return d;
}

Distribution Distribution::skewed_t(double nu, double gamma) {
  if (!(nu > 2.0)) throw std::domain_error("skewed_t: nu > 2 required");
  if (!(gamma > 0.0)) throw std::domain_error("skewed_t: gamma > 0 required");
  Distribution d;
  d.family_ = DistFamily::skewed_t;
  d.p1_ = nu;
  d.p2_ = gamma;
  d.finalize();
  return d;
}

Distribution Distribution::ast(double alpha, double nu1, double nu2) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("ast: alpha in (0,1) required");
  if (!(nu1 > 2.0 && nu2 > 2.0)) throw std::domain_error("ast: nu1, nu2 > 2 required");
  Distribution d;
  d.family_ = DistFamily::ast;
  d.p1_ = alpha;
  d.p2_ = nu1;
  d.p3_ = nu2;
  d.finalize();
  return d;
}

void Distribution::finalize() {
  switch (family_) {
    case DistFamily::normal:
      base_mean_ = p1_;
      base_var_ = p2_ * p2_;
      break;
    case DistFamily::exponential:
      base_mean_ = 1.0 / p1_;
      base_var_ = 1.0 / (p1_ * p1_);
      break;
    case DistFamily::student_t:
      base_mean_ = 0.0;
      finite_var_ = p1_ > 2.0;
      base_var_ = finite_var_ ? p1_ / (p1_ - 2.0) : kNaN;
      break;
    case DistFamily::pareto:
      base_mean_ = p1_ / (p1_ - 1.0);
      finite_var_ = p1_ > 2.0;
      base_var_ = finite_var_
                      ? p1_ / ((p1_ - 1.0) * (p1_ - 1.0) * (p1_ - 2.0))
                      : kNaN;
      break;
    case DistFamily::gpd: {
      const double xi = p2_;
      finite_mean_ = xi < 1.0;
      finite_var_ = xi < 0.5;
      base_mean_ = finite_mean_ ? p1_ / (1.0 - xi) : kNaN;
      base_var_ = finite_var_ ? p1_ * p1_ / ((1.0 - xi) * (1.0 - xi) * (1.0 - 2.0 * xi))
                              : kNaN;
      break;
    }
    case DistFamily::skewed_t: {
      const double nu = p1_, g = p2_;
      const double k = t_kconst(nu);
      base_mean_ = 2.0 * k * nu / (nu - 1.0) * (g - 1.0 / g);
      const double g2 = g * g;
      const double a = nu / (nu - 2.0) * (1.0 - 3.0 * g2 / ((1.0 + g2) * (1.0 + g2)));
      const double b = 4.0 * k * k * (nu / (nu - 1.0)) * (nu / (nu - 1.0)) *
                       (1.0 - 2.0 / (1.0 + g2)) * (1.0 - 2.0 / (1.0 + g2));
      base_var_ = (a - b) * (g + 1.0 / g) * (g + 1.0 / g);
      break;
    }
    case DistFamily::ast: {
      const double a = p1_, nu1 = p2_, nu2 = p3_;
      const double k1 = t_kconst(nu1);
      const double k2 = t_kconst(nu2);
      ast_b_ = a * k1 + (1.0 - a) * k2;
      ast_alpha_star_ = a * k1 / ast_b_;
      const double as = ast_alpha_star_;
      base_mean_ = 4.0 * ast_b_ *
                   (-(as * as) * nu1 / (nu1 - 1.0) +
                    (1.0 - as) * (1.0 - as) * nu2 / (nu2 - 1.0));
      const double ex2 = 4.0 * (a * as * as * nu1 / (nu1 - 2.0) +
                                (1.0 - a) * (1.0 - as) * (1.0 - as) * nu2 / (nu2 - 2.0));
      base_var_ = ex2 - base_mean_ * base_mean_;
      break;
    }
  }
}

Distribution Distribution::standardized() const {
  if (!finite_var_) {
    throw std::domain_error("standardized: " + name() + " has no finite variance");
  }
  Distribution d = *this;
  d.standardized_ = true;
  d.loc_ = base_mean_;
  d.scale_ = std::sqrt(base_var_);
  // Standardization must be exact to ~1e-10 by construction.
  return d;
}

std::string Distribution::name() const {
  std::string base;
  switch (family_) {
    case DistFamily::normal: base = "normal"; break;
    case DistFamily::exponential: base = "exponential"; break;
    case DistFamily::student_t: base = "student-t"; break;
    case DistFamily::pareto: base = "pareto"; break;
    case DistFamily::gpd: base = "gpd"; break;
    case DistFamily::skewed_t: base = "skewed-t"; break;
    case DistFamily::ast: base = "ast"; break;
  }
  return standardized_ ? base + "(standardized)" : base;
}

bool Distribution::has_finite_mean() const { return finite_mean_; }
bool Distribution::has_finite_variance() const { return finite_var_; }

double Distribution::max_finite_moment_order() const {
  switch (family_) {
    case DistFamily::normal:
    case DistFamily::exponential:
      return kInf;
    case DistFamily::student_t:
    case DistFamily::skewed_t:
      return p1_;
    case DistFamily::pareto:
      return p1_;
    case DistFamily::gpd:
      return p2_ > kGpdShapeEps ? 1.0 / p2_ : kInf;
    case DistFamily::ast:
      return std::min(p2_, p3_);
  }
  return kInf;
}

double Distribution::mean() const {
  if (!finite_mean_) throw std::domain_error("mean: not finite for " + name());
  return standardized_ ? 0.0 : base_mean_;
}

double Distribution::variance() const {
  if (!finite_var_) throw std::domain_error("variance: not finite for " + name());
  return standardized_ ? 1.0 : base_var_;
}

// ---------------------------------------------------------------------------
// Base-family implementations
// ---------------------------------------------------------------------------

double Distribution::base_pdf(double x) const {
  switch (family_) {
    case DistFamily::normal:
      return norm_pdf((x - p1_) / p2_) / p2_;
    case DistFamily::exponential:
      return x < 0.0 ? 0.0 : p1_ * std::exp(-p1_ * x);
    case DistFamily::student_t:
      return student_t_pdf(x, p1_);
    case DistFamily::pareto:
      return x < 1.0 ? 0.0 : p1_ * std::pow(x, -p1_ - 1.0);
    case DistFamily::gpd: {
      const double beta = p1_, xi = p2_;
      if (x < 0.0) return 0.0;
      if (std::fabs(xi) < kGpdShapeEps) return std::exp(-x / beta) / beta;
      const double t = 1.0 + xi * x / beta;
      if (t <= 0.0) return 0.0;
      return std::exp((-1.0 / xi - 1.0) * std::log(t)) / beta;
    }
    case DistFamily::skewed_t: {
      const double nu = p1_, g = p2_;
      const double c = 2.0 / (1.0 / g + g);
      return c * (x <= 0.0 ? student_t_pdf(g * x, nu) : student_t_pdf(x / g, nu));
    }
    case DistFamily::ast: {
      const double nu1 = p2_, nu2 = p3_, a = p1_, as = ast_alpha_star_;
      if (x <= 0.0) {
        const double u = x / (2.0 * as);
        return a / as * t_kconst(nu1) *
               std::exp(-0.5 * (nu1 + 1.0) * std::log1p(u * u / nu1));
      }
      const double u = x / (2.0 * (1.0 - as));
      return (1.0 - a) / (1.0 - as) * t_kconst(nu2) *
             std::exp(-0.5 * (nu2 + 1.0) * std::log1p(u * u / nu2));
    }
  }
  return kNaN;
}

double Distribution::base_cdf(double x) const {
  switch (family_) {
    case DistFamily::normal:
      return norm_cdf((x - p1_) / p2_);
    case DistFamily::exponential:
      return x < 0.0 ? 0.0 : -std::expm1(-p1_ * x);
    case DistFamily::student_t:
      return student_t_cdf(x, p1_);
    case DistFamily::pareto:
      return x < 1.0 ? 0.0 : 1.0 - std::pow(x, -p1_);
    case DistFamily::gpd: {
      const double beta = p1_, xi = p2_;
      if (x <= 0.0) return 0.0;
      if (std::fabs(xi) < kGpdShapeEps) return -std::expm1(-x / beta);
      const double t = 1.0 + xi * x / beta;
      if (t <= 0.0) return 1.0;  // above the upper endpoint when xi < 0
      return 1.0 - std::exp(-std::log(t) / xi);
    }
    case DistFamily::skewed_t: {
      const double nu = p1_, g = p2_;
      const double g2 = g * g;
      if (x <= 0.0) return 2.0 / (1.0 + g2) * student_t_cdf(g * x, nu);
      return 1.0 / (1.0 + g2) +
             2.0 * g2 / (1.0 + g2) * (student_t_cdf(x / g, nu) - 0.5);
    }
    case DistFamily::ast: {
      const double a = p1_, nu1 = p2_, nu2 = p3_, as = ast_alpha_star_;
      if (x <= 0.0) return 2.0 * a * student_t_cdf(x / (2.0 * as), nu1);
      return a + 2.0 * (1.0 - a) * (student_t_cdf(x / (2.0 * (1.0 - as)), nu2) - 0.5);
    }
  }
  return kNaN;
}

double Distribution::base_quantile(double p) const {
  switch (family_) {
    case DistFamily::normal:
      return p1_ + p2_ * norm_quantile(p);
    case DistFamily::exponential:
      return -std::log1p(-p) / p1_;
    case DistFamily::student_t:
      return student_t_quantile(p, p1_);
    case DistFamily::pareto:
      return std::pow(1.0 - p, -1.0 / p1_);
    case DistFamily::gpd: {
      const double beta = p1_, xi = p2_;
      if (std::fabs(xi) < kGpdShapeEps) return -beta * std::log1p(-p);
      return beta * std::expm1(-xi * std::log1p(-p)) / xi;
    }
    case DistFamily::skewed_t: {
      const double nu = p1_, g = p2_;
      const double g2 = g * g;
      const double split = 1.0 / (1.0 + g2);
      if (p <= split) return student_t_quantile(p * (1.0 + g2) / 2.0, nu) / g;
      return g * student_t_quantile(0.5 + (p - split) * (1.0 + g2) / (2.0 * g2), nu);
    }
    case DistFamily::ast: {
      const double a = p1_, nu1 = p2_, nu2 = p3_, as = ast_alpha_star_;
      if (p <= a) return 2.0 * as * student_t_quantile(p / (2.0 * a), nu1);
      return 2.0 * (1.0 - as) *
             student_t_quantile(0.5 + (p - a) / (2.0 * (1.0 - a)), nu2);
    }
  }
  return kNaN;
}

double Distribution::base_partial_moment(double z) const {
  switch (family_) {
    case DistFamily::normal: {
      const double a = (z - p1_) / p2_;
      return p1_ * norm_cdf(a) - p2_ * norm_pdf(a);
    }
    case DistFamily::exponential: {
      if (z <= 0.0) return 0.0;
      const double lam = p1_;
      return 1.0 / lam - std::exp(-lam * z) * (z + 1.0 / lam);
    }
    case DistFamily::student_t: {
      const double nu = p1_;
      return -student_t_pdf(z, nu) * (nu + z * z) / (nu - 1.0);
    }
    case DistFamily::pareto: {
      const double a = p1_;
      if (z <= 1.0) return 0.0;
      return a / (a - 1.0) * (1.0 - std::pow(z, 1.0 - a));
    }
    case DistFamily::gpd: {
      const double beta = p1_, xi = p2_;
      if (z <= 0.0) return 0.0;
      if (std::fabs(xi) < kGpdShapeEps)
        return beta - std::exp(-z / beta) * (z + beta);
      const double t = 1.0 + xi * z / beta;
      if (t <= 0.0) return base_mean_;  // beyond the upper endpoint (xi < 0)
      const double sf = std::exp(-std::log(t) / xi);
      return beta / (1.0 - xi) - sf * (z + (beta + xi * z) / (1.0 - xi));
    }
    case DistFamily::skewed_t: {
      const double nu = p1_, g = p2_;
      const double f = base_pdf(z);
      if (z < 0.0) return -(nu / (g * g) + z * z) * f / (nu - 1.0);
      const double f0 = base_pdf(0.0);
      return -(nu * g * g + z * z) * f / (nu - 1.0) +
             nu / (nu - 1.0) * (g * g - 1.0 / (g * g)) * f0;
    }
    case DistFamily::ast: {
      const double nu1 = p2_, nu2 = p3_, as = ast_alpha_star_;
      const double f = base_pdf(z);
      if (z <= 0.0) {
        const double u = z / (2.0 * as);
        return -4.0 * as * as * nu1 / (nu1 - 1.0) * (1.0 + u * u / nu1) * f;
      }
      const double u = z / (2.0 * (1.0 - as));
      return base_mean_ - 4.0 * (1.0 - as) * (1.0 - as) * nu2 / (nu2 - 1.0) *
                              (1.0 + u * u / nu2) * f;
    }
  }
  return kNaN;
}

double Distribution::base_expectile_curve(double z) const {
  switch (family_) {
    case DistFamily::normal: {
      const double a = (z - p1_) / p2_;
      const double num = p2_ * norm_pdf(a) + (z - p1_) * norm_cdf(a);
      const double den = 2.0 * p2_ * norm_pdf(a) + (z - p1_) * (2.0 * norm_cdf(a) - 1.0);
      return num / den;
    }
    case DistFamily::exponential: {
      if (z <= 0.0) return 0.0;
      const double lam = p1_;
      const double e = std::exp(-lam * z);
      return (z - 1.0 / lam + e / lam) / (z - 1.0 / lam + 2.0 * e / lam);
    }
    case DistFamily::student_t: {
      const double nu = p1_;
      const double gz = student_t_pdf(z, nu);
      const double tz = student_t_cdf(z, nu);
      const double w = (nu + z * z) / (nu - 1.0) * gz;
      return (w + z * tz) / (2.0 * w + z * (2.0 * tz - 1.0));
    }
    case DistFamily::pareto: {
      if (z <= 1.0) return 0.0;
      const double a = p1_;
      const double fz = base_cdf(z);
      return (a * (1.0 - z) + z * fz) / (a * (1.0 - z) + z * (2.0 * fz - 1.0));
    }
    case DistFamily::gpd: {
      if (!finite_mean_) throw std::domain_error("expectile_curve: gpd needs shape < 1");
      if (z <= 0.0) return 0.0;
      const double beta = p1_, xi = p2_;
      const double hz = base_cdf(z);
      if (xi < 0.0 && 1.0 + xi * z / beta <= 0.0) return 1.0;
      const double num = z - (beta + xi * z) * hz;
      const double den = beta + z * (1.0 + xi) - 2.0 * (beta + xi * z) * hz;
      return num / den;
    }
    case DistFamily::skewed_t: {
      const double nu = p1_, g = p2_;
      const double fz = base_cdf(z);
      const double f = base_pdf(z);
      double core;
      if (z < 0.0) {
        core = z * fz + (nu / (g * g) + z * z) * f / (nu - 1.0);
      } else {
        const double f0 = base_pdf(0.0);
        core = z * fz + (nu * g * g + z * z) * f / (nu - 1.0) -
               nu / (nu - 1.0) * (g * g - 1.0 / (g * g)) * f0;
      }
      return core / (2.0 * core + base_mean_ - z);
    }
    case DistFamily::ast:
      // The AST curve is stated through its partial moment.
      return (z * base_cdf(z) - base_partial_moment(z)) /
             (2.0 * (z * base_cdf(z) - base_partial_moment(z)) + base_mean_ - z);
  }
  return kNaN;
}

double Distribution::base_support_lower() const {
  switch (family_) {
    case DistFamily::exponential:
    case DistFamily::gpd:
      return 0.0;
    case DistFamily::pareto:
      return 1.0;
    default:
      return -kInf;
  }
}

double Distribution::base_support_upper() const {
  if (family_ == DistFamily::gpd && p2_ < -kGpdShapeEps) return -p1_ / p2_;
  return kInf;
}

// ---------------------------------------------------------------------------
// Public surface: standardization wrapper
// ---------------------------------------------------------------------------

double Distribution::pdf(double x) const {
  return standardized_ ? scale_ * base_pdf(loc_ + scale_ * x) : base_pdf(x);
}

double Distribution::cdf(double x) const {
  return standardized_ ? base_cdf(loc_ + scale_ * x) : base_cdf(x);
}

double Distribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: p must lie in (0,1)");
  const double q = base_quantile(p);
  return standardized_ ? (q - loc_) / scale_ : q;
}

double Distribution::partial_moment(double z) const {
  if (!finite_mean_) throw std::domain_error("partial_moment: infinite mean for " + name());
  if (!standardized_) return base_partial_moment(z);
  const double y = loc_ + scale_ * z;
  return (base_partial_moment(y) - loc_ * base_cdf(y)) / scale_;
}

double Distribution::expectile_curve(double z) const {
  if (!finite_mean_) throw std::domain_error("expectile_curve: infinite mean for " + name());
  return standardized_ ? base_expectile_curve(loc_ + scale_ * z)
                       : base_expectile_curve(z);
}

double Distribution::expectile_curve_generic(double z) const {
  if (!finite_mean_) throw std::domain_error("expectile_curve: infinite mean for " + name());
  const double zf = z * cdf(z) - partial_moment(z);
  return zf / (2.0 * zf + mean() - z);
}

double Distribution::omega_ratio(double z) const {
  if (!finite_mean_) throw std::domain_error("omega_ratio: infinite mean for " + name());
  const double upside = mean() - partial_moment(z) - z * (1.0 - cdf(z));
  const double downside = z * cdf(z) - partial_moment(z);
  return upside / downside;
}

double Distribution::expectile(double tau) const {
  if (!(tau > 0.0 && tau < 1.0)) throw std::domain_error("expectile: tau must lie in (0,1)");
  if (!finite_mean_) throw std::domain_error("expectile: infinite mean for " + name());
  const double m = mean();
  double spread = finite_var_ ? std::sqrt(variance()) : 1.0 + std::fabs(m);
  double lo = m - spread;
  double hi = m + spread;
  const double slo = support_lower();
  const double shi = support_upper();
  auto curve = [&](double z) { return expectile_curve(z); };
  // Geometric bracket expansion, clamped to the support.
  for (int i = 0; i < 200 && curve(std::max(lo, slo)) > tau; ++i) {
    spread *= 2.0;
    lo = m - spread;
    if (lo < slo) {
      lo = slo;
      break;
    }
  }
  lo = std::max(lo, slo);
  spread = finite_var_ ? std::sqrt(variance()) : 1.0 + std::fabs(m);
  for (int i = 0; i < 200 && curve(std::min(hi, shi)) < tau; ++i) {
    spread *= 2.0;
    hi = m + spread;
    if (hi > shi) {
      hi = shi;
      break;
    }
  }
  hi = std::min(hi, shi);
  if (!(lo < hi)) throw std::runtime_error("expectile: bracketing failed");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (curve(mid) < tau) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-10) break;
  }
  return 0.5 * (lo + hi);
}

double Distribution::expected_shortfall(double level) const {
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("expected_shortfall: level must lie in (0,1)");
  if (!finite_mean_)
    throw std::domain_error("expected_shortfall: infinite mean for " + name());
  const double q = quantile(level);
  return (mean() - partial_moment(q)) / (1.0 - level);
}

double Distribution::sample_one(Rng& rng) const { return quantile(rng.uniform01()); }

std::vector<double> Distribution::sample(std::size_t n, Rng& rng) const {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sample_one(rng);
  return out;
}

double Distribution::support_lower() const {
  const double lo = base_support_lower();
  return standardized_ ? (lo - loc_) / scale_ : lo;
}

double Distribution::support_upper() const {
  const double hi = base_support_upper();
  return standardized_ ? (hi - loc_) / scale_ : hi;
}

}  // namespace riskbt
