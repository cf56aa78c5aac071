#include "riskbt/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace riskbt {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;

// erfc via W. J. Cody's rational approximations (SPECFUN), accurate to
// ~1e-16 relative over the whole range.
double erfc_cody(double x) {
  const double ax = std::fabs(x);
  double result;
  if (ax < 0.46875) {
    // erf on [0, 0.46875]
    static const double a[5] = {3.16112374387056560e+00, 1.13864154151050156e+02,
                                3.77485237685302021e+02, 3.20937758913846947e+03,
                                1.85777706184603153e-01};
    static const double b[4] = {2.36012909523441209e+01, 2.44024637934444173e+02,
                                1.28261652607737228e+03, 2.84423683343917062e+03};
    const double z = x * x;
    double num = a[4] * z;
    double den = z;
    for (int i = 0; i < 3; ++i) {
      num = (num + a[i]) * z;
      den = (den + b[i]) * z;
    }
    const double erf_val = x * (num + a[3]) / (den + b[3]);
    return 1.0 - erf_val;
  }
  if (ax < 4.0) {
    static const double c[9] = {5.64188496988670089e-01, 8.88314979438837594e+00,
                                6.61191906371416295e+01, 2.98635138197400131e+02,
                                8.81952221241769090e+02, 1.71204761263407058e+03,
                                2.05107837782607147e+03, 1.23033935479799725e+03,
                                2.15311535474403846e-08};
    static const double d[8] = {1.57449261107098347e+01, 1.17693950891312499e+02,
                                5.37181101862009858e+02, 1.62138957456669019e+03,
                                3.29079923573345963e+03, 4.36261909014324716e+03,
                                3.43936767414372164e+03, 1.23033935480374942e+03};
    double num = c[8] * ax;
    double den = ax;
    for (int i = 0; i < 7; ++i) {
      num = (num + c[i]) * ax;
      den = (den + d[i]) * ax;
    }
    result = (num + c[7]) / (den + d[7]);
    const double z = std::floor(ax * 16.0) / 16.0;
    const double del = (ax - z) * (ax + z);
    result *= std::exp(-z * z) * std::exp(-del);
  } else {
    static const double p[6] = {3.05326634961232344e-01, 3.60344899949804439e-01,
                                1.25781726111229246e-01, 1.60837851487422766e-02,
                                6.58749161529837803e-04, 1.63153871373020978e-02};
    static const double q[5] = {2.56852019228982242e+00, 1.87295284992346047e+00,
                                5.27905102951428412e-01, 6.05183413124413191e-02,
                                2.33520497626869185e-03};
    const double z = 1.0 / (ax * ax);
    double num = p[5] * z;
    double den = z;
    for (int i = 0; i < 4; ++i) {
      num = (num + p[i]) * z;
      den = (den + q[i]) * z;
    }
    result = z * (num + p[4]) / (den + q[4]);
    result = (0.56418958354775628695 - result) / ax;  // 1/sqrt(pi)
    const double zz = std::floor(ax * 16.0) / 16.0;
    const double del = (ax - zz) * (ax + zz);
    result *= std::exp(-zz * zz) * std::exp(-del);
  }
  return x < 0.0 ? 2.0 - result : result;
}

// Acklam's rational approximation for the inverse normal CDF,
// polished below with one Halley step.
double norm_quantile_approx(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Continued fraction for the incomplete beta (Lentz's method).
double inc_beta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * erfc_cody(-x / kSqrt2); }

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("norm_quantile: p must lie in (0,1)");
  }
  double x = norm_quantile_approx(p);
  // One Halley refinement against the high-accuracy CDF.
  const double e = norm_cdf(x) - p;
  const double u = e / norm_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double log_gamma(double x) {
  // Lanczos approximation, g = 7, 9 coefficients.
  static const double coef[9] = {0.99999999999980993,  676.5203681218851,
                                 -1259.1392167224028,  771.32342877765313,
                                 -176.61502916214059,  12.507343278686905,
                                 -0.13857109526572012, 9.9843695780195716e-6,
                                 1.5056327351493116e-7};
  if (!(x > 0.0)) throw std::domain_error("log_gamma: x must be positive");
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) -
           log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double s = coef[0];
  for (int i = 1; i < 9; ++i) s += coef[i] / (z + i);
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(s);
}

double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::domain_error("reg_inc_beta: a,b > 0 required");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double lbeta = log_beta(a, b);
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * inc_beta_cf(a, b, x) / a;
  }
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - lbeta) *
                   inc_beta_cf(b, a, 1.0 - x) / b;
}

double reg_inc_gamma(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("reg_inc_gamma: a > 0 required");
  if (x <= 0.0) return 0.0;
  const double lg = log_gamma(a);
  if (x < a + 1.0) {
    // Series representation.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Continued fraction for Q(a,x), then P = 1 - Q.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

double chi2_cdf(double x, double k) {
  if (x <= 0.0) return 0.0;
  return reg_inc_gamma(0.5 * k, 0.5 * x);
}

double student_t_pdf(double x, double nu) {
  const double lk = log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) -
                    0.5 * std::log(nu * std::numbers::pi);
  return std::exp(lk - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

double student_t_cdf(double x, double nu) {
  if (x == 0.0) return 0.5;
  const double t2 = x * x;
  // I_{nu/(nu+x^2)}(nu/2, 1/2) is the two-sided tail probability.
  const double p = 0.5 * reg_inc_beta(0.5 * nu, 0.5, nu / (nu + t2));
  return x > 0.0 ? 1.0 - p : p;
}

double student_t_quantile(double p, double nu) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("student_t_quantile: p must lie in (0,1)");
  }
  if (p == 0.5) return 0.0;
  // Start from the normal quantile with a Cornish-Fisher style correction,
  // then polish with safeguarded Newton on the CDF.
  const double z = norm_quantile(p);
  double x = z;
  if (std::isfinite(nu) && nu < 300.0) {
    const double g1 = (z * z * z + z) / (4.0 * nu);
    const double g2 = (5.0 * std::pow(z, 5) + 16.0 * z * z * z + 3.0 * z) /
                      (96.0 * nu * nu);
    x = z + g1 + g2;
  }
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    const double f = student_t_cdf(x, nu) - p;
    if (f > 0.0) {
      hi = std::min(hi, x);
    } else if (f < 0.0) {
      lo = std::max(lo, x);
    } else {
      return x;
    }
    const double dens = student_t_pdf(x, nu);
    double step = f / dens;
    double xn = x - step;
    if (!(xn > lo && xn < hi) || !std::isfinite(xn)) {
      if (std::isfinite(lo) && std::isfinite(hi)) {
        xn = 0.5 * (lo + hi);
      } else if (std::isfinite(lo)) {
        xn = lo + 1.0 + std::fabs(lo);
      } else {
        xn = hi - 1.0 - std::fabs(hi);
      }
    }
    if (std::fabs(xn - x) <= 1e-14 * (1.0 + std::fabs(x))) return xn;
    x = xn;
  }
  return x;
}

}  // namespace riskbt
