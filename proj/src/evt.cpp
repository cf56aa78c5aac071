#include "riskbt/evt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace riskbt {

namespace {

constexpr double kShapeEps = 1e-8;

// Profile log-likelihood in t = xi/beta: with s(t) = mean log(1 + t y),
//   l*(t) = -n log(s(t)/t) - n (1 + s(t)),  t != 0,
//   l*(0) = -n log(mean y) - n              (exponential limit).
double profile_ll(std::span<const double> y, double t) {
  const std::size_t n = y.size();
  double s = 0.0;
  if (std::fabs(t) < 1e-12) {
    double m = 0.0;
    for (double v : y) m += v;
    m /= static_cast<double>(n);
    return -static_cast<double>(n) * (std::log(m) + 1.0);
  }
  for (double v : y) {
    const double a = t * v;
    if (a <= -1.0) return -1e100;
    s += std::log1p(a);
  }
  s /= static_cast<double>(n);
  if (!(s / t > 0.0)) return -1e100;
  return -static_cast<double>(n) * (std::log(s / t) + 1.0 + s);
}

}  // namespace

GpdFit gpd_fit_mle(std::span<const double> excesses) {
  const std::size_t n = excesses.size();
  if (n < 10) throw std::invalid_argument("gpd_fit_mle: need at least 10 excesses");
  double ymax = 0.0, ysum = 0.0;
  for (double v : excesses) {
    if (!(v > 0.0)) throw std::invalid_argument("gpd_fit_mle: excesses must be positive");
    ymax = std::max(ymax, v);
    ysum += v;
  }
  const double ymean = ysum / static_cast<double>(n);

  // Coarse grid in t = xi/beta over (-1/ymax, +large), then golden-section
  // refinement around the best candidate.
  std::vector<double> grid;
  grid.push_back(0.0);
  for (int i = 0; i <= 60; ++i) {
    const double mag = std::pow(10.0, -4.0 + 6.0 * i / 60.0);  // 1e-4 .. 1e2
    grid.push_back(mag / ymean);
    const double tneg = -mag / ymean;
    if (tneg > -1.0 / ymax) grid.push_back(tneg);
  }
  for (int i = 1; i <= 20; ++i) {
    grid.push_back(-static_cast<double>(i) / 21.0 / ymax);
  }
  std::sort(grid.begin(), grid.end());
  double tbest = 0.0, lbest = -1e200;
  for (double t : grid) {
    const double l = profile_ll(excesses, t);
    if (l > lbest) {
      lbest = l;
      tbest = t;
    }
  }
  // Bracket around the grid optimum and refine.
  auto it = std::lower_bound(grid.begin(), grid.end(), tbest);
  double lo = it == grid.begin() ? tbest - 1.0 / ymean : *(it - 1);
  double hi = (it + 1) == grid.end() ? tbest + 1.0 / ymean : *(it + 1);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = profile_ll(excesses, x1), f2 = profile_ll(excesses, x2);
  for (int iter = 0; iter < 120; ++iter) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = profile_ll(excesses, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = profile_ll(excesses, x1);
    }
    if (b - a < 1e-12 * (1.0 + std::fabs(a))) break;
  }
  const double topt = f1 > f2 ? x1 : x2;
  const double lopt = std::max(f1, f2);

  GpdFit fit;
  fit.n = n;
  fit.converged = lopt > -1e100;
  if (std::fabs(topt) < 1e-10 / ymean) {
    fit.xi = 0.0;
    fit.beta = ymean;
  } else {
    double s = 0.0;
    for (double v : excesses) s += std::log1p(topt * v);
    s /= static_cast<double>(n);
    fit.xi = s;
    fit.beta = s / topt;
  }
  if (!(fit.beta > 0.0)) {
    fit.converged = false;
    fit.beta = ymean;
    fit.xi = 0.0;
  }
  const double xp1 = 1.0 + fit.xi;
  fit.se_xi = xp1 / std::sqrt(static_cast<double>(n));
  fit.se_beta = fit.beta * std::sqrt(2.0 * xp1 / static_cast<double>(n));
  return fit;
}

std::size_t default_tail_count(std::size_t n) {
  if (n == 500) return 60;
  const std::size_t k = static_cast<std::size_t>(0.12 * static_cast<double>(n));
  return std::max<std::size_t>(k, 10);
}

EvtFit evt_tail_fit(std::span<const double> sample, std::size_t k) {
  const std::size_t n = sample.size();
  if (k + 1 > n) throw std::invalid_argument("evt_tail_fit: k < n required");
  std::vector<double> top(k + 1);
  std::partial_sort_copy(sample.begin(), sample.end(), top.begin(), top.end(),
                         std::greater<double>());
  const double u = top[k];  // (k+1)-th descending order statistic
  std::vector<double> excesses;
  excesses.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double e = top[i] - u;
    if (e > 0.0) excesses.push_back(e);
  }
  EvtFit fit;
  fit.threshold = u;
  fit.k = k;
  fit.n = n;
  fit.tail_fraction = static_cast<double>(k) / static_cast<double>(n);
  fit.gpd = gpd_fit_mle(excesses);
  return fit;
}

double evt_var(const EvtFit& fit, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("evt_var: alpha in (0,1)");
  // Tail-probability convention: the exceedance probability at level alpha
  // close to one is (1 - alpha).
  const double ratio =
      static_cast<double>(fit.k) / ((1.0 - alpha) * static_cast<double>(fit.n));
  const double xi = fit.gpd.xi;
  const double beta = fit.gpd.beta;
  if (std::fabs(xi) < kShapeEps) return fit.threshold + beta * std::log(ratio);
  return fit.threshold + beta / xi * (std::pow(ratio, xi) - 1.0);
}

double evt_es(const EvtFit& fit, double alpha) {
  const double xi = fit.gpd.xi;
  if (!(xi < 1.0)) throw std::runtime_error("evt_es: shape >= 1, tail mean diverges");
  const double v = evt_var(fit, alpha);
  return (v + fit.gpd.beta - xi * fit.threshold) / (1.0 - xi);
}

EvtExpectile evt_expectile(const EvtFit& fit, std::span<const double> sample,
                           double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::domain_error("evt_expectile: tau in (0,1)");
  const double xi = fit.gpd.xi;
  if (!(xi < 1.0)) throw std::runtime_error("evt_expectile: shape >= 1, mean diverges");
  EvtExpectile out;
  out.shape_warning = xi > 0.9;

  const double beta = fit.gpd.beta;
  const double u = fit.threshold;
  const double n = static_cast<double>(fit.n);
  const double kf = static_cast<double>(fit.k) / n;
  double zbar_u = 0.0;
  for (double z : sample) {
    if (z <= u) zbar_u += z;
  }
  zbar_u /= n;
  const double c = zbar_u + kf * (u + beta / (1.0 - xi));

  auto ghat = [&](double z) {
    const double w = (z - u) / beta;
    double pow_inv, pow_inv_p1;  // A^{-1/xi} and A^{-1/xi + 1}
    if (std::fabs(xi) < kShapeEps) {
      pow_inv = std::exp(-w);
      pow_inv_p1 = pow_inv;
    } else {
      const double a = 1.0 + xi * w;
      if (a <= 0.0) return 1.0;  // beyond the bounded upper endpoint
      pow_inv = std::pow(a, -1.0 / xi);
      pow_inv_p1 = std::pow(a, -1.0 / xi + 1.0);
    }
    const double num = kf * beta / (1.0 - xi) * pow_inv_p1;
    const double den =
        z + kf * pow_inv * (xi / (1.0 - xi) * (z - u) + beta / (1.0 - xi) - u) - c;
    const double omega = num / den;
    return 1.0 / (1.0 + omega);
  };

  // The estimated curve must be increasing above u for the inversion to be
  // meaningful; otherwise fall back to the empirical estimator.
  const double g_at_u = ghat(u * (1.0 + 1e-12) + 1e-12);
  bool monotone = true;
  {
    double prev = g_at_u;
    double hi_probe = u + 20.0 * beta / std::max(1.0 - xi, 0.05);
    for (int i = 1; i <= 64; ++i) {
      const double z = u + (hi_probe - u) * i / 64.0;
      const double g = ghat(z);
      if (g < prev - 1e-12) {
        monotone = false;
        break;
      }
      prev = g;
    }
  }
  if (!monotone || g_at_u >= tau) {
    out.used_empirical_fallback = true;
    out.value = empirical_expectile(sample, tau);
    return out;
  }

  double lo = u;
  double hi = u + beta;
  for (int i = 0; i < 400 && ghat(hi) < tau; ++i) hi = u + 2.0 * (hi - u);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ghat(mid) < tau) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-10) break;
  }
  out.value = 0.5 * (lo + hi);
  return out;
}

RiskEstimate evt_risk(std::span<const double> residuals, Functional functional,
                      double level, std::size_t k) {
  const EvtFit fit = evt_tail_fit(residuals, k);
  RiskEstimate out;
  switch (functional) {
    case Functional::var:
      out.r1 = evt_var(fit, level);
      break;
    case Functional::expectile:
      out.r1 = evt_expectile(fit, residuals, level).value;
      break;
    case Functional::var_es:
      out.r1 = evt_var(fit, level);
      out.r2 = evt_es(fit, level);
      break;
  }
  return out;
}

}  // namespace riskbt
