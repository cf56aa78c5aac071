#include "riskbt/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "riskbt/linalg.hpp"
#include "riskbt/special.hpp"

namespace riskbt {

namespace {

std::vector<double> weighted_values(std::span<const IdentValue> v, int k,
                                    const TestFunctionSeries& h) {
  const std::size_t n = v.size();
  if (h.size() != n) throw std::invalid_argument("cct: series lengths differ");
  if (h.k() != k) throw std::invalid_argument("cct: test function k mismatch");
  const int q = h.q();
  std::vector<double> z(n * static_cast<std::size_t>(q), 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    for (int i = 0; i < q; ++i) {
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += h.at(t, i, j) * v[t][static_cast<std::size_t>(j)];
      z[t * q + i] = s;
    }
  }
  return z;
}

double hommel_combined(std::vector<double> pi) {
  std::sort(pi.begin(), pi.end());
  const int q = static_cast<int>(pi.size());
  double cq = 0.0;
  for (int r = 1; r <= q; ++r) cq += 1.0 / r;
  double best = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= q; ++m) best = std::min(best, pi[m - 1] / m);
  return std::min(1.0, q * cq * best);
}

double bonferroni_combined(std::vector<double> pi) {
  const double mn = *std::min_element(pi.begin(), pi.end());
  return std::min(1.0, pi.size() * mn);
}

double log_binom_coef(int n, int j) {
  return log_gamma(n + 1.0) - log_gamma(j + 1.0) - log_gamma(n - j + 1.0);
}

}  // namespace

BuiltTestFunctions build_test_functions(const TestFunctionSpec& spec, int k,
                                        std::size_t n,
                                        const TestFunctionInputs& in) {
  BuiltTestFunctions out;
  switch (spec.kind) {
    case TestFunctionKind::constant: {
      out.h = TestFunctionSeries(n, k, k);
      for (std::size_t t = 0; t < n; ++t)
        for (int i = 0; i < k; ++i) out.h.at(t, i, i) = 1.0;
      return out;
    }
    case TestFunctionKind::var_standard:
    case TestFunctionKind::var_abs: {
      if (k != 1) throw std::invalid_argument("test functions: VaR builder needs k=1");
      out.h = TestFunctionSeries(n, 2, 1);
      for (std::size_t t = 0; t < n; ++t) {
        out.h.at(t, 0, 0) = 1.0;
        const double r = in.forecast_r1[t];
        out.h.at(t, 1, 0) = spec.kind == TestFunctionKind::var_abs ? std::fabs(r) : r;
      }
      return out;
    }
    case TestFunctionKind::dynamic_quantile: {
      if (k != 1) throw std::invalid_argument("test functions: lagged-V builder needs k=1");
      const int p = spec.lags;
      if (p < 1 || static_cast<std::size_t>(p) >= n) {
        throw std::invalid_argument("test functions: bad lag count");
      }
      out.offset = static_cast<std::size_t>(p);
      const std::size_t m = n - out.offset;
      out.h = TestFunctionSeries(m, p + 2, 1);
      for (std::size_t t = 0; t < m; ++t) {
        out.h.at(t, 0, 0) = 1.0;
        for (int l = 1; l <= p; ++l) {
          out.h.at(t, l, 0) = in.ident_values[t + out.offset - l][0];
        }
        out.h.at(t, p + 1, 0) = in.forecast_r1[t + out.offset];
      }
      return out;
    }
    case TestFunctionKind::inverse_sigma: {
      if (k != 1) throw std::invalid_argument("test functions: inverse-sigma needs k=1");
      out.h = TestFunctionSeries(n, 1, 1);
      for (std::size_t t = 0; t < n; ++t) out.h.at(t, 0, 0) = 1.0 / in.sigma_hat[t];
      return out;
    }
    case TestFunctionKind::mcneil_frey: {
      if (k != 2) throw std::invalid_argument("test functions: McNeil-Frey needs k=2");
      out.h = TestFunctionSeries(n, 1, 2);
      for (std::size_t t = 0; t < n; ++t) {
        const double inv_sigma = 1.0 / in.sigma_hat[t];
        out.h.at(t, 0, 0) =
            inv_sigma * (in.forecast_r2[t] - in.forecast_r1[t]) / (1.0 - in.level);
        out.h.at(t, 0, 1) = inv_sigma;
      }
      return out;
    }
    case TestFunctionKind::one_sided_block_diag: {
      if (k != 2) throw std::invalid_argument("test functions: block builder needs k=2");
      out.h = TestFunctionSeries(n, 4, 2);
      for (std::size_t t = 0; t < n; ++t) {
        out.h.at(t, 0, 0) = 1.0;
        out.h.at(t, 1, 0) = std::fabs(in.forecast_r1[t]);
        out.h.at(t, 2, 1) = 1.0;
        out.h.at(t, 3, 1) = 1.0 / in.sigma_hat[t];
      }
      return out;
    }
  }
  throw std::invalid_argument("test functions: unknown builder");
}

CalibrationReport two_sided_cct(std::span<const IdentValue> values, int k,
                                const TestFunctionSeries& h) {
  const std::size_t n = values.size();
  const int q = h.q();
  if (n < static_cast<std::size_t>(q) + 1) {
    throw std::invalid_argument("two_sided_cct: need n >= q + 1");
  }
  CalibrationReport rep;
  rep.df = q;
  const std::vector<double> z = weighted_values(values, k, h);

  std::vector<double> zbar(q, 0.0);
  Matrix omega(q, q);
  for (std::size_t t = 0; t < n; ++t) {
    for (int i = 0; i < q; ++i) {
      zbar[i] += z[t * q + i];
      for (int j = i; j < q; ++j) omega(i, j) += z[t * q + i] * z[t * q + j];
    }
  }
  for (int i = 0; i < q; ++i) {
    zbar[i] /= static_cast<double>(n);
    for (int j = i; j < q; ++j) {
      omega(i, j) /= static_cast<double>(n);
      omega(j, i) = omega(i, j);
    }
  }

  const QuadFormResult qf = inverse_quadratic_form(omega, zbar);
  if (qf.degenerate) {
    rep.degenerate = true;
    rep.degeneracy_reason = "OmegaHat singular or ill-conditioned";
    rep.p_value = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.statistic = static_cast<double>(n) * qf.value;
  rep.p_value = 1.0 - chi2_cdf(rep.statistic, q);
  return rep;
}

CalibrationReport one_sided_cct(std::span<const IdentValue> values, int k,
                                const TestFunctionSeries& h, CalibrationSide side) {
  const std::size_t n = values.size();
  const int q = h.q();
  if (n < static_cast<std::size_t>(q) + 1) {
    throw std::invalid_argument("one_sided_cct: need n >= q + 1");
  }
  for (std::size_t t = 0; t < n; ++t)
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < k; ++j)
        if (h.at(t, i, j) < 0.0) {
          throw std::invalid_argument("one_sided_cct: test functions must be nonnegative");
        }

  CalibrationReport rep;
  rep.df = q;
  const std::vector<double> z = weighted_values(values, k, h);
  rep.component_statistics.resize(q);
  rep.per_component_p.resize(q);
  for (int i = 0; i < q; ++i) {
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      sum += z[t * q + i];
      sumsq += z[t * q + i] * z[t * q + i];
    }
    const double omega_ii = sumsq / static_cast<double>(n);
    if (!(omega_ii > 0.0)) {
      rep.degenerate = true;
      rep.degeneracy_reason = "component variance vanishes";
      rep.p_value = std::numeric_limits<double>::quiet_NaN();
      return rep;
    }
    const double t2 = sum / std::sqrt(static_cast<double>(n) * omega_ii);
    rep.component_statistics[i] = t2;
    rep.per_component_p[i] =
        side == CalibrationSide::super ? norm_cdf(t2) : 1.0 - norm_cdf(t2);
  }
  rep.statistic = *std::min_element(rep.component_statistics.begin(),
                                    rep.component_statistics.end());
  rep.combined_p_hommel = hommel_combined(rep.per_component_p);
  rep.combined_p_bonferroni = bonferroni_combined(rep.per_component_p);
  rep.p_value = rep.combined_p_hommel;
  return rep;
}

CalibrationReport average_calibration_test(std::span<const IdentValue> values,
                                           int k, HacPolicy hac) {
  const std::size_t n = values.size();
  if (n < 30) throw std::invalid_argument("average_calibration_test: need n >= 30");
  CalibrationReport rep;
  rep.df = k;
  if (k == 1) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) v[t] = values[t][0];
    const double lrv = hac_long_run_variance(v, hac);
    if (!(lrv > 0.0)) {
      rep.degenerate = true;
      rep.degeneracy_reason = "long-run variance vanishes";
      rep.p_value = std::numeric_limits<double>::quiet_NaN();
      return rep;
    }
    const double zstat = std::sqrt(static_cast<double>(n)) * mean(v) / std::sqrt(lrv);
    rep.statistic = zstat;
    rep.p_value = 2.0 * (1.0 - norm_cdf(std::fabs(zstat)));
    return rep;
  }
  // Vector case: HAC covariance with Bartlett weights, then a chi-square of
  // the squared standardized norm.
  int lags = hac.lags;
  if (lags < 0) lags = static_cast<int>(std::floor(std::cbrt(static_cast<double>(n))));
  std::vector<double> vbar(k, 0.0);
  for (std::size_t t = 0; t < n; ++t)
    for (int i = 0; i < k; ++i) vbar[i] += values[t][static_cast<std::size_t>(i)];
  for (int i = 0; i < k; ++i) vbar[i] /= static_cast<double>(n);
  Matrix sigma(k, k);
  for (int lag = 0; lag <= lags; ++lag) {
    const double w = lag == 0 ? 1.0 : 1.0 - static_cast<double>(lag) / (lags + 1.0);
    Matrix gamma(k, k);
    for (std::size_t t = lag; t < n; ++t) {
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          gamma(i, j) += (values[t][static_cast<std::size_t>(i)] - vbar[i]) *
                         (values[t - lag][static_cast<std::size_t>(j)] - vbar[j]);
        }
      }
    }
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        const double g = gamma(i, j) / static_cast<double>(n);
        sigma(i, j) += lag == 0 ? g : w * g;
        if (lag > 0) sigma(j, i) += w * g;
      }
    }
  }
  const QuadFormResult qf = inverse_quadratic_form(sigma, vbar);
  if (qf.degenerate) {
    rep.degenerate = true;
    rep.degeneracy_reason = "HAC covariance singular or ill-conditioned";
    rep.p_value = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.statistic = static_cast<double>(n) * qf.value;
  rep.p_value = 1.0 - chi2_cdf(rep.statistic, k);
  return rep;
}

CalibrationReport binomial_var_test(int exceedances, int n, double alpha,
                                    BinomialSide side) {
  if (exceedances < 0 || exceedances > n) {
    throw std::invalid_argument("binomial_var_test: count out of range");
  }
  const double p = 1.0 - alpha;
  const double logp = std::log(p);
  const double logq = std::log1p(-p);
  auto log_pmf = [&](int j) { return log_binom_coef(n, j) + j * logp + (n - j) * logq; };

  CalibrationReport rep;
  rep.statistic = exceedances;
  rep.df = 1;
  double pv = 0.0;
  switch (side) {
    case BinomialSide::super: {
      for (int j = exceedances; j <= n; ++j) pv += std::exp(log_pmf(j));
      break;
    }
    case BinomialSide::sub: {
      for (int j = 0; j <= exceedances; ++j) pv += std::exp(log_pmf(j));
      break;
    }
    case BinomialSide::two_sided: {
      const double lobs = log_pmf(exceedances);
      for (int j = 0; j <= n; ++j) {
        if (log_pmf(j) <= lobs + 1e-12) pv += std::exp(log_pmf(j));
      }
      break;
    }
  }
  rep.p_value = std::min(1.0, pv);
  return rep;
}

ExceedanceResidualStat mcneil_frey_statistic(std::span<const double> x,
                                             std::span<const double> r1,
                                             std::span<const double> r2,
                                             std::span<const double> sigma_hat,
                                             double nu) {
  const std::size_t n = x.size();
  if (r1.size() != n || r2.size() != n || sigma_hat.size() != n) {
    throw std::invalid_argument("mcneil_frey_statistic: series lengths differ");
  }
  ExceedanceResidualStat out;
  double sum = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (x[t] > r1[t]) {
      sum += (x[t] - r2[t]) / sigma_hat[t];
      ++out.exceedances;
    }
  }
  if (out.exceedances == 0) {
    throw std::runtime_error("mcneil_frey_statistic: no exceedances");
  }
  out.statistic = sum / out.exceedances;
  out.cct_approximation = sum / ((1.0 - nu) * static_cast<double>(n));
  return out;
}

}  // namespace riskbt
