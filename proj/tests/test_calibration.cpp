#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "riskbt/calibration.hpp"
#include "riskbt/rng.hpp"
#include "riskbt/special.hpp"

using namespace riskbt;

namespace {

std::vector<IdentValue> scalar_series(const std::vector<double>& v) {
  std::vector<IdentValue> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = {v[i], 0.0};
  return out;
}

TestFunctionSeries ones(std::size_t n) {
  TestFunctionSeries h(n, 1, 1);
  for (std::size_t t = 0; t < n; ++t) h.at(t, 0, 0) = 1.0;
  return h;
}

}  // namespace

TEST_CASE("T1 with q=1 and h=1 equals n meanV^2 / mean(V^2) exactly") {
  Rng rng(10);
  std::vector<double> v(400);
  for (auto& x : v) x = rng.uniform01() - 0.45;
  const auto rep = two_sided_cct(scalar_series(v), 1, ones(v.size()));
  double m = 0.0, m2 = 0.0;
  for (double x : v) {
    m += x;
    m2 += x * x;
  }
  m /= v.size();
  m2 /= v.size();
  CHECK(rep.statistic ==
        doctest::Approx(v.size() * m * m / m2).epsilon(1e-12));
  CHECK(rep.df == 1);
  CHECK(rep.p_value == doctest::Approx(1.0 - chi2_cdf(rep.statistic, 1)).epsilon(1e-14));
}

TEST_CASE("all-zero weighted identification terms give a degenerate report") {
  std::vector<double> v(100, 0.0);
  const auto rep = two_sided_cct(scalar_series(v), 1, ones(v.size()));
  CHECK(rep.degenerate);
  CHECK(std::isnan(rep.p_value));  // degenerate reports never carry a p-value
}

TEST_CASE("one-sided q=1 reduces to the classical z-test") {
  Rng rng(3);
  std::vector<double> v(300);
  for (auto& x : v) x = rng.uniform01() - 0.6;
  const auto rep = one_sided_cct(scalar_series(v), 1, ones(v.size()),
                                 CalibrationSide::super);
  double m = 0.0, m2 = 0.0;
  for (double x : v) {
    m += x;
    m2 += x * x;
  }
  m /= v.size();
  m2 /= v.size();
  const double z = std::sqrt(static_cast<double>(v.size())) * m / std::sqrt(m2);
  CHECK(rep.component_statistics[0] == doctest::Approx(z).epsilon(1e-12));
  CHECK(rep.per_component_p[0] == doctest::Approx(norm_cdf(z)).epsilon(1e-12));
  CHECK(rep.p_value == doctest::Approx(norm_cdf(z)).epsilon(1e-12));

  const auto sub = one_sided_cct(scalar_series(v), 1, ones(v.size()),
                                 CalibrationSide::sub);
  CHECK(sub.per_component_p[0] == doctest::Approx(1.0 - norm_cdf(z)).epsilon(1e-12));
}

TEST_CASE("two-sided p equals twice the smaller one-sided p for q=1") {
  Rng rng(8);
  std::vector<double> v(500);
  for (auto& x : v) x = norm_quantile(rng.uniform01()) + 0.05;
  const auto series = scalar_series(v);
  const auto two = two_sided_cct(series, 1, ones(v.size()));
  const auto sup = one_sided_cct(series, 1, ones(v.size()), CalibrationSide::super);
  const auto sub = one_sided_cct(series, 1, ones(v.size()), CalibrationSide::sub);
  CHECK(two.p_value ==
        doctest::Approx(2.0 * std::min(sup.p_value, sub.p_value)).epsilon(1e-9));
}

TEST_CASE("Hommel and Bonferroni combinations: worked q=2 example") {
  // Construct a 2-component series whose componentwise p-values we control
  // is fiddly; check the combination rules on the formula level instead.
  // pi = (0.01, 0.5), q=2, C_2 = 1.5:
  //   Hommel adjusted = q C_q min(pi_(m)/m) = 3 * min(0.01, 0.25) = 0.03
  //   Bonferroni adjusted = q pi_(1) = 0.02
  // Both reject at eta = 0.05.
  // The library computes these inside one_sided_cct; replicate via a tiny
  // synthetic series engineered to produce those p-values is unstable, so
  // exercise the public reduction q=1 and check monotonicity for q=2 here.
  Rng rng(4);
  const std::size_t n = 400;
  std::vector<IdentValue> v(n);
  for (auto& val : v) {
    val = {norm_quantile(rng.uniform01()) - 0.15, norm_quantile(rng.uniform01())};
  }
  TestFunctionSeries h(n, 2, 2);
  for (std::size_t t = 0; t < n; ++t) {
    h.at(t, 0, 0) = 1.0;
    h.at(t, 1, 1) = 1.0;
  }
  const auto rep = one_sided_cct(v, 2, h, CalibrationSide::super);
  REQUIRE(rep.per_component_p.size() == 2);
  std::vector<double> pi = rep.per_component_p;
  std::sort(pi.begin(), pi.end());
  const double hommel = std::min(1.0, 2.0 * 1.5 * std::min(pi[0] / 1.0, pi[1] / 2.0));
  const double bonf = std::min(1.0, 2.0 * pi[0]);
  CHECK(rep.combined_p_hommel == doctest::Approx(hommel).epsilon(1e-12));
  CHECK(rep.combined_p_bonferroni == doctest::Approx(bonf).epsilon(1e-12));
}

TEST_CASE("one-sided tests reject negative test functions") {
  Rng rng(5);
  const std::size_t n = 100;
  std::vector<IdentValue> v(n, {0.1, 0.0});
  TestFunctionSeries h(n, 1, 1);
  for (std::size_t t = 0; t < n; ++t) h.at(t, 0, 0) = -1.0;
  CHECK_THROWS_AS(one_sided_cct(v, 1, h, CalibrationSide::super),
                  std::invalid_argument);
}

TEST_CASE("average calibration test: lag-0 HAC is the classical z-test") {
  Rng rng(21);
  std::vector<double> v(200);
  for (auto& x : v) x = norm_quantile(rng.uniform01());
  const auto rep = average_calibration_test(scalar_series(v), 1, HacPolicy::none());
  double m = 0.0;
  for (double x : v) m += x;
  m /= v.size();
  double s2 = 0.0;
  for (double x : v) s2 += (x - m) * (x - m);
  s2 /= v.size();
  const double z = std::sqrt(static_cast<double>(v.size())) * m / std::sqrt(s2);
  CHECK(rep.statistic == doctest::Approx(z).epsilon(1e-12));
  CHECK(rep.p_value ==
        doctest::Approx(2.0 * (1.0 - norm_cdf(std::fabs(z)))).epsilon(1e-12));
}

TEST_CASE("average calibration: all-zero series is degenerate") {
  std::vector<double> v(50, 0.0);
  const auto rep = average_calibration_test(scalar_series(v), 1, HacPolicy::none());
  CHECK(rep.degenerate);
  CHECK(std::isnan(rep.p_value));
}

TEST_CASE("exact binomial test") {
  // super side: direct summation oracle
  double tail = 0.0;
  auto pmf = [](int n, int j, double p) {
    return std::exp(log_gamma(n + 1.0) - log_gamma(j + 1.0) - log_gamma(n - j + 1.0) +
                    j * std::log(p) + (n - j) * std::log1p(-p));
  };
  for (int j = 5; j <= 250; ++j) tail += pmf(250, j, 0.01);
  const auto sup = binomial_var_test(5, 250, 0.99, BinomialSide::super);
  CHECK(sup.p_value == doctest::Approx(tail).epsilon(1e-10));

  const auto sub = binomial_var_test(0, 250, 0.99, BinomialSide::sub);
  CHECK(sub.p_value == doctest::Approx(std::pow(0.99, 250)).epsilon(1e-12));

  // observed near the expected count 2.5: two-sided p is large
  CHECK(binomial_var_test(2, 250, 0.99, BinomialSide::two_sided).p_value > 0.5);
  CHECK(binomial_var_test(3, 250, 0.99, BinomialSide::two_sided).p_value > 0.5);
  // two-sided p-values are minimal-likelihood sums and stay in [0,1]
  for (int k : {0, 1, 4, 9, 30}) {
    const double p = binomial_var_test(k, 250, 0.99, BinomialSide::two_sided).p_value;
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("McNeil-Frey statistic and its conditional-calibration form") {
  Rng rng(1234);
  const std::size_t n = 5000;
  const double nu = 0.975;
  std::vector<double> x(n), r1(n), r2(n), sigma(n);
  const Distribution z = Distribution::normal(0.0, 1.0);
  const double q = z.quantile(nu);
  const double es = z.expected_shortfall(nu);
  for (std::size_t t = 0; t < n; ++t) {
    sigma[t] = 0.8 + 0.4 * rng.uniform01();
    x[t] = sigma[t] * norm_quantile(rng.uniform01());
    r1[t] = sigma[t] * q;
    r2[t] = sigma[t] * es;
  }
  const auto stat = mcneil_frey_statistic(x, r1, r2, sigma, nu);
  CHECK(stat.exceedances > 0);
  // T4 is close to its hV-average approximation: the gap is driven by
  // #exceedances/n vs (1-nu).
  CHECK(std::fabs(stat.statistic - stat.cct_approximation) <
        0.05 * std::max(1.0, std::fabs(stat.statistic)) + 0.05);

  // r2 = x at every exceedance => zero
  std::vector<double> r2x = x;
  for (std::size_t t = 0; t < n; ++t) {
    if (!(x[t] > r1[t])) r2x[t] = r1[t] + 1.0;
  }
  const auto zero = mcneil_frey_statistic(x, r1, r2x, sigma, nu);
  CHECK(zero.statistic == doctest::Approx(0.0).epsilon(1e-12));

  // zero exceedances is an error
  std::vector<double> huge(n, 1e9);
  CHECK_THROWS_AS(mcneil_frey_statistic(x, huge, r2, sigma, nu), std::runtime_error);
}

TEST_CASE("Monte-Carlo size of the simple two-sided CCT (small run)") {
  // V_t = 1 - alpha - 1{u > alpha} with u uniform: exactly calibrated.
  const double alpha = 0.95;
  int rejections = 0;
  const int reps = 300;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(9000 + rep);
    std::vector<double> v(800);
    for (auto& val : v) val = (1.0 - alpha) - (rng.uniform01() > alpha ? 1.0 : 0.0);
    const auto report = two_sided_cct(scalar_series(v), 1, ones(v.size()));
    if (!report.degenerate && report.p_value <= 0.05) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / reps;
  CHECK(rate >= 0.01);
  CHECK(rate <= 0.12);
}

TEST_CASE("test-function builders produce the documented shapes") {
  const std::size_t n = 50;
  std::vector<double> r1(n, 2.0), r2(n, 3.0), sigma(n, 0.5);
  std::vector<IdentValue> v(n, {0.1, -0.2});
  TestFunctionInputs in;
  in.forecast_r1 = r1;
  in.forecast_r2 = r2;
  in.sigma_hat = sigma;
  in.ident_values = v;
  in.level = 0.975;

  const auto var_std = build_test_functions({TestFunctionKind::var_standard, 1}, 1, n, in);
  CHECK(var_std.h.q() == 2);
  CHECK(var_std.h.at(0, 1, 0) == 2.0);

  const auto mf = build_test_functions({TestFunctionKind::mcneil_frey, 1}, 2, n, in);
  CHECK(mf.h.q() == 1);
  CHECK(mf.h.at(0, 0, 0) == doctest::Approx((3.0 - 2.0) / 0.025 / 0.5));
  CHECK(mf.h.at(0, 0, 1) == doctest::Approx(2.0));

  const auto blk = build_test_functions({TestFunctionKind::one_sided_block_diag, 1}, 2, n, in);
  CHECK(blk.h.q() == 4);
  CHECK(blk.h.at(0, 0, 0) == 1.0);
  CHECK(blk.h.at(0, 1, 0) == 2.0);
  CHECK(blk.h.at(0, 0, 1) == 0.0);
  CHECK(blk.h.at(0, 2, 1) == 1.0);
  CHECK(blk.h.at(0, 3, 1) == doctest::Approx(2.0));

  const auto dq = build_test_functions({TestFunctionKind::dynamic_quantile, 2}, 1, n, in);
  CHECK(dq.offset == 2);
  CHECK(dq.h.size() == n - 2);
  CHECK(dq.h.q() == 4);  // 1, V_{t-1}, V_{t-2}, r_t
  CHECK(dq.h.at(0, 1, 0) == doctest::Approx(0.1));
  CHECK(dq.h.at(0, 3, 0) == 2.0);
}
