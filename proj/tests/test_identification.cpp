#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "riskbt/identification.hpp"
#include "riskbt/rng.hpp"

using namespace riskbt;

TEST_CASE("VaR identification is plain indicator arithmetic") {
  const auto spec = IdentificationSpec::var(0.99);
  CHECK(identify(spec, 1.0, 2.0)[0] == doctest::Approx(-0.99));
  CHECK(identify(spec, 1.0, 0.5)[0] == doctest::Approx(0.01));
  // ties count as non-exceedances: the indicator is strict
  CHECK(identify(spec, 1.0, 1.0)[0] == doctest::Approx(0.01));
}

TEST_CASE("expectile identification is positively 1-homogeneous") {
  const auto spec = IdentificationSpec::expectile(0.9);
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    const double c = std::exp(2.0 * (rng.uniform01() - 0.5));
    const double r = 4.0 * (rng.uniform01() - 0.5);
    const double x = 4.0 * (rng.uniform01() - 0.5);
    CHECK(identify(spec, c * r, c * x)[0] ==
          doctest::Approx(c * identify(spec, r, x)[0]).epsilon(1e-12));
  }
}

TEST_CASE("(VaR,ES) identification components") {
  const auto spec = IdentificationSpec::var_es(0.975);
  CHECK(spec.dimension() == 2);
  const auto v = identify(spec, 2.0, 3.0, 4.0);  // exceedance
  CHECK(v[0] == doctest::Approx(1.0 - 0.975 - 1.0));
  CHECK(v[1] == doctest::Approx(2.0 - 3.0 - (2.0 - 4.0) / 0.025));
  const auto w = identify(spec, 2.0, 3.0, 1.0);  // no exceedance
  CHECK(w[0] == doctest::Approx(0.025));
  CHECK(w[1] == doctest::Approx(-1.0));
}

TEST_CASE("expected identification vanishes at the true functional") {
  const std::vector<Distribution> dists = {
      Distribution::normal(0.0, 1.0),
      Distribution::student_t(5.0),
      Distribution::skewed_t(5.0, 1.5).standardized(),
  };
  for (const auto& d : dists) {
    INFO(d.name());
    {
      const auto spec = IdentificationSpec::var(0.99);
      const auto ev = expected_identification(spec, d, d.quantile(0.99));
      CHECK(std::fabs(ev[0]) < 1e-8);
    }
    {
      const auto spec = IdentificationSpec::expectile(0.99855);
      const auto ev = expected_identification(spec, d, d.expectile(0.99855));
      CHECK(std::fabs(ev[0]) < 1e-8);
    }
    {
      const auto spec = IdentificationSpec::var_es(0.975);
      const auto ev = expected_identification(spec, d, d.quantile(0.975),
                                              d.expected_shortfall(0.975));
      CHECK(std::fabs(ev[0]) < 1e-8);
      CHECK(std::fabs(ev[1]) < 1e-8);
    }
  }
}

TEST_CASE("super-calibration orientation: conservative VaR forecasts give E V >= 0") {
  const Distribution d = Distribution::student_t(5.0);
  const auto spec = IdentificationSpec::var(0.95);
  const double truth = d.quantile(0.95);
  CHECK(expected_identification(spec, d, truth + 0.5)[0] > 0.0);
  CHECK(expected_identification(spec, d, truth - 0.5)[0] < 0.0);
  // Same direction for expectiles.
  const auto espec = IdentificationSpec::expectile(0.95);
  const double etruth = d.expectile(0.95);
  CHECK(expected_identification(espec, d, etruth + 0.5)[0] > 0.0);
  CHECK(expected_identification(espec, d, etruth - 0.5)[0] < 0.0);
}

TEST_CASE("ES sandwich bound holds on random forecast pairs") {
  const Distribution d = Distribution::normal(0.0, 1.0);
  const double nu = 0.9;
  const auto spec = IdentificationSpec::var_es(nu);
  const double r1s = d.quantile(nu);
  const double r2s = d.expected_shortfall(nu);
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const double r1 = r1s + 1.2 * (rng.uniform01() - 0.5);
    const double r2 = r2s + 1.2 * (rng.uniform01() - 0.5);
    const double ev2 = expected_identification(spec, d, r1, r2)[1];
    const double lower = r2s - r2;
    const double upper = r2s - r2 + (nu - d.cdf(r1)) / (1.0 - nu) * (r1s - r1);
    INFO("r1=" << r1 << " r2=" << r2);
    CHECK(ev2 >= lower - 1e-8);
    CHECK(ev2 <= upper + 1e-8);
  }
}

TEST_CASE("root uniqueness on a 5-atom discrete distribution") {
  // Unique quantiles: strictly increasing atoms with distinct cumulative
  // probabilities around the target level.
  const std::vector<double> atoms = {0.5, 1.0, 2.0, 3.5, 5.0};
  const std::vector<double> probs = {0.3, 0.25, 0.2, 0.15, 0.1};
  const double alpha = 0.8;
  const auto spec = IdentificationSpec::var(alpha);
  auto ev = [&](double r) {
    double s = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      s += probs[i] * identify(spec, r, atoms[i])[0];
    }
    return s;
  };
  // cumulative: .3 .55 .75 .9 1; the 0.8-quantile is 3.5
  int sign_changes = 0;
  double prev = ev(0.0);
  for (double r = 0.1; r <= 6.0; r += 0.1) {
    const double cur = ev(r);
    if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) ++sign_changes;
    prev = cur;
  }
  CHECK(sign_changes == 1);
  CHECK(ev(3.4) < 0.0);
  CHECK(ev(3.6) > 0.0);
}

TEST_CASE("pair specs demand pair forecasts and vice versa") {
  CHECK_THROWS_AS(identify(IdentificationSpec::var_es(0.9), 1.0, 2.0),
                  std::domain_error);
  CHECK_THROWS_AS(identify(IdentificationSpec::var(0.9), 1.0, 2.0, 3.0),
                  std::domain_error);
  CHECK_THROWS_AS(IdentificationSpec::var(1.0), std::domain_error);
}
