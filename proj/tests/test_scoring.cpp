#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "riskbt/rng.hpp"
#include "riskbt/scoring.hpp"

using namespace riskbt;

namespace {

// A small discrete distribution with positive atoms; the exhaustive-oracle
// ground truth for strict-consistency checks.
struct DiscreteDist {
  std::vector<double> atoms;  // ascending
  std::vector<double> probs;

  double expected_score(const ScoreSpec& spec, double r) const {
    double s = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) s += probs[i] * score(spec, r, atoms[i]);
    return s;
  }
  double expected_score(const ScoreSpec& spec, double r1, double r2) const {
    double s = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      s += probs[i] * score(spec, r1, r2, atoms[i]);
    }
    return s;
  }
  double var(double alpha) const {
    double c = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      c += probs[i];
      if (c >= alpha) return atoms[i];
    }
    return atoms.back();
  }
  double es(double nu) const {
    // (1/(1-nu)) integral_nu^1 VaR_u du, exact for atoms.
    double c = 0.0;
    double integral = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const double next = c + probs[i];
      const double lo = std::max(c, nu);
      if (next > lo) integral += atoms[i] * (next - lo);
      c = next;
    }
    return integral / (1.0 - nu);
  }
  double expectile(double tau) const {
    auto imbalance = [&](double e) {
      double up = 0.0, down = 0.0;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i] > e) up += probs[i] * (atoms[i] - e);
        else down += probs[i] * (e - atoms[i]);
      }
      return tau * up - (1.0 - tau) * down;
    };
    double lo = atoms.front(), hi = atoms.back();
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (imbalance(mid) > 0.0) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  }
};

DiscreteDist random_discrete(Rng& rng, int max_atoms = 6) {
  DiscreteDist d;
  const int n = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_atoms - 2)));
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    d.atoms.push_back(0.2 + 4.0 * rng.uniform01());
    const double w = 0.1 + rng.uniform01();
    d.probs.push_back(w);
    total += w;
  }
  std::sort(d.atoms.begin(), d.atoms.end());
  for (auto& p : d.probs) p /= total;
  return d;
}

}  // namespace

TEST_CASE("hand-evaluated score values") {
  // VaR linear: (1 - 0.99 - 1) * 1 + 2
  CHECK(score(ScoreSpec::var_linear(0.99), 1.0, 2.0) ==
        doctest::Approx(1.01).epsilon(1e-14));
  // (VaR,ES) sqrt with no exceedance: (1-nu)(r1+r2)/(2 sqrt(r2))
  CHECK(score(ScoreSpec::vares_sqrt(0.975), 1.0, 1.0, 0.0) ==
        doctest::Approx(0.025).epsilon(1e-14));
  // score differences of identical forecasts vanish
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const double r = 0.5 + rng.uniform01();
    const double x = 3.0 * rng.uniform01();
    for (const auto& spec : {ScoreSpec::var_linear(0.9), ScoreSpec::var_log(0.9),
                             ScoreSpec::expectile_quadratic(0.9),
                             ScoreSpec::expectile_neglog(0.9)}) {
      CHECK(score_difference(spec, r, r, x) == 0.0);
    }
    CHECK(score_difference(ScoreSpec::vares_sqrt(0.9), r, r + 1.0, r, r + 1.0, x) == 0.0);
  }
}

TEST_CASE("log-type generators reject non-positive forecasts") {
  CHECK_THROWS_AS(score(ScoreSpec::var_log(0.99), 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(score(ScoreSpec::var_log(0.99), -1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(score(ScoreSpec::expectile_neglog(0.9), -0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(score(ScoreSpec::vares_sqrt(0.9), 1.0, -2.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(score(ScoreSpec::vares_log(0.9), 1.0, 0.0, 1.0), std::domain_error);
  // The linear VaR score accepts any real forecast.
  CHECK(std::isfinite(score(ScoreSpec::var_linear(0.99), -1.0, 1.0)));
}

TEST_CASE("declared homogeneity degrees are confirmed on 1000 random triples") {
  Rng rng(42);
  auto confirm = [&](const ScoreSpec& spec, double degree) {
    REQUIRE(spec.declared_homogeneity().has_value());
    CHECK(*spec.declared_homogeneity() == degree);
    const auto rep = validate_homogeneity(spec, 1000, rng);
    INFO(spec.id() << " max rel err " << rep.max_rel_err);
    CHECK(rep.degree_confirmed);
    CHECK(rep.max_rel_err < 1e-10);
  };
  confirm(ScoreSpec::var_linear(0.99), 1.0);
  confirm(ScoreSpec::expectile_quadratic(0.99855), 2.0);
  confirm(ScoreSpec::vares_sqrt(0.975), 0.5);
  // score-difference 0-homogeneity of the log choices
  confirm(ScoreSpec::var_log(0.99), 0.0);
  confirm(ScoreSpec::expectile_neglog(0.99855), 0.0);
  confirm(ScoreSpec::vares_log(0.975), 0.0);
  // custom power families
  confirm(ScoreSpec::var_power(0.9, 1.7), 1.7);
  confirm(ScoreSpec::var_power(0.9, -0.5), -0.5);
  confirm(ScoreSpec::expectile_power(0.9, 2.6), 2.6);
  confirm(ScoreSpec::expectile_power(0.9, 0.5), 0.5);
  confirm(ScoreSpec::vares_power(0.9, 0.3), 0.3);
  confirm(ScoreSpec::expectile_xlogx(0.9), 1.0);
}

TEST_CASE("power constructors reject degrees without strictly consistent scores") {
  CHECK_THROWS_AS(ScoreSpec::var_power(0.9, 0.0), std::domain_error);
  CHECK_THROWS_AS(ScoreSpec::expectile_power(0.9, 0.0), std::domain_error);
  CHECK_THROWS_AS(ScoreSpec::expectile_power(0.9, 1.0), std::domain_error);
  CHECK_THROWS_AS(ScoreSpec::vares_power(0.9, 1.0), std::domain_error);
  CHECK_THROWS_AS(ScoreSpec::vares_power(0.9, 1.5), std::domain_error);
}

TEST_CASE("expected score is minimized at the true functional (quadrature)") {
  const Distribution t5 = Distribution::student_t(5.0);
  struct Case {
    ScoreSpec spec;
    double truth;
  };
  const std::vector<Case> cases = {
      {ScoreSpec::var_linear(0.9), t5.quantile(0.9)},
      {ScoreSpec::expectile_quadratic(0.9), t5.expectile(0.9)},
  };
  for (const auto& c : cases) {
    const double at_truth = expected_score(c.spec, t5, c.truth);
    CHECK(at_truth < expected_score(c.spec, t5, c.truth + 0.1));
    CHECK(at_truth < expected_score(c.spec, t5, c.truth - 0.1));
  }
  const double r1 = t5.quantile(0.9);
  const double r2 = t5.expected_shortfall(0.9);
  const ScoreSpec ves = ScoreSpec::vares_sqrt(0.9);
  const double at_truth = expected_score(ves, t5, r1, r2);
  CHECK(at_truth < expected_score(ves, t5, r1 + 0.1, r2));
  CHECK(at_truth < expected_score(ves, t5, r1, r2 + 0.1));
  CHECK(at_truth < expected_score(ves, t5, r1 - 0.1, r2 - 0.1));
}

TEST_CASE("grid argmin of the expected VaR score hits the 0.99 quantile") {
  const Distribution n01 = Distribution::normal(0.0, 1.0);
  const ScoreSpec spec = ScoreSpec::var_linear(0.99);
  const double truth = n01.quantile(0.99);
  double best_r = 0.0, best = 1e300;
  const double step = 0.01;
  for (double r = 1.5; r <= 3.2; r += step) {
    const double v = expected_score(spec, n01, r);
    if (v < best) {
      best = v;
      best_r = r;
    }
  }
  CHECK(std::fabs(best_r - truth) <= step + 1e-12);
}

TEST_CASE("expectile quadratic at tau=1/2 orders like squared error") {
  const Distribution n01 = Distribution::normal(0.0, 1.0);
  const ScoreSpec spec = ScoreSpec::expectile_quadratic(0.5);
  double best_r = -10.0, best = 1e300;
  for (double r = -1.0; r <= 1.0; r += 0.005) {
    const double v = expected_score(spec, n01, r);
    if (v < best) {
      best = v;
      best_r = r;
    }
  }
  CHECK(std::fabs(best_r - 0.0) <= 0.005 + 1e-12);
}

TEST_CASE("expectile neglog minimizer under Exponential(1) is the expectile") {
  const Distribution ex = Distribution::exponential(1.0);
  const ScoreSpec spec = ScoreSpec::expectile_neglog(0.9);
  const double truth = ex.expectile(0.9);
  // golden-section refinement after a coarse bracket
  double a = 0.5 * truth, b = 2.0 * truth;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = expected_score(spec, ex, x1), f2 = expected_score(spec, ex, x2);
  for (int i = 0; i < 80; ++i) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a);
      f1 = expected_score(spec, ex, x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a);
      f2 = expected_score(spec, ex, x2);
    }
  }
  CHECK(std::fabs(0.5 * (a + b) - truth) < 1e-4);
}

TEST_CASE("strict consistency on random discrete distributions (grid oracle)") {
  Rng rng(314);
  for (int trial = 0; trial < 5; ++trial) {
    const DiscreteDist d = random_discrete(rng);
    const double lo = 0.05, hi = 5.5, step = 0.01;

    for (const auto& spec : {ScoreSpec::var_linear(0.8), ScoreSpec::var_log(0.8)}) {
      double best_r = lo, best = 1e300;
      for (double r = lo; r <= hi; r += step) {
        const double v = d.expected_score(spec, r);
        if (v < best) {
          best = v;
          best_r = r;
        }
      }
      // The expected score at the true quantile cannot exceed the grid
      // minimum, and the grid minimizer attains the same expected score.
      INFO(spec.id());
      CHECK(d.expected_score(spec, d.var(0.8)) <= best + 1e-12);
      CHECK(std::fabs(d.expected_score(spec, best_r) -
                      d.expected_score(spec, d.var(0.8))) < 5e-3);
    }

    for (const auto& spec :
         {ScoreSpec::expectile_quadratic(0.85), ScoreSpec::expectile_neglog(0.85)}) {
      double best_r = lo, best = 1e300;
      for (double r = lo; r <= hi; r += step) {
        const double v = d.expected_score(spec, r);
        if (v < best) {
          best = v;
          best_r = r;
        }
      }
      INFO(spec.id());
      CHECK(std::fabs(best_r - d.expectile(0.85)) <= step + 1e-9);
    }

    for (const auto& spec : {ScoreSpec::vares_sqrt(0.8), ScoreSpec::vares_log(0.8)}) {
      const double truth1 = d.var(0.8);
      const double truth2 = d.es(0.8);
      double b1 = 0, b2 = 0, best = 1e300;
      for (double r1 = lo; r1 <= hi; r1 += 0.05) {
        for (double r2 = std::max(r1, 0.1); r2 <= hi + 1.0; r2 += 0.05) {
          const double v = d.expected_score(spec, r1, r2);
          if (v < best) {
            best = v;
            b1 = r1;
            b2 = r2;
          }
        }
      }
      INFO(spec.id() << " truth (" << truth1 << "," << truth2 << ") got (" << b1 << ","
                     << b2 << ")");
      CHECK(d.expected_score(spec, truth1, truth2) <= best + 1e-10);
      CHECK(std::fabs(b2 - truth2) <= 0.05 + 1e-9);
    }
  }
}

TEST_CASE("log-variant argmin is invariant under rescaling the distribution") {
  Rng rng(2718);
  const DiscreteDist d = random_discrete(rng);
  DiscreteDist d2 = d;
  const double c = 3.7;
  for (auto& a : d2.atoms) a *= c;
  const ScoreSpec spec = ScoreSpec::var_log(0.8);
  auto argmin = [&](const DiscreteDist& dd, double lo, double hi) {
    double best_r = lo, best = 1e300;
    for (double r = lo; r <= hi; r += 0.002) {
      const double v = dd.expected_score(spec, r);
      if (v < best) {
        best = v;
        best_r = r;
      }
    }
    return best_r;
  };
  const double m1 = argmin(d, 0.05, 6.0);
  const double m2 = argmin(d2, 0.05 * c, 6.0 * c);
  CHECK(std::fabs(m2 - c * m1) < 0.01 * c);
}

TEST_CASE("(VaR,ES) scores depend on x only through the exceedance terms") {
  const ScoreSpec spec = ScoreSpec::vares_sqrt(0.975);
  // Any two realizations below r1 give identical scores.
  CHECK(score(spec, 2.0, 3.0, 1.2) == score(spec, 2.0, 3.0, -4.7));
  const ScoreSpec lg = ScoreSpec::vares_log(0.975);
  CHECK(score(lg, 2.0, 3.0, 0.0) == score(lg, 2.0, 3.0, 1.99));
}

TEST_CASE("expected score flags divergent integrals") {
  // Quadratic expectile score under t(1.8): E X^2 does not exist.
  const Distribution heavy = Distribution::student_t(1.8);
  CHECK_THROWS_AS(expected_score(ScoreSpec::expectile_quadratic(0.9), heavy, 1.0),
                  std::runtime_error);
  // VaR linear under an infinite-mean GPD.
  const Distribution gpd = Distribution::gpd(1.0, 1.5);
  CHECK_THROWS_AS(expected_score(ScoreSpec::var_linear(0.9), gpd, 1.0),
                  std::runtime_error);
  // The log VaR score tolerates the same GPD (only log-moments needed).
  CHECK(std::isfinite(expected_score(ScoreSpec::var_log(0.9), gpd, 1.0)));
}

TEST_CASE("the logistic (VaR,ES) score is minimized at the true pair") {
  const Distribution t5 = Distribution::student_t(5.0);
  const double nu = 0.975;
  const ScoreSpec spec = ScoreSpec::vares_logistic(nu);
  const double r1 = t5.quantile(nu);
  const double r2 = t5.expected_shortfall(nu);
  const double at_truth = expected_score(spec, t5, r1, r2);
  for (double d1 : {-0.3, 0.0, 0.3}) {
    for (double d2 : {-0.3, 0.0, 0.3}) {
      if (d1 == 0.0 && d2 == 0.0) continue;
      CHECK(at_truth < expected_score(spec, t5, r1 + d1, r2 + d2));
    }
  }
  // negative forecasts are admissible for this generator
  CHECK(std::isfinite(score(spec, -1.0, -0.5, 0.3)));
}
