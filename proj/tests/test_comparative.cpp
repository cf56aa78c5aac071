#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "riskbt/comparative.hpp"
#include "riskbt/rng.hpp"
#include "riskbt/scoring.hpp"
#include "riskbt/special.hpp"

using namespace riskbt;

TEST_CASE("identical score series are degenerate yellow") {
  std::vector<double> d(60, 0.0);
  const auto v = dm_test(d, 0.05);
  CHECK(v.degenerate);
  CHECK(v.zone == Zone::yellow);
}

TEST_CASE("negating the difference series flips zones and swaps p-values") {
  Rng rng(99);
  std::vector<double> d(200);
  for (auto& x : d) x = rng.uniform01() - 0.7;  // clearly negative mean
  const auto v = dm_test(d, 0.05);
  std::vector<double> neg(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) neg[i] = -d[i];
  const auto w = dm_test(neg, 0.05);
  CHECK(v.dm_statistic == doctest::Approx(-w.dm_statistic).epsilon(1e-12));
  CHECK(v.p_plus == doctest::Approx(w.p_minus).epsilon(1e-12));
  CHECK(v.p_minus == doctest::Approx(w.p_plus).epsilon(1e-12));
  CHECK(v.zone == Zone::green);
  CHECK(w.zone == Zone::red);
}

TEST_CASE("the DM statistic is invariant under positive scaling") {
  Rng rng(7);
  std::vector<double> d(150);
  for (auto& x : d) x = rng.uniform01() - 0.4;
  const auto v = dm_test(d, 0.05);
  std::vector<double> scaled(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) scaled[i] = 13.7 * d[i];
  const auto w = dm_test(scaled, 0.05);
  CHECK(v.dm_statistic == doctest::Approx(w.dm_statistic).epsilon(1e-12));
  CHECK(v.zone == w.zone);
}

TEST_CASE("zone partition: green and red are mutually exclusive") {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> d(80);
    for (auto& x : d) x = rng.uniform01() - rng.uniform01();
    const auto v = dm_test(d, 0.05);
    const bool green = v.zone == Zone::green;
    const bool red = v.zone == Zone::red;
    const bool yellow = v.zone == Zone::yellow;
    CHECK((green + red + yellow) == 1);
    if (green) CHECK(v.p_plus <= 0.05);
    if (red) CHECK(v.p_minus <= 0.05);
    CHECK(!(v.p_plus <= 0.05 && v.p_minus <= 0.05));
  }
}

TEST_CASE("traffic-light matrix: diagonal neutral, green/red antisymmetry") {
  Rng rng(2021);
  const std::size_t n = 120;
  std::vector<std::vector<double>> scores(4, std::vector<double>(n));
  for (std::size_t m = 0; m < 4; ++m) {
    const double bias = 0.1 * static_cast<double>(m);
    for (auto& s : scores[m]) s = rng.uniform01() + bias;
  }
  const auto matrix =
      traffic_light_matrix({"a", "b", "c", "d"}, scores, 0.05, HacPolicy::none());
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(matrix.zone(i, i) == Zone::neutral);
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) continue;
      const Zone zij = matrix.zone(i, j);
      const Zone zji = matrix.zone(j, i);
      if (zij == Zone::green) CHECK(zji == Zone::red);
      if (zij == Zone::red) CHECK(zji == Zone::green);
      if (zij == Zone::yellow) CHECK(zji == Zone::yellow);
      CHECK(matrix.at(i, j).dm_statistic ==
            doctest::Approx(-matrix.at(j, i).dm_statistic).epsilon(1e-12));
    }
  }
}

TEST_CASE("two white-noise methods stay yellow most of the time") {
  // Under the null the yellow probability is exactly 1 - 2 eta = 0.90, so
  // the >= 90% bound holds only up to Monte-Carlo noise; fixed seeds.
  int yellow = 0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(4000 + rep);
    std::vector<std::vector<double>> scores(2, std::vector<double>(400));
    for (auto& s : scores[0]) s = norm_quantile(rng.uniform01());
    for (auto& s : scores[1]) s = norm_quantile(rng.uniform01());
    const auto matrix = traffic_light_matrix({"a", "b"}, scores, 0.05, HacPolicy::none());
    if (matrix.zone(0, 1) == Zone::yellow) ++yellow;
  }
  CHECK(yellow >= 180);  // >= 90% of 200 replicates
}

TEST_CASE("rank by mean score: scaling convention and tie order") {
  const std::vector<std::vector<double>> scores = {
      {1.0, 1.0}, {0.5, 0.7}, {0.5, 0.7}, {2.0, 0.0}};
  const auto ranks = rank_by_mean_score({"m1", "m2", "m3", "m4"}, scores, 0.99);
  CHECK(ranks[0].scaled_mean_score == doctest::Approx(1.0 / 0.01));
  CHECK(ranks[1].rank == 1);  // ties keep registration order
  CHECK(ranks[2].rank == 2);
  CHECK(ranks[0].rank == 3);
  CHECK(ranks[3].rank == 4);

  const auto single = rank_by_mean_score({"only"}, {{0.3, 0.4}}, 0.9);
  CHECK(single[0].rank == 1);

  // rank invariance under positive rescaling of every series
  std::vector<std::vector<double>> scaled = scores;
  for (auto& s : scaled) {
    for (auto& x : s) x *= 42.0;
  }
  const auto ranks2 = rank_by_mean_score({"m1", "m2", "m3", "m4"}, scaled, 0.99);
  for (std::size_t i = 0; i < ranks.size(); ++i) CHECK(ranks[i].rank == ranks2[i].rank);
}

TEST_CASE("0-homogeneous score differences leave traffic zones bit-identical "
          "under joint rescaling") {
  Rng rng(31);
  const std::size_t n = 90;
  const ScoreSpec spec = ScoreSpec::var_log(0.9);
  std::vector<double> x(n), ra(n), rb(n);
  for (std::size_t t = 0; t < n; ++t) {
    x[t] = 0.5 + rng.uniform01();
    ra[t] = 0.8 + rng.uniform01();
    rb[t] = 0.9 + rng.uniform01();
  }
  auto diffs = [&](double c) {
    std::vector<double> d(n);
    for (std::size_t t = 0; t < n; ++t) {
      d[t] = score(spec, c * ra[t], c * x[t]) - score(spec, c * rb[t], c * x[t]);
    }
    return d;
  };
  const auto base = dm_test(diffs(1.0), 0.05);
  const auto scaled = dm_test(diffs(7.3), 0.05);
  CHECK(base.zone == scaled.zone);
  CHECK(base.dm_statistic == doctest::Approx(scaled.dm_statistic).epsilon(1e-9));
}

TEST_CASE("sign preference table counts replicate-level wins") {
  const std::vector<std::vector<double>> reps = {
      {1.0, 2.0, 1.0}, {2.0, 1.0, 2.0}, {1.0, 3.0, 1.0}, {0.5, 2.0, 0.5}};
  const auto table = sign_preference_table({"a", "b", "twin"}, reps);
  const std::size_t m = 3;
  // column a beats row b in 3 of 4 replicates
  CHECK(table.percent[1 * m + 0] == doctest::Approx(75.0));
  CHECK(table.percent[0 * m + 1] == doctest::Approx(25.0));
  // diagonal excluded
  CHECK(table.percent[0 * m + 0] == 0.0);
  // identical methods: guarded, reported as 50 with the tie flag
  CHECK(table.percent[0 * m + 2] == doctest::Approx(50.0));
  CHECK(table.tie[0 * m + 2]);
}

TEST_CASE("dm_test input validation") {
  std::vector<double> tiny(10, 0.1);
  CHECK_THROWS_AS(dm_test(tiny, 0.05), std::invalid_argument);
  std::vector<double> ok(40, 0.1);
  CHECK_THROWS_AS(dm_test(ok, 1.5), std::invalid_argument);
}
