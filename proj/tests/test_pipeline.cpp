#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "riskbt/special.hpp"
#include "riskbt/pipeline/csv_io.hpp"
#include "riskbt/pipeline/emit.hpp"
#include "riskbt/pipeline/experiments.hpp"

using namespace riskbt;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig small_config() {
  RunConfig cfg;
  cfg.simulate = true;
  cfg.window = 250;
  cfg.out_of_sample = 40;
  cfg.methods = {"n-FP", "n-FHS", "n-EVT", "opt"};
  cfg.var_levels = {0.9, 0.99};
  cfg.expectile_levels = {0.96561};
  cfg.vares_levels = {0.875};
  cfg.fhs_resample = 2000;
  cfg.seed = 7;
  cfg.formats = {"csv"};
  return cfg;
}

}  // namespace

TEST_CASE("csv ingestion: prices become negated log-returns") {
  const LossSeries s = parse_loss_csv("date,price\n2001-01-01,100\n2001-01-02,101\n", true);
  REQUIRE(s.losses.size() == 1);
  CHECK(s.losses[0] == doctest::Approx(-std::log(101.0 / 100.0)).epsilon(1e-12));
  CHECK(s.dates == std::vector<std::string>{"2001-01-02"});

  const LossSeries flat = parse_loss_csv("price\n50\n50\n50\n", true);
  CHECK(flat.losses == std::vector<double>{0.0, 0.0});

  const LossSeries raw = parse_loss_csv("loss\n0.5\n-0.25\n", false);
  CHECK(raw.losses == std::vector<double>{0.5, -0.25});
}

TEST_CASE("csv ingestion rejects malformed rows with line numbers") {
  CHECK_THROWS_WITH_AS(parse_loss_csv("loss\n0.5\nxyz\n", false),
                       doctest::Contains("line 3"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_loss_csv("loss\n0.5\n\n1.0\nbad\n", false),
                       doctest::Contains("line 5"), std::runtime_error);
  CHECK_THROWS_AS(parse_loss_csv("volume\n1\n2\n", true), std::runtime_error);
  CHECK_THROWS_AS(parse_loss_csv("price\n100\n-3\n", true), std::runtime_error);
}

TEST_CASE("loss csv round trip is bit-exact") {
  LossSeries s;
  Rng rng(1);
  for (int i = 0; i < 100; ++i) s.losses.push_back(norm_quantile(rng.uniform01()) * 0.01);
  const std::string path = "roundtrip_losses.csv";
  write_loss_csv(path, s);
  const LossSeries back = ingest_csv(path, false);
  REQUIRE(back.losses.size() == s.losses.size());
  for (std::size_t i = 0; i < s.losses.size(); ++i) {
    CHECK(back.losses[i] == s.losses[i]);  // %.17g preserves doubles exactly
  }
  std::filesystem::remove(path);
}

TEST_CASE("config files round trip") {
  RunConfig cfg = small_config();
  cfg.csv_path = "input.csv";
  cfg.scores = {"zero"};
  cfg.hac_lags = 3;
  cfg.eta = 0.1;
  cfg.parallel = true;
  const RunConfig back = parse_config(render_config(cfg));
  CHECK(back.csv_path == cfg.csv_path);
  CHECK(back.window == cfg.window);
  CHECK(back.methods == cfg.methods);
  CHECK(back.var_levels == cfg.var_levels);
  CHECK(back.expectile_levels == cfg.expectile_levels);
  CHECK(back.vares_levels == cfg.vares_levels);
  CHECK(back.scores == cfg.scores);
  CHECK(back.eta == cfg.eta);
  CHECK(back.seed == cfg.seed);
  CHECK(back.hac_lags == cfg.hac_lags);
  CHECK(back.parallel == cfg.parallel);
  CHECK(back.out_of_sample == cfg.out_of_sample);
  CHECK_THROWS_AS(parse_config("run.window: 5\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[run]\nunknown = 1\n"), std::invalid_argument);
}

TEST_CASE("config validation rules") {
  RunConfig cfg = small_config();
  cfg.window = 100;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.simulate = false;
  cfg.csv_path = "x.csv";  // opt not allowed on real data
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.methods = {"n-XXX"};
  CHECK_THROWS_AS(parse_method("n-XXX"), std::invalid_argument);
  CHECK(parse_method("st-EVT").family == InnovationFamily::skewed_t);
  CHECK(parse_method("opt").is_opt);
}

TEST_CASE("rolling runner: anti-lookahead at the verify point") {
  RunConfig cfg = small_config();
  cfg.methods = {"n-FP"};
  const SimulatedRun input = simulate_run_input(simulation_dgp(), cfg.window,
                                                cfg.out_of_sample, 200, cfg.seed);
  const RollingResult base = run_rolling(cfg, input.losses, nullptr);
  for (std::size_t t : {std::size_t{0}, std::size_t{17}, std::size_t{39}}) {
    std::vector<double> perturbed = input.losses;
    perturbed[cfg.window + t] += 1.0;  // change the verifying observation
    const RollingResult mod = run_rolling(cfg, perturbed, nullptr);
    for (std::size_t s = 0; s < base.slots.size(); ++s) {
      CHECK(mod.at(0, s).r1[t] == base.at(0, s).r1[t]);
      CHECK(mod.at(0, s).x[t] == base.at(0, s).x[t] + 1.0);
    }
  }
}

TEST_CASE("rolling runner: parallel kernel equals the serial reference bitwise") {
  RunConfig cfg = small_config();
  cfg.methods = {"n-FP", "n-FHS", "n-EVT"};
  cfg.warm_start = false;
  const SimulatedRun input = simulate_run_input(simulation_dgp(), cfg.window,
                                                cfg.out_of_sample, 200, cfg.seed);
  cfg.parallel = false;
  const RollingResult serial = run_rolling(cfg, input.losses, nullptr);
  cfg.parallel = true;
  const RollingResult parallel = run_rolling(cfg, input.losses, nullptr);
  REQUIRE(serial.series.size() == parallel.series.size());
  for (std::size_t i = 0; i < serial.series.size(); ++i) {
    CHECK(serial.series[i].r1 == parallel.series[i].r1);
    CHECK(serial.series[i].r2 == parallel.series[i].r2);
    CHECK(serial.series[i].sigma_hat == parallel.series[i].sigma_hat);
  }
}

TEST_CASE("score zeroing is all-or-none per timestamp") {
  // Hand-built rolling result with one negative forecast.
  RollingResult rolling;
  rolling.methods = {parse_method("n-FP"), parse_method("n-FHS")};
  rolling.slots = {{Functional::var, 0.9}};
  rolling.out_of_sample = 3;
  ForecastSeries a;
  a.method = "n-FP";
  a.functional = Functional::var;
  a.level = 0.9;
  a.r1 = {1.0, -0.5, 2.0};
  a.r2 = {0, 0, 0};
  a.x = {0.5, 0.5, 0.5};
  a.mu_hat = a.sigma_hat = {1, 1, 1};
  a.flags = {0, 0, 0};
  ForecastSeries b = a;
  b.method = "n-FHS";
  b.r1 = {1.1, 1.2, 1.3};
  rolling.series = {a, b};

  RunConfig cfg = small_config();
  std::size_t zeroed = 0;
  const auto scores =
      zeroed_score_series(cfg, rolling, 0, ScoreSpec::var_linear(0.9), &zeroed);
  CHECK(zeroed == 1);
  CHECK(scores[0][1] == 0.0);
  CHECK(scores[1][1] == 0.0);  // the clean method is zeroed at t=1 as well
  CHECK(scores[1][0] != 0.0);
}

TEST_CASE("small simulated run: reports, ranks, violations and determinism") {
  RunConfig cfg = small_config();
  cfg.out_dir = "test_out_a";
  const ReportBundle bundle = run_simulation_study(cfg, /*emit=*/true);

  // %Viol equals the exceedance count over n exactly.
  const SimulatedRun input = simulate_run_input(simulation_dgp(), cfg.window,
                                                cfg.out_of_sample, cfg.burnin, cfg.seed);
  const RollingResult rolling = run_rolling(cfg, input.losses, &input.oracle);
  for (const auto& table : bundle.summaries) {
    if (table.functional != Functional::var) continue;
    for (std::size_t mi = 0; mi < table.rows.size(); ++mi) {
      std::size_t slot = 0;
      for (; slot < rolling.slots.size(); ++slot) {
        if (rolling.slots[slot].functional == Functional::var &&
            rolling.slots[slot].level == table.level) {
          break;
        }
      }
      const auto& fs = rolling.at(mi, slot);
      std::size_t viol = 0;
      for (std::size_t t = 0; t < fs.x.size(); ++t) {
        if (fs.x[t] > fs.r1[t]) ++viol;
      }
      CHECK(table.rows[mi].pct_violations ==
            doctest::Approx(100.0 * viol / static_cast<double>(fs.x.size())));
    }
  }

  // Ranks are a permutation of 1..m for every score variant.
  for (const auto& table : bundle.summaries) {
    for (std::size_t si = 0; si < table.score_ids.size(); ++si) {
      std::vector<int> ranks;
      for (const auto& row : table.rows) ranks.push_back(row.ranks[si]);
      std::sort(ranks.begin(), ranks.end());
      for (std::size_t i = 0; i < ranks.size(); ++i) CHECK(ranks[i] == static_cast<int>(i) + 1);
    }
  }

  // Byte-identical replay.
  RunConfig cfg2 = cfg;
  cfg2.out_dir = "test_out_b";
  run_simulation_study(cfg2, /*emit=*/true);
  CHECK(read_file("test_out_a/summary.csv") == read_file("test_out_b/summary.csv"));
  CHECK(read_file("test_out_a/pvalues.csv") == read_file("test_out_b/pvalues.csv"));

  // A different seed produces different tables.
  RunConfig cfg3 = cfg;
  cfg3.seed = 8;
  cfg3.out_dir = "test_out_c";
  run_simulation_study(cfg3, /*emit=*/true);
  CHECK(read_file("test_out_a/summary.csv") != read_file("test_out_c/summary.csv"));

  // CSV re-parse reproduces the ranks exactly.
  {
    std::istringstream in(read_file("test_out_a/summary.csv"));
    std::string line;
    std::getline(in, line);  // header
    std::size_t row_idx = 0;
    std::vector<std::pair<std::string, int>> parsed;  // method, first rank
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      REQUIRE(cells.size() >= 8);
      parsed.push_back({cells[2], std::stoi(cells[7])});
      ++row_idx;
    }
    std::size_t k = 0;
    for (const auto& table : bundle.summaries) {
      for (const auto& row : table.rows) {
        CHECK(parsed[k].first == row.method);
        CHECK(parsed[k].second == row.ranks[0]);
        ++k;
      }
    }
  }

  // Manifest echo replays to an identical configuration.
  const std::string manifest = read_file("test_out_a/manifest.json");
  CHECK(manifest.find("\"seed\": 7") != std::string::npos);

  for (const char* dir : {"test_out_a", "test_out_b", "test_out_c"}) {
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("traffic matrices carry zones for every cell and svg renders") {
  RunConfig cfg = small_config();
  cfg.methods = {"n-FP", "n-FHS", "opt"};
  const ReportBundle bundle = run_simulation_study(cfg, /*emit=*/false);
  REQUIRE(!bundle.traffic.empty());
  for (const auto& entry : bundle.traffic) {
    const std::size_t n = entry.matrix.methods.size();
    REQUIRE(n == 3);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(entry.matrix.zone(i, i) == Zone::neutral);
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const Zone z = entry.matrix.zone(i, j);
        CHECK((z == Zone::red || z == Zone::yellow || z == Zone::green));
      }
    }
    const std::string svg = traffic_svg(entry);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("#bbbbbb") != std::string::npos);  // neutral diagonal cells
  }
  const std::string csv = traffic_csv(bundle.traffic.front());
  CHECK(csv.find("standard_model") == 0);
}

TEST_CASE("removing opt removes exactly one row/column everywhere") {
  RunConfig cfg = small_config();
  const ReportBundle with_opt = run_simulation_study(cfg, false);
  cfg.methods = {"n-FP", "n-FHS", "n-EVT"};
  const ReportBundle without = run_simulation_study(cfg, false);
  CHECK(with_opt.summaries[0].rows.size() == 4);
  CHECK(without.summaries[0].rows.size() == 3);
  CHECK(with_opt.traffic[0].matrix.methods.size() == 4);
  CHECK(without.traffic[0].matrix.methods.size() == 3);
  // the shared methods' forecasts are unchanged (fits keyed by family)
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(with_opt.summaries[0].rows[i].mean_forecast ==
          doctest::Approx(without.summaries[0].rows[i].mean_forecast).epsilon(1e-12));
  }
}

TEST_CASE("motivating experiment produces the comparison table") {
  const MotivatingResult r = run_motivating_experiment(3000, 5);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[0].forecaster == "magician");
  // The exact conditional forecaster sees roughly 1% exceedances.
  CHECK(r.rows[0].pct_exceedances > 0.3);
  CHECK(r.rows[0].pct_exceedances < 3.0);
  // deterministic replay
  const MotivatingResult r2 = run_motivating_experiment(3000, 5);
  CHECK(motivating_csv(r) == motivating_csv(r2));
  CHECK_THROWS_AS(run_motivating_experiment(100, 5), std::invalid_argument);
}

TEST_CASE("replication study shapes and preference conventions") {
  RunConfig base = small_config();
  base.methods = {"n-FP", "n-FHS", "opt"};
  base.var_levels = {0.9};
  base.vares_levels = {0.875};
  const auto study = run_replication_study(2, 40, 3, base);
  CHECK(study.replicates == 2);
  REQUIRE(!study.blocks.empty());
  for (const auto& block : study.blocks) {
    CHECK(block.ranks.size() == 2);
    for (const auto& reps : block.ranks) CHECK(reps.size() == 3);
    const std::size_t m = study.methods.size();
    for (std::size_t i = 0; i < m; ++i) CHECK(block.preferences.percent[i * m + i] == 0.0);
  }
  const std::string ranks_csv = replication_ranks_csv(study);
  CHECK(ranks_csv.find("functional,level,score_id,replicate") == 0);
  const std::string prefs_csv = replication_preferences_csv(study);
  CHECK(prefs_csv.find("functional,level,score_id,method") == 0);
}
