#include "riskbt/pipeline/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "riskbt/pipeline/csv_io.hpp"

namespace riskbt {

ArGarchParams simulation_dgp() {
  ArGarchParams p;
  p.ar_intercept = -0.05;
  p.ar_coef = 0.3;
  p.omega = 0.01;
  p.alpha = 0.1;
  p.beta = 0.85;
  p.innovation = Distribution::skewed_t(5.0, 1.5).standardized();
  return p;
}

ArGarchParams motivating_dgp() {
  ArGarchParams p;
  p.ar_intercept = 0.0;
  p.ar_coef = 0.0;
  p.omega = 0.05;
  p.alpha = 0.20;
  p.beta = 0.75;
  p.innovation = Distribution::student_t(4.0).standardized();
  return p;
}

SimulatedRun simulate_run_input(const ArGarchParams& dgp, std::size_t window,
                                std::size_t out_of_sample, std::size_t burnin,
                                std::uint64_t seed) {
  Rng rng(seed);
  const SimPath path = simulate_ar_garch(dgp, window + out_of_sample, burnin, rng);
  SimulatedRun run;
  run.losses = path.x;
  run.oracle.innovation = dgp.innovation;
  run.oracle.mu.assign(path.mu.begin() + static_cast<long>(window), path.mu.end());
  run.oracle.sigma.assign(path.sigma.begin() + static_cast<long>(window), path.sigma.end());
  return run;
}

ReportBundle run_simulation_study(const RunConfig& cfg_in, bool emit) {
  RunConfig cfg = cfg_in;
  cfg.simulate = true;
  cfg.csv_path.clear();
  cfg.validate();
  const SimulatedRun run =
      simulate_run_input(simulation_dgp(), cfg.window, cfg.out_of_sample, cfg.burnin,
                         cfg.seed);
  const RollingResult rolling = run_rolling(cfg, run.losses, &run.oracle);
  ReportBundle bundle = build_reports(cfg, rolling);
  if (emit) emit_reports(bundle);
  return bundle;
}

ReportBundle run_csv_backtest(const RunConfig& cfg_in, bool emit) {
  RunConfig cfg = cfg_in;
  cfg.simulate = false;
  cfg.validate();
  const LossSeries input = ingest_csv(cfg.csv_path, cfg.prices_to_losses);
  if (input.losses.size() < cfg.window + 30) {
    throw std::runtime_error("backtest: series shorter than window + 30");
  }
  const RollingResult rolling = run_rolling(cfg, input.losses, nullptr);
  ReportBundle bundle = build_reports(cfg, rolling);
  if (emit) emit_reports(bundle);
  return bundle;
}

// ---------------------------------------------------------------------------
// Magician vs historians
// ---------------------------------------------------------------------------

MotivatingResult run_motivating_experiment(std::size_t length, std::uint64_t seed) {
  if (length < 2000) {
    throw std::invalid_argument("motivating experiment: length >= 2000 required");
  }
  const std::size_t presample = 1000;  // longest historian window
  const ArGarchParams dgp = motivating_dgp();
  Rng rng(seed);
  const SimPath path = simulate_ar_garch(dgp, presample + length, 500, rng);

  const double alpha = 0.99;
  const double nu = 0.975;
  const Distribution z = dgp.innovation;
  const double z_var99 = z.quantile(alpha);
  const double z_var975 = z.quantile(nu);
  const double z_es975 = z.expected_shortfall(nu);

  const ScoreSpec var_score = ScoreSpec::var_linear(alpha);
  const ScoreSpec vares_score = ScoreSpec::vares_logistic(nu);

  struct Forecaster {
    std::string name;
    std::size_t lookback;  // 0: magician
  };
  const std::vector<Forecaster> forecasters = {
      {"magician", 0}, {"historian-250", 250}, {"historian-500", 500},
      {"historian-1000", 1000}};

  MotivatingResult out;
  out.length = length;
  out.seed = seed;

  for (const auto& fc : forecasters) {
    double var_score_sum = 0.0, vares_score_sum = 0.0, resid_sum = 0.0;
    std::size_t exceed99 = 0, exceed975 = 0;
    std::vector<double> scratch;
    for (std::size_t t = presample; t < presample + length; ++t) {
      double r_var99, r_var975, r_es975;
      if (fc.lookback == 0) {
        const double sig = path.sigma[t];
        r_var99 = sig * z_var99;
        r_var975 = sig * z_var975;
        r_es975 = sig * z_es975;
      } else {
        const std::span<const double> window(path.x.data() + t - fc.lookback,
                                             fc.lookback);
        r_var99 = empirical_quantile(window, alpha);
        r_var975 = empirical_quantile(window, nu);
        scratch.assign(window.begin(), window.end());
        double sum = 0.0;
        std::size_t cnt = 0;
        for (double v : scratch) {
          if (v > r_var975) {
            sum += v;
            ++cnt;
          }
        }
        r_es975 = cnt > 0 ? sum / static_cast<double>(cnt) : r_var975;
      }
      const double x = path.x[t];
      if (x > r_var99) ++exceed99;
      var_score_sum += score(var_score, r_var99, x);
      vares_score_sum += score(vares_score, r_var975, r_es975, x);
      if (x > r_var975) {
        ++exceed975;
        resid_sum += (x - r_es975) / path.sigma[t];  // true sigma_t
      }
    }
    ForecasterComparison row;
    row.forecaster = fc.name;
    row.pct_exceedances = 100.0 * static_cast<double>(exceed99) / static_cast<double>(length);
    row.mean_var_score = var_score_sum / static_cast<double>(length);
    row.mean_vares_score = vares_score_sum / static_cast<double>(length);
    row.mean_exceedance_residual =
        exceed975 > 0 ? resid_sum / static_cast<double>(exceed975) : 0.0;
    out.rows.push_back(row);
  }

  // Does ranking by |%exceed - (1-alpha)| disagree with ranking by score?
  std::size_t best_exc = 0, best_score = 0;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    const double target = 100.0 * (1.0 - alpha);
    if (std::fabs(out.rows[i].pct_exceedances - target) <
        std::fabs(out.rows[best_exc].pct_exceedances - target)) {
      best_exc = i;
    }
    if (out.rows[i].mean_var_score < out.rows[best_score].mean_var_score) {
      best_score = i;
    }
  }
  out.exceedance_ordering_inverted = best_exc != best_score;
  return out;
}

std::string motivating_csv(const MotivatingResult& r) {
  std::ostringstream os;
  os << "forecaster,pct_exceedances_var99,mean_score_var99,"
        "mean_exceedance_residual_975,mean_score_vares975\n";
  char buf[160];
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%s,%.4f,%.6f,%.6f,%.6f\n", row.forecaster.c_str(),
                  row.pct_exceedances, row.mean_var_score,
                  row.mean_exceedance_residual, row.mean_vares_score);
    os << buf;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Small out-of-sample replication study
// ---------------------------------------------------------------------------

ReplicationStudyResult run_replication_study(std::size_t replicates,
                                             std::size_t out_of_sample,
                                             std::uint64_t seed,
                                             const RunConfig& base) {
  if (replicates < 2) {
    throw std::invalid_argument("replication study: need >= 2 replicates");
  }
  RunConfig cfg = base;
  cfg.simulate = true;
  cfg.out_of_sample = out_of_sample;
  // The study looks at VaR and the (VaR,ES) pair only.
  cfg.expectile_levels.clear();
  if (base.var_levels.size() > 2) cfg.var_levels = {0.90, 0.99};
  if (base.vares_levels.size() > 2) cfg.vares_levels = {0.754, 0.975};
  cfg.validate();

  ReplicationStudyResult out;
  out.methods = cfg.methods;
  out.replicates = replicates;
  out.out_of_sample = out_of_sample;

  struct Key {
    Functional f;
    double level;
    std::string score_id;
  };
  std::vector<Key> keys;
  for (Functional f : {Functional::var, Functional::var_es}) {
    for (double lvl : cfg.levels(f)) {
      for (const auto& s : cfg.score_specs(f, lvl)) keys.push_back({f, lvl, s.id()});
    }
  }
  // replicate x key x method mean scores
  std::vector<std::vector<std::vector<double>>> means(
      replicates, std::vector<std::vector<double>>(keys.size()));

  for (std::size_t rep = 0; rep < replicates; ++rep) {
    RunConfig rep_cfg = cfg;
    rep_cfg.seed = splitmix64(seed ^ (0x5bd1e995ULL * (rep + 1)));
    const SimulatedRun run = simulate_run_input(
        simulation_dgp(), rep_cfg.window, rep_cfg.out_of_sample, rep_cfg.burnin,
        rep_cfg.seed);
    const RollingResult rolling = run_rolling(rep_cfg, run.losses, &run.oracle);
    std::size_t key_idx = 0;
    for (std::size_t slot = 0; slot < rolling.slots.size(); ++slot) {
      const Functional f = rolling.slots[slot].functional;
      const double lvl = rolling.slots[slot].level;
      for (const auto& spec : cfg.score_specs(f, lvl)) {
        const auto series = zeroed_score_series(rep_cfg, rolling, slot, spec, nullptr);
        std::vector<double> m(series.size());
        for (std::size_t mi = 0; mi < series.size(); ++mi) m[mi] = mean(series[mi]);
        means[rep][key_idx] = std::move(m);
        ++key_idx;
      }
    }
  }

  for (std::size_t ki = 0; ki < keys.size(); ++ki) {
    ReplicationStudyResult::Block block;
    block.functional = keys[ki].f;
    block.level = keys[ki].level;
    block.score_id = keys[ki].score_id;
    std::vector<std::vector<double>> rep_means(replicates);
    block.ranks.resize(replicates);
    for (std::size_t rep = 0; rep < replicates; ++rep) {
      rep_means[rep] = means[rep][ki];
      // ranks: 1 = lowest mean score
      const auto& m = means[rep][ki];
      std::vector<std::size_t> order(m.size());
      for (std::size_t i = 0; i < m.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return m[a] < m[b]; });
      block.ranks[rep].resize(m.size());
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        block.ranks[rep][order[pos]] = static_cast<int>(pos) + 1;
      }
    }
    block.preferences = sign_preference_table(out.methods, rep_means);
    out.blocks.push_back(std::move(block));
  }
  return out;
}

std::string replication_ranks_csv(const ReplicationStudyResult& r) {
  std::ostringstream os;
  os << "functional,level,score_id,replicate";
  for (const auto& m : r.methods) os << "," << m;
  os << "\n";
  char buf[32];
  for (const auto& block : r.blocks) {
    for (std::size_t rep = 0; rep < block.ranks.size(); ++rep) {
      std::snprintf(buf, sizeof buf, "%g", block.level);
      os << functional_name(block.functional) << "," << buf << "," << block.score_id
         << "," << rep + 1;
      for (int rank : block.ranks[rep]) os << "," << rank;
      os << "\n";
    }
  }
  return os.str();
}

std::string replication_preferences_csv(const ReplicationStudyResult& r) {
  std::ostringstream os;
  os << "functional,level,score_id,method";
  for (const auto& m : r.methods) os << "," << m;
  os << "\n";
  char buf[32];
  const std::size_t n = r.methods.size();
  for (const auto& block : r.blocks) {
    for (std::size_t i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%g", block.level);
      os << functional_name(block.functional) << "," << buf << "," << block.score_id
         << "," << r.methods[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) {
          os << ",0";
        } else {
          char cell[32];
          std::snprintf(cell, sizeof cell, ",%.1f", block.preferences.percent[i * n + j]);
          os << cell;
        }
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace riskbt
