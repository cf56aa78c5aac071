// Canned experiments: the simulation study (AR(1)-GARCH(1,1) with
// standardized skewed-t(5, 1.5) innovations, mu_t = -0.05 + 0.3 X_{t-1},
// sigma_t^2 = 0.01 + 0.1 eps_{t-1}^2 + 0.85 sigma_{t-1}^2), the
// magician-vs-historians comparison on a zero-mean GARCH with scaled-t(4)
// innovations, and the small-out-of-sample replication study.
#pragma once

#include <cstdint>

#include "riskbt/pipeline/emit.hpp"
#include "riskbt/pipeline/runner.hpp"

namespace riskbt {

// The simulation-study data generating process.
ArGarchParams simulation_dgp();

// GARCH(1,1) of the motivating experiment: sigma_t^2 = 0.05 + 0.20 X_{t-1}^2
// + 0.75 sigma_{t-1}^2 with innovations t(4)/sqrt(2).
ArGarchParams motivating_dgp();

struct SimulatedRun {
  std::vector<double> losses;  // window + out-of-sample
  OracleInfo oracle;           // aligned with the verify points
};

SimulatedRun simulate_run_input(const ArGarchParams& dgp, std::size_t window,
                                std::size_t out_of_sample, std::size_t burnin,
                                std::uint64_t seed);

// Full simulation-study pipeline: simulate, run every configured method,
// build and (optionally) emit the report bundle.
ReportBundle run_simulation_study(const RunConfig& cfg, bool emit);

// CSV-input backtest.
ReportBundle run_csv_backtest(const RunConfig& cfg, bool emit);

// ---------------------------------------------------------------------------
// Motivating experiment: magician vs historian-n
// ---------------------------------------------------------------------------

struct ForecasterComparison {
  std::string forecaster;        // "magician", "historian-250", ...
  double pct_exceedances = 0.0;  // of the VaR_0.99 forecasts
  double mean_var_score = 0.0;   // 1-homogeneous VaR score at 0.99
  double mean_exceedance_residual = 0.0;  // (VaR,ES) at 0.975, true sigma_t
  double mean_vares_score = 0.0;          // G1(r)=r, calG2 = log(1+e^r)
};

struct MotivatingResult {
  std::size_t length = 0;
  std::uint64_t seed = 0;
  std::vector<ForecasterComparison> rows;
  // True when the best %-exceedance forecaster differs from the best
  // mean-score forecaster (the ordering inversion the experiment is about).
  bool exceedance_ordering_inverted = false;
};

MotivatingResult run_motivating_experiment(std::size_t length, std::uint64_t seed);

std::string motivating_csv(const MotivatingResult& r);

// ---------------------------------------------------------------------------
// Small out-of-sample replication study
// ---------------------------------------------------------------------------

struct ReplicationStudyResult {
  std::vector<std::string> methods;
  // One entry per (functional, level, score id): rank distributions and
  // sign-preference percentages over the replicates.
  struct Block {
    Functional functional;
    double level;
    std::string score_id;
    std::vector<std::vector<int>> ranks;           // [replicate][method]
    SignPreferenceTable preferences;
  };
  std::vector<Block> blocks;
  std::size_t replicates = 0;
  std::size_t out_of_sample = 0;
};

ReplicationStudyResult run_replication_study(std::size_t replicates,
                                             std::size_t out_of_sample,
                                             std::uint64_t seed,
                                             const RunConfig& base);

std::string replication_ranks_csv(const ReplicationStudyResult& r);
std::string replication_preferences_csv(const ReplicationStudyResult& r);

}  // namespace riskbt
