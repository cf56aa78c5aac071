// Command-line interface: rolling backtests on CSV losses, the simulation
// study, the motivating magician-vs-historians experiment, the small
// out-of-sample replication study and a quick self-check battery.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riskbt/evt.hpp"
#include "riskbt/pipeline/experiments.hpp"

namespace {

using namespace riskbt;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> methods;
  std::vector<std::string> levels;  // "var:0.9,0.99" style
  std::vector<std::string> scores;
  std::vector<std::string> formats;
  double eta = -1.0;
  long long seed = -1;
  int hac = -999;
  long long window = -1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "configuration file (key = value sections)");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--window", f.window, "moving estimation window length");
  cmd->add_option("--methods", f.methods, "comma list, e.g. n-FP,st-EVT,opt")
      ->delimiter(',');
  cmd->add_option("--levels", f.levels,
                  "levels per functional, e.g. var:0.9,0.99 (repeatable)");
  cmd->add_option("--scores", f.scores, "score variants: homogeneous,zero")
      ->delimiter(',');
  cmd->add_option("--eta", f.eta, "test level for the three-zone decisions");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--hac", f.hac, "HAC lags (0 = sample variance, -1 = n^{1/3})");
  cmd->add_option("--format", f.formats, "output formats: csv,svg,term")->delimiter(',');
}

RunConfig make_config(const CommonFlags& f) {
  RunConfig cfg;
  if (!f.config_path.empty()) cfg = load_config_file(f.config_path);
  if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
  if (f.window > 0) cfg.window = static_cast<std::size_t>(f.window);
  if (!f.methods.empty()) cfg.methods = f.methods;
  if (!f.scores.empty()) cfg.scores = f.scores;
  if (!f.formats.empty()) cfg.formats = f.formats;
  if (f.eta > 0.0) cfg.eta = f.eta;
  if (f.seed >= 0) cfg.seed = static_cast<std::uint64_t>(f.seed);
  if (f.hac != -999) cfg.hac_lags = f.hac;
  for (const auto& spec : f.levels) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
      throw CLI::ValidationError("--levels expects functional:l1,l2,...");
    }
    const std::string name = spec.substr(0, colon);
    std::vector<double> lvls;
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) lvls.push_back(std::stod(tok));
    if (name == "var") cfg.var_levels = lvls;
    else if (name == "expectile") cfg.expectile_levels = lvls;
    else if (name == "var-es") cfg.vares_levels = lvls;
    else throw CLI::ValidationError("--levels: unknown functional '" + name + "'");
  }
  return cfg;
}

int run_validate() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++failures;
  };
  const std::vector<Distribution> dists = {
      Distribution::normal(0.3, 1.4),
      Distribution::exponential(0.7),
      Distribution::student_t(5.0),
      Distribution::pareto(3.5),
      Distribution::gpd(1.0, 0.2),
      Distribution::skewed_t(5.0, 1.5),
      Distribution::ast(0.4, 5.0, 7.0),
  };
  for (const auto& d : dists) {
    check(std::fabs(d.expectile_curve(d.mean()) - 0.5) < 1e-9,
          "expectile curve at the mean is 1/2: " + d.name());
    const double e = d.expectile(0.5);
    check(std::fabs(e - d.mean()) < 1e-9, "expectile(1/2) equals the mean: " + d.name());
    bool ok = true;
    for (int i = 1; i < 6; ++i) {
      const double z = d.quantile(0.15 * i);
      if (std::fabs(d.expectile_curve(z) - d.expectile_curve_generic(z)) > 1e-6) ok = false;
      if (std::fabs(d.omega_ratio(z) - (1.0 / d.expectile_curve(z) - 1.0)) > 1e-8) ok = false;
    }
    check(ok, "closed-form curve matches the partial-moment form: " + d.name());
  }
  Rng rng(7);
  check(validate_homogeneity(ScoreSpec::var_linear(0.99), 200, rng).degree_confirmed,
        "VaR linear score is 1-homogeneous");
  check(validate_homogeneity(ScoreSpec::expectile_quadratic(0.99), 200, rng).degree_confirmed,
        "expectile quadratic score is 2-homogeneous");
  check(validate_homogeneity(ScoreSpec::vares_sqrt(0.975), 200, rng).degree_confirmed,
        "(VaR,ES) sqrt score is 1/2-homogeneous");
  check(validate_homogeneity(ScoreSpec::var_log(0.99), 200, rng).degree_confirmed,
        "VaR log score differences are 0-homogeneous");
  {
    std::vector<double> diffs(200);
    Rng r2(11);
    for (auto& d : diffs) d = r2.uniform01() - 0.2;
    const auto v = dm_test(diffs, 0.05);
    std::vector<double> neg(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) neg[i] = -diffs[i];
    const auto vn = dm_test(neg, 0.05);
    check(std::fabs(v.dm_statistic + vn.dm_statistic) < 1e-12 &&
              ((v.zone == Zone::red && vn.zone == Zone::green) ||
               (v.zone == Zone::green && vn.zone == Zone::red) ||
               (v.zone == Zone::yellow && vn.zone == Zone::yellow)),
          "negating score differences swaps the red/green zones");
  }
  check(std::fabs(binomial_var_test(0, 250, 0.99, BinomialSide::sub).p_value -
                  std::pow(0.99, 250)) < 1e-12,
        "exact binomial: zero exceedances, sub side");
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"risk measure backtesting: calibration tests, comparative "
               "backtests and AR-GARCH risk forecasting"};
  app.require_subcommand(1);

  CommonFlags bt_flags;
  std::string csv_path;
  bool loss_column = false;
  auto* bt = app.add_subcommand("backtest", "rolling backtest on a CSV loss series");
  add_common(bt, bt_flags);
  bt->add_option("--csv", csv_path, "input CSV (price or loss column)");
  bt->add_flag("--losses", loss_column, "treat the value column as losses, not prices");

  CommonFlags sim_flags;
  std::string scale = "reduced";
  long long oos_override = -1;
  auto* sim = app.add_subcommand("simulate", "simulation study on the AR-GARCH DGP");
  add_common(sim, sim_flags);
  sim->add_option("--scale", scale, "reduced (out-of-sample 1000) or full (5000)");
  sim->add_option("--oos", oos_override, "explicit out-of-sample length");

  CommonFlags aa_flags;
  long long aa_length = 5000;
  auto* aa = app.add_subcommand("appendix-a", "magician vs historians experiment");
  add_common(aa, aa_flags);
  aa->add_option("--length", aa_length, "number of evaluation points");

  CommonFlags ad_flags;
  long long ad_reps = 200, ad_oos = 250;
  auto* ad = app.add_subcommand("appendix-d", "small out-of-sample replication study");
  add_common(ad, ad_flags);
  ad->add_option("--replicates", ad_reps, "number of replicates");
  ad->add_option("--oos", ad_oos, "verifying observations per replicate");

  app.add_subcommand("validate", "run the quick property-check battery");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bt->parsed()) {
      RunConfig cfg = make_config(bt_flags);
      if (!csv_path.empty()) cfg.csv_path = csv_path;
      if (loss_column) cfg.prices_to_losses = false;
      run_csv_backtest(cfg, /*emit=*/true);
      std::printf("reports written to %s\n", cfg.out_dir.c_str());
      return 0;
    }
    if (sim->parsed()) {
      RunConfig cfg = make_config(sim_flags);
      cfg.simulate = true;
      if (scale == "full") cfg.out_of_sample = 5000;
      else if (scale == "reduced") cfg.out_of_sample = 1000;
      else throw CLI::ValidationError("--scale must be reduced or full");
      if (oos_override > 0) cfg.out_of_sample = static_cast<std::size_t>(oos_override);
      run_simulation_study(cfg, /*emit=*/true);
      std::printf("reports written to %s\n", cfg.out_dir.c_str());
      return 0;
    }
    if (aa->parsed()) {
      const RunConfig cfg = make_config(aa_flags);
      const auto result = run_motivating_experiment(
          static_cast<std::size_t>(aa_length),
          aa_flags.seed >= 0 ? static_cast<std::uint64_t>(aa_flags.seed) : 1);
      std::filesystem::create_directories(cfg.out_dir);
      write_text(cfg.out_dir + "/forecaster_comparison.csv", motivating_csv(result));
      std::printf("%s", motivating_csv(result).c_str());
      std::printf("ordering inversion observed: %s\n",
                  result.exceedance_ordering_inverted ? "yes" : "no");
      return 0;
    }
    if (ad->parsed()) {
      RunConfig cfg = make_config(ad_flags);
      const auto result = run_replication_study(
          static_cast<std::size_t>(ad_reps), static_cast<std::size_t>(ad_oos),
          ad_flags.seed >= 0 ? static_cast<std::uint64_t>(ad_flags.seed) : 1, cfg);
      std::filesystem::create_directories(cfg.out_dir);
      write_text(cfg.out_dir + "/replication_ranks.csv", replication_ranks_csv(result));
      write_text(cfg.out_dir + "/replication_preferences.csv",
                 replication_preferences_csv(result));
      std::printf("replication tables written to %s\n", cfg.out_dir.c_str());
      return 0;
    }
    return run_validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
