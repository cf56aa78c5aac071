#include "riskbt/pipeline/reports.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskbt {

namespace {

IdentificationSpec ident_spec_for(Functional f, double level) {
  switch (f) {
    case Functional::var: return IdentificationSpec::var(level);
    case Functional::expectile: return IdentificationSpec::expectile(level);
    case Functional::var_es: return IdentificationSpec::var_es(level);
  }
  throw std::logic_error("ident_spec_for: bad functional");
}

TestFunctionSpec general_two_sided_builder(Functional f) {
  switch (f) {
    case Functional::var: return {TestFunctionKind::var_standard, 1};
    case Functional::expectile: return {TestFunctionKind::inverse_sigma, 1};
    case Functional::var_es: return {TestFunctionKind::mcneil_frey, 1};
  }
  throw std::logic_error("builder: bad functional");
}

TestFunctionSpec general_one_sided_builder(Functional f) {
  switch (f) {
    case Functional::var: return {TestFunctionKind::var_abs, 1};
    case Functional::expectile: return {TestFunctionKind::inverse_sigma, 1};
    case Functional::var_es: return {TestFunctionKind::one_sided_block_diag, 1};
  }
  throw std::logic_error("builder: bad functional");
}

// Super-calibration for VaR and expectiles, sub-calibration for (VaR,ES).
CalibrationSide one_sided_side(Functional f) {
  return f == Functional::var_es ? CalibrationSide::sub : CalibrationSide::super;
}

}  // namespace

std::vector<IdentValue> identification_series(const ForecastSeries& fs) {
  const IdentificationSpec spec = ident_spec_for(fs.functional, fs.level);
  const std::size_t n = fs.x.size();
  std::vector<IdentValue> v(n);
  for (std::size_t t = 0; t < n; ++t) {
    v[t] = fs.functional == Functional::var_es
               ? identify(spec, fs.r1[t], fs.r2[t], fs.x[t])
               : identify(spec, fs.r1[t], fs.x[t]);
  }
  return v;
}

std::vector<std::vector<double>> zeroed_score_series(
    const RunConfig& cfg, const RollingResult& rolling, std::size_t slot,
    const ScoreSpec& spec, std::size_t* zeroed_out) {
  const std::size_t n_methods = rolling.methods.size();
  const std::size_t n = rolling.out_of_sample;
  const Functional f = rolling.slots[slot].functional;
  (void)cfg;

  // All-or-none zero mask per timestamp.
  std::vector<bool> zero_mask(n, false);
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    const ForecastSeries& fs = rolling.at(mi, slot);
    for (std::size_t t = 0; t < n; ++t) {
      const double must_be_positive = f == Functional::var_es ? fs.r2[t] : fs.r1[t];
      if (must_be_positive <= 0.0) zero_mask[t] = true;
    }
  }
  std::size_t zeroed = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (zero_mask[t]) ++zeroed;
  }
  if (zeroed_out != nullptr) *zeroed_out = zeroed;

  std::vector<std::vector<double>> out(n_methods, std::vector<double>(n, 0.0));
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    const ForecastSeries& fs = rolling.at(mi, slot);
    for (std::size_t t = 0; t < n; ++t) {
      if (zero_mask[t]) continue;
      out[mi][t] = f == Functional::var_es
                       ? score(spec, fs.r1[t], fs.r2[t], fs.x[t])
                       : score(spec, fs.r1[t], fs.x[t]);
    }
  }
  return out;
}

ReportBundle build_reports(const RunConfig& cfg, const RollingResult& rolling) {
  ReportBundle bundle;
  bundle.config = cfg;
  bundle.out_of_sample = rolling.out_of_sample;
  bundle.carried_forward = rolling.carried_forward;

  std::vector<std::string> method_ids;
  for (const auto& m : rolling.methods) method_ids.push_back(m.id);

  for (std::size_t slot = 0; slot < rolling.slots.size(); ++slot) {
    const Functional f = rolling.slots[slot].functional;
    const double level = rolling.slots[slot].level;
    const int k = f == Functional::var_es ? 2 : 1;
    const std::vector<ScoreSpec> specs = cfg.score_specs(f, level);

    // ------------------------------------------------------------ summary
    SummaryTable summary;
    summary.functional = f;
    summary.level = level;
    for (const auto& s : specs) summary.score_ids.push_back(s.id());

    std::vector<std::vector<std::vector<double>>> all_scores;  // [spec][method][t]
    std::size_t zeroed = 0;
    for (const auto& s : specs) {
      all_scores.push_back(zeroed_score_series(cfg, rolling, slot, s, &zeroed));
    }
    bundle.zeroing.push_back({f, level, zeroed});

    std::vector<std::vector<MethodRank>> ranks_per_spec;
    for (std::size_t si = 0; si < specs.size(); ++si) {
      ranks_per_spec.push_back(rank_by_mean_score(method_ids, all_scores[si], level));
    }

    for (std::size_t mi = 0; mi < rolling.methods.size(); ++mi) {
      const ForecastSeries& fs = rolling.at(mi, slot);
      SummaryRow row;
      row.method = fs.method;
      double fsum = 0.0;
      std::size_t viol = 0;
      for (std::size_t t = 0; t < rolling.out_of_sample; ++t) {
        fsum += f == Functional::var_es ? fs.r2[t] : fs.r1[t];
        if (fs.x[t] > fs.r1[t]) ++viol;
      }
      row.mean_forecast = fsum / static_cast<double>(rolling.out_of_sample);
      row.pct_violations = f == Functional::var
                               ? 100.0 * static_cast<double>(viol) /
                                     static_cast<double>(rolling.out_of_sample)
                               : std::numeric_limits<double>::quiet_NaN();
      for (std::size_t si = 0; si < specs.size(); ++si) {
        row.scaled_mean_scores.push_back(ranks_per_spec[si][mi].scaled_mean_score);
        row.ranks.push_back(ranks_per_spec[si][mi].rank);
      }
      summary.rows.push_back(std::move(row));
    }
    bundle.summaries.push_back(std::move(summary));

    // ------------------------------------------------------------ p-values
    PValueTable ptable;
    ptable.functional = f;
    ptable.level = level;
    for (std::size_t mi = 0; mi < rolling.methods.size(); ++mi) {
      const ForecastSeries& fs = rolling.at(mi, slot);
      const std::vector<IdentValue> v = identification_series(fs);
      TestFunctionInputs inputs;
      inputs.forecast_r1 = fs.r1;
      inputs.forecast_r2 = fs.r2;
      inputs.sigma_hat = fs.sigma_hat;
      inputs.ident_values = v;
      inputs.level = level;

      PValueRow row;
      row.method = fs.method;
      const auto h_simple =
          build_test_functions({TestFunctionKind::constant, 1}, k, v.size(), inputs);
      row.two_sided_simple = two_sided_cct(v, k, h_simple.h);
      row.one_sided_simple = one_sided_cct(v, k, h_simple.h, one_sided_side(f));

      const auto h_gen2 =
          build_test_functions(general_two_sided_builder(f), k, v.size(), inputs);
      row.two_sided_general = two_sided_cct(v, k, h_gen2.h);
      const auto h_gen1 =
          build_test_functions(general_one_sided_builder(f), k, v.size(), inputs);
      row.one_sided_general = one_sided_cct(v, k, h_gen1.h, one_sided_side(f));
      ptable.rows.push_back(std::move(row));
    }
    bundle.pvalues.push_back(std::move(ptable));

    // ------------------------------------------------------------ traffic
    for (std::size_t si = 0; si < specs.size(); ++si) {
      TrafficEntry entry;
      entry.functional = f;
      entry.level = level;
      entry.score_id = specs[si].id();
      entry.matrix = traffic_light_matrix(method_ids, all_scores[si], cfg.eta,
                                          HacPolicy{cfg.hac_lags});
      bundle.traffic.push_back(std::move(entry));
    }
  }
  return bundle;
}

}  // namespace riskbt
