#include "riskbt/pipeline/runner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace riskbt {

namespace {

int family_index(InnovationFamily f) {
  switch (f) {
    case InnovationFamily::normal: return 0;
    case InnovationFamily::student_t: return 1;
    case InnovationFamily::skewed_t: return 2;
  }
  return 0;
}

std::vector<FunctionalSlot> make_slots(const RunConfig& cfg) {
  std::vector<FunctionalSlot> slots;
  for (Functional f : {Functional::var, Functional::expectile, Functional::var_es}) {
    for (double lvl : cfg.levels(f)) slots.push_back({f, lvl});
  }
  return slots;
}

// Risk of the standardized innovation per slot, one evaluation per window.
std::vector<RiskEstimate> stage2_risks(const MethodSpec& method,
                                       const FilterState& state,
                                       const std::vector<FunctionalSlot>& slots,
                                       const RunConfig& cfg, Rng& fhs_rng) {
  std::vector<RiskEstimate> out(slots.size());
  switch (method.stage2) {
    case Stage2::fp: {
      for (std::size_t s = 0; s < slots.size(); ++s) {
        out[s] = fp_risk(state, slots[s].functional, slots[s].level);
      }
      break;
    }
    case Stage2::fhs: {
      // One bootstrap resample reused across functionals and levels.
      std::vector<double> draw(cfg.fhs_resample);
      const std::size_t n = state.residuals.size();
      for (std::size_t i = 0; i < cfg.fhs_resample; ++i) {
        draw[i] = state.residuals[static_cast<std::size_t>(fhs_rng.below(n))];
      }
      for (std::size_t s = 0; s < slots.size(); ++s) {
        out[s] = fhs_risk(draw, slots[s].functional, slots[s].level, 0, fhs_rng,
                          /*resample=*/false);
      }
      break;
    }
    case Stage2::evt: {
      const EvtFit fit = evt_tail_fit(state.residuals, default_tail_count(state.residuals.size()));
      for (std::size_t s = 0; s < slots.size(); ++s) {
        const auto f = slots[s].functional;
        const double lvl = slots[s].level;
        if (f == Functional::var) {
          out[s].r1 = evt_var(fit, lvl);
        } else if (f == Functional::expectile) {
          out[s].r1 = evt_expectile(fit, state.residuals, lvl).value;
        } else {
          out[s].r1 = evt_var(fit, lvl);
          out[s].r2 = evt_es(fit, lvl);
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace

MethodSpec parse_method(const std::string& id) {
  MethodSpec m;
  m.id = id;
  if (id == "opt") {
    m.is_opt = true;
    return m;
  }
  const auto dash = id.find('-');
  if (dash == std::string::npos) throw std::invalid_argument("unknown method '" + id + "'");
  const std::string fam = id.substr(0, dash);
  const std::string stage = id.substr(dash + 1);
  if (fam == "n") m.family = InnovationFamily::normal;
  else if (fam == "t") m.family = InnovationFamily::student_t;
  else if (fam == "st") m.family = InnovationFamily::skewed_t;
  else throw std::invalid_argument("unknown method '" + id + "'");
  if (stage == "FP") m.stage2 = Stage2::fp;
  else if (stage == "FHS") m.stage2 = Stage2::fhs;
  else if (stage == "EVT") m.stage2 = Stage2::evt;
  else throw std::invalid_argument("unknown method '" + id + "'");
  return m;
}

RollingResult run_rolling(const RunConfig& cfg, std::span<const double> losses,
                          const OracleInfo* oracle) {
  cfg.validate();
  const std::size_t w = cfg.window;
  if (losses.size() < w + 30) {
    throw std::invalid_argument("run_rolling: need at least window + 30 observations");
  }
  const std::size_t m_out = losses.size() - w;

  RollingResult res;
  res.out_of_sample = m_out;
  res.slots = make_slots(cfg);
  for (const auto& id : cfg.methods) res.methods.push_back(parse_method(id));

  const bool needs_opt =
      std::any_of(res.methods.begin(), res.methods.end(),
                  [](const MethodSpec& m) { return m.is_opt; });
  if (needs_opt) {
    if (oracle == nullptr || oracle->mu.size() != m_out || oracle->sigma.size() != m_out) {
      throw std::invalid_argument("run_rolling: 'opt' requires an aligned oracle path");
    }
  }

  // Which innovation families have to be fitted.
  std::vector<InnovationFamily> families;
  for (const auto& m : res.methods) {
    if (!m.is_opt &&
        std::find(families.begin(), families.end(), m.family) == families.end()) {
      families.push_back(m.family);
    }
  }
  std::sort(families.begin(), families.end(),
            [](InnovationFamily a, InnovationFamily b) {
              return family_index(a) < family_index(b);
            });

  // Per-method slot forecasts, filled window by window.
  const std::size_t n_slots = res.slots.size();
  res.series.resize(res.methods.size() * n_slots);
  for (std::size_t mi = 0; mi < res.methods.size(); ++mi) {
    for (std::size_t s = 0; s < n_slots; ++s) {
      ForecastSeries& fs = res.series[mi * n_slots + s];
      fs.method = res.methods[mi].id;
      fs.functional = res.slots[s].functional;
      fs.level = res.slots[s].level;
      fs.r1.resize(m_out);
      fs.r2.assign(m_out, 0.0);
      fs.mu_hat.resize(m_out);
      fs.sigma_hat.resize(m_out);
      fs.x.resize(m_out);
      fs.flags.assign(m_out, 0u);
    }
  }

  // Oracle risks of the true standardized innovation, one evaluation total.
  std::vector<RiskEstimate> opt_rho(n_slots);
  if (needs_opt) {
    for (std::size_t s = 0; s < n_slots; ++s) {
      const auto f = res.slots[s].functional;
      const double lvl = res.slots[s].level;
      if (f == Functional::var) {
        opt_rho[s].r1 = oracle->innovation.quantile(lvl);
      } else if (f == Functional::expectile) {
        opt_rho[s].r1 = oracle->innovation.expectile(lvl);
      } else {
        opt_rho[s].r1 = oracle->innovation.quantile(lvl);
        opt_rho[s].r2 = oracle->innovation.expected_shortfall(lvl);
      }
    }
  }

  std::vector<std::size_t> carry_counts(families.size(), 0);

  // One family's whole rolling chain; `warm` selects the serial warm-start
  // chain, otherwise windows are independent (parallelizable).
  auto run_family = [&](std::size_t fam_pos) {
    const InnovationFamily fam = families[fam_pos];
    std::vector<FilterState> fits(m_out);
    if (cfg.warm_start && !cfg.parallel) {
      FilterState prev;
      bool have_prev = false;
      for (std::size_t t = 0; t < m_out; ++t) {
        const std::span<const double> win = losses.subspan(t, w);
        bool carried = false;
        try {
          FilterState st = fit_ar_garch_mle(win, fam, have_prev ? &prev : nullptr);
          if (!st.converged && have_prev) {
            carried = true;
          } else {
            fits[t] = std::move(st);
          }
        } catch (const std::exception&) {
          if (!have_prev) throw;  // the first window must fit
          carried = true;
        }
        if (carried) {
          fits[t] = filter_with_params(win, fam, prev.c, prev.phi, prev.omega,
                                       prev.alpha, prev.beta, prev.nu, prev.gamma);
          fits[t].converged = false;
          ++carry_counts[fam_pos];
        }
        prev = fits[t];
        have_prev = true;
      }
    } else {
      // Independent windows: moment starts only, deterministic in parallel.
      std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (cfg.parallel)
#endif
      for (long long ti = 0; ti < static_cast<long long>(m_out); ++ti) {
        const std::size_t t = static_cast<std::size_t>(ti);
        try {
          fits[t] = fit_ar_garch_mle(losses.subspan(t, w), fam, nullptr);
        } catch (const std::exception&) {
#ifdef _OPENMP
#pragma omp critical
#endif
          if (!error) error = std::current_exception();
        }
      }
      if (error) std::rethrow_exception(error);
    }

    // Stage 2 per window and method of this family.
    std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (cfg.parallel)
#endif
    for (long long ti = 0; ti < static_cast<long long>(m_out); ++ti) {
      const std::size_t t = static_cast<std::size_t>(ti);
      try {
        const FilterState& st = fits[t];
        const OneStepForecast one = forecast_one_step(st);
        for (std::size_t mi = 0; mi < res.methods.size(); ++mi) {
          const MethodSpec& method = res.methods[mi];
          if (method.is_opt || method.family != fam) continue;
          // FHS draws keyed by (seed, window, family): stable under changes
          // to the method list.
          Rng rng = substream(cfg.seed,
                              t * 8 + static_cast<std::size_t>(family_index(fam)) + 1);
          const std::vector<RiskEstimate> rho =
              stage2_risks(method, st, res.slots, cfg, rng);
          for (std::size_t s = 0; s < n_slots; ++s) {
            ForecastSeries& fs = res.series[mi * n_slots + s];
            fs.mu_hat[t] = one.mu;
            fs.sigma_hat[t] = one.sigma;
            fs.x[t] = losses[t + w];
            fs.r1[t] = one.mu + one.sigma * rho[s].r1;
            fs.r2[t] = res.slots[s].functional == Functional::var_es
                           ? one.mu + one.sigma * rho[s].r2
                           : 0.0;
            unsigned flag = st.converged ? 0u : kFlagCarriedForward;
            const bool positive_needed_value =
                res.slots[s].functional == Functional::var_es ? fs.r2[t] : fs.r1[t];
            if (positive_needed_value <= 0.0) flag |= kFlagNonPositiveForecast;
            fs.flags[t] = flag;
          }
        }
      } catch (const std::exception&) {
#ifdef _OPENMP
#pragma omp critical
#endif
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  };

  for (std::size_t fam_pos = 0; fam_pos < families.size(); ++fam_pos) {
    run_family(fam_pos);
  }
  for (std::size_t c : carry_counts) res.carried_forward += c;

  // The oracle forecaster.
  if (needs_opt) {
    for (std::size_t mi = 0; mi < res.methods.size(); ++mi) {
      if (!res.methods[mi].is_opt) continue;
      for (std::size_t s = 0; s < n_slots; ++s) {
        ForecastSeries& fs = res.series[mi * n_slots + s];
        for (std::size_t t = 0; t < m_out; ++t) {
          const double mu = oracle->mu[t];
          const double sig = oracle->sigma[t];
          fs.mu_hat[t] = mu;
          fs.sigma_hat[t] = sig;
          fs.x[t] = losses[t + w];
          fs.r1[t] = mu + sig * opt_rho[s].r1;
          fs.r2[t] = res.slots[s].functional == Functional::var_es
                         ? mu + sig * opt_rho[s].r2
                         : 0.0;
          const bool pos = res.slots[s].functional == Functional::var_es
                               ? fs.r2[t] > 0.0
                               : fs.r1[t] > 0.0;
          fs.flags[t] = pos ? 0u : kFlagNonPositiveForecast;
        }
      }
    }
  }
  return res;
}

}  // namespace riskbt
