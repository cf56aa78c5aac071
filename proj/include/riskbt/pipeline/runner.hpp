// Rolling-window forecast production. For every out-of-sample time t the
// filter is fitted on the preceding `window` observations only; the
// verifying observation never enters the fit (anti-lookahead by
// construction). Methods are the paper-style combinations
// {n,t,st} x {FP,FHS,EVT} plus "opt", the oracle forecaster available for
// simulated input.
//
// Fits can run as a serial warm-start chain (each window starts from the
// previous fit) or as independent window problems using moment starts only;
// the independent form is identical serial or OpenMP-parallel, which is what
// makes parallel runs reproducible at any thread count.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskbt/estimators.hpp"
#include "riskbt/evt.hpp"
#include "riskbt/garch.hpp"
#include "riskbt/pipeline/config.hpp"

namespace riskbt {

enum class Stage2 { fp, fhs, evt };

struct MethodSpec {
  std::string id;
  bool is_opt = false;
  InnovationFamily family = InnovationFamily::normal;
  Stage2 stage2 = Stage2::fp;
};

MethodSpec parse_method(const std::string& id);

// Forecast flags per timestamp.
inline constexpr unsigned kFlagCarriedForward = 1u;
inline constexpr unsigned kFlagNonPositiveForecast = 2u;

struct ForecastSeries {
  std::string method;
  Functional functional = Functional::var;
  double level = 0.0;
  std::vector<double> r1;         // VaR / expectile forecasts
  std::vector<double> r2;         // ES forecasts ((VaR,ES) only)
  std::vector<double> mu_hat;     // predicted conditional means
  std::vector<double> sigma_hat;  // predicted conditional volatilities
  std::vector<double> x;          // realized losses at the verify points
  std::vector<unsigned> flags;
};

struct OracleInfo {
  std::vector<double> mu;     // true conditional means at the verify points
  std::vector<double> sigma;  // true conditional volatilities
  Distribution innovation = Distribution::normal(0.0, 1.0);
};

struct FunctionalSlot {
  Functional functional;
  double level;
};

struct RollingResult {
  std::vector<MethodSpec> methods;
  std::vector<FunctionalSlot> slots;
  // series[m * slots.size() + s]
  std::vector<ForecastSeries> series;
  std::size_t out_of_sample = 0;
  std::size_t carried_forward = 0;  // total carry-forward events

  const ForecastSeries& at(std::size_t method, std::size_t slot) const {
    return series[method * slots.size() + slot];
  }
};

// losses: full input series (window + out-of-sample). oracle: required when
// the method list contains "opt"; its vectors must align with the verify
// points losses[window..].
RollingResult run_rolling(const RunConfig& cfg, std::span<const double> losses,
                          const OracleInfo* oracle);

}  // namespace riskbt
