#include "riskbt/garch.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "riskbt/optim.hpp"
#include "riskbt/special.hpp"
#include "riskbt/stats.hpp"

namespace riskbt {

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }
double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Per-family density constants for the standardized innovation; computing
// them once per parameter vector keeps the likelihood loop tight.
struct DensityConsts {
  InnovationFamily family;
  double nu = 0.0, gamma = 1.0;
  double log_norm = 0.0;   // additive constant
  double scale = 1.0;      // t: sqrt(nu/(nu-2)); skewed-t: sd of the raw law
  double loc = 0.0;        // skewed-t: mean of the raw law
  double half_nu_p1 = 0.0;

  double log_density(double z) const {
    switch (family) {
      case InnovationFamily::normal:
        return -0.5 * z * z - 0.91893853320467274178;  // log sqrt(2 pi)
      case InnovationFamily::student_t: {
        const double u = scale * z;
        return log_norm - half_nu_p1 * std::log1p(u * u / nu);
      }
      case InnovationFamily::skewed_t: {
        const double y = loc + scale * z;
        const double u = y <= 0.0 ? gamma * y : y / gamma;
        return log_norm - half_nu_p1 * std::log1p(u * u / nu);
      }
    }
    return 0.0;
  }
};

DensityConsts make_density(InnovationFamily fam, double nu, double gamma) {
  DensityConsts d;
  d.family = fam;
  d.nu = nu;
  d.gamma = gamma;
  if (fam == InnovationFamily::normal) return d;
  const double log_knu = log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) -
                         0.5 * std::log(nu * std::numbers::pi);
  d.half_nu_p1 = 0.5 * (nu + 1.0);
  if (fam == InnovationFamily::student_t) {
    d.scale = std::sqrt(nu / (nu - 2.0));
    d.log_norm = log_knu + std::log(d.scale);
    return d;
  }
  // skewed-t: standardize the Fernandez-Steel law with closed-form moments.
  const double knu = std::exp(log_knu);
  const double m = 2.0 * knu * nu / (nu - 1.0) * (gamma - 1.0 / gamma);
  const double g2 = gamma * gamma;
  const double a = nu / (nu - 2.0) * (1.0 - 3.0 * g2 / ((1.0 + g2) * (1.0 + g2)));
  const double b = 4.0 * knu * knu * (nu / (nu - 1.0)) * (nu / (nu - 1.0)) *
                   (1.0 - 2.0 / (1.0 + g2)) * (1.0 - 2.0 / (1.0 + g2));
  const double var = (a - b) * (gamma + 1.0 / gamma) * (gamma + 1.0 / gamma);
  d.loc = m;
  d.scale = std::sqrt(var);
  d.log_norm = log_knu + std::log(2.0 / (gamma + 1.0 / gamma)) + std::log(d.scale);
  return d;
}

struct ThetaView {
  double c, phi, omega, alpha, beta, nu, gamma;
};

std::size_t param_count(InnovationFamily fam) {
  switch (fam) {
    case InnovationFamily::normal: return 5;
    case InnovationFamily::student_t: return 6;
    case InnovationFamily::skewed_t: return 7;
  }
  return 5;
}

ThetaView decode(InnovationFamily fam, const std::vector<double>& u) {
  ThetaView t;
  t.c = u[0];
  t.phi = std::tanh(u[1]);
  t.omega = std::exp(u[2]);
  const double persist = sigmoid(u[3]);
  const double share = sigmoid(u[4]);
  t.alpha = persist * share;
  t.beta = persist * (1.0 - share);
  t.nu = fam == InnovationFamily::normal ? 0.0 : 2.0 + std::exp(u[5]);
  t.gamma = fam == InnovationFamily::skewed_t ? std::exp(u[6]) : 1.0;
  return t;
}

std::vector<double> encode(InnovationFamily fam, double c, double phi, double omega,
                           double alpha, double beta, double nu, double gamma) {
  std::vector<double> u(param_count(fam));
  u[0] = c;
  u[1] = std::atanh(std::clamp(phi, -0.995, 0.995));
  u[2] = std::log(std::max(omega, 1e-12));
  const double persist = std::clamp(alpha + beta, 1e-6, 0.9999);
  const double share = std::clamp(alpha / persist, 1e-6, 1.0 - 1e-6);
  u[3] = logit(persist);
  u[4] = logit(share);
  if (fam != InnovationFamily::normal) u[5] = std::log(std::max(nu - 2.0, 1e-3));
  if (fam == InnovationFamily::skewed_t) u[6] = std::log(std::max(gamma, 1e-3));
  return u;
}

// Negative conditional log-likelihood over t = 2..n given the window.
double negative_ll(std::span<const double> x, double eps1, double sigma1_sq,
                   const ThetaView& th, const DensityConsts& dens) {
  const std::size_t n = x.size();
  double eps_prev = eps1;
  double sig2_prev = sigma1_sq;
  double ll = 0.0;
  for (std::size_t t = 1; t < n; ++t) {
    const double mu = th.c + th.phi * x[t - 1];
    const double eps = x[t] - mu;
    const double sig2 = th.omega + th.alpha * eps_prev * eps_prev + th.beta * sig2_prev;
    if (!(sig2 > 0.0) || !std::isfinite(sig2)) return 1e100;
    const double sig = std::sqrt(sig2);
    ll += dens.log_density(eps / sig) - 0.5 * std::log(sig2);
    eps_prev = eps;
    sig2_prev = sig2;
  }
  return -ll;
}

}  // namespace

std::string innovation_family_name(InnovationFamily f) {
  switch (f) {
    case InnovationFamily::normal: return "normal";
    case InnovationFamily::student_t: return "t";
    case InnovationFamily::skewed_t: return "st";
  }
  return "?";
}

void ArGarchParams::validate() const {
  if (!(std::fabs(ar_coef) < 1.0)) throw std::domain_error("ar_garch: |phi| < 1 required");
  if (!(omega > 0.0)) throw std::domain_error("ar_garch: omega > 0 required");
  if (alpha < 0.0 || beta < 0.0) throw std::domain_error("ar_garch: alpha, beta >= 0 required");
  if (!(alpha + beta < 1.0)) throw std::domain_error("ar_garch: alpha + beta < 1 required");
  if (!innovation.is_standardized() &&
      !(innovation.family() == DistFamily::normal && innovation.mean() == 0.0 &&
        innovation.variance() == 1.0)) {
    throw std::domain_error("ar_garch: innovation must be standardized");
  }
}

SimPath simulate_ar_garch(const ArGarchParams& params, std::size_t n,
                          std::size_t burnin, Rng& rng) {
  params.validate();
  SimPath out;
  out.x.resize(n);
  out.mu.resize(n);
  out.sigma.resize(n);
  const std::size_t total = n + burnin;
  double x_prev = params.ar_intercept / (1.0 - params.ar_coef);
  double sig2_prev = params.stationary_eps_variance();
  double eps_prev = 0.0;
  for (std::size_t t = 0; t < total; ++t) {
    const double mu = params.ar_intercept + params.ar_coef * x_prev;
    const double sig2 = t == 0 ? sig2_prev
                               : params.omega + params.alpha * eps_prev * eps_prev +
                                     params.beta * sig2_prev;
    const double sig = std::sqrt(sig2);
    const double z = params.innovation.sample_one(rng);
    const double eps = sig * z;
    const double x = mu + eps;
    if (t >= burnin) {
      out.x[t - burnin] = x;
      out.mu[t - burnin] = mu;
      out.sigma[t - burnin] = sig;
    }
    x_prev = x;
    eps_prev = eps;
    sig2_prev = sig2;
  }
  return out;
}

Distribution FilterState::innovation_distribution() const {
  switch (family) {
    case InnovationFamily::normal:
      return Distribution::normal(0.0, 1.0);
    case InnovationFamily::student_t:
      return Distribution::student_t(nu).standardized();
    case InnovationFamily::skewed_t:
      return Distribution::skewed_t(nu, gamma).standardized();
  }
  throw std::logic_error("innovation_distribution: unknown family");
}

FilterState filter_with_params(std::span<const double> window,
                               InnovationFamily family, double c, double phi,
                               double omega, double alpha, double beta, double nu,
                               double gamma) {
  const std::size_t n = window.size();
  if (n < 2) throw std::invalid_argument("filter: window too short");
  FilterState st;
  st.family = family;
  st.c = c;
  st.phi = phi;
  st.omega = omega;
  st.alpha = alpha;
  st.beta = beta;
  st.nu = nu;
  st.gamma = gamma;
  st.mu_hat.resize(n);
  st.sigma_hat.resize(n);
  st.residuals.resize(n);

  const double xbar = mean(window);
  const double s2 = sample_variance(window);
  const DensityConsts dens = make_density(family, nu, gamma);

  double eps_prev = window[0] - xbar;
  double sig2_prev = s2;
  st.mu_hat[0] = xbar;
  st.sigma_hat[0] = std::sqrt(s2);
  st.residuals[0] = eps_prev / st.sigma_hat[0];
  double ll = 0.0;
  for (std::size_t t = 1; t < n; ++t) {
    const double mu = c + phi * window[t - 1];
    const double eps = window[t] - mu;
    const double sig2 = omega + alpha * eps_prev * eps_prev + beta * sig2_prev;
    const double sig = std::sqrt(sig2);
    st.mu_hat[t] = mu;
    st.sigma_hat[t] = sig;
    st.residuals[t] = eps / sig;
    ll += dens.log_density(eps / sig) - std::log(sig);
    eps_prev = eps;
    sig2_prev = sig2;
  }
  st.log_likelihood = ll;
  st.next_mu = c + phi * window[n - 1];
  st.next_sigma = std::sqrt(omega + alpha * eps_prev * eps_prev + beta * sig2_prev);
  st.converged = true;
  return st;
}

FilterState fit_ar_garch_mle(std::span<const double> window, InnovationFamily family,
                             const FilterState* warm_start) {
  const std::size_t n = window.size();
  if (n < 250) throw std::invalid_argument("fit_ar_garch_mle: window length >= 250 required");
  const double s2 = sample_variance(window);
  if (!(s2 > 1e-300)) {
    throw std::runtime_error("fit_ar_garch_mle: constant window, degenerate likelihood");
  }
  const double xbar = mean(window);
  const double eps1 = window[0] - xbar;

  auto objective = [&](const std::vector<double>& u) {
    const ThetaView th = decode(family, u);
    if (!std::isfinite(th.omega) || th.omega > 1e6 * s2 || th.nu > 500.0) return 1e100;
    const DensityConsts dens = make_density(family, th.nu, th.gamma);
    return negative_ll(window, eps1, s2, th, dens);
  };

  // Moment start: AR(1) from the lag-1 autocorrelation, variance targeting
  // for omega at persistence 0.9.
  double acf1 = 0.0;
  {
    double num = 0.0, den = 0.0;
    for (std::size_t t = 1; t < n; ++t) num += (window[t] - xbar) * (window[t - 1] - xbar);
    for (std::size_t t = 0; t < n; ++t) den += (window[t] - xbar) * (window[t] - xbar);
    acf1 = std::clamp(num / den, -0.9, 0.9);
  }
  const double eps_var = std::max(s2 * (1.0 - acf1 * acf1), 1e-10);
  std::vector<std::vector<double>> starts;
  if (warm_start != nullptr && warm_start->family == family) {
    starts.push_back(encode(family, warm_start->c, warm_start->phi, warm_start->omega,
                            warm_start->alpha, warm_start->beta, warm_start->nu,
                            warm_start->gamma));
  }
  starts.push_back(encode(family, xbar * (1.0 - acf1), acf1, 0.1 * eps_var, 0.09,
                          0.81, 8.0, 1.0));
  if (warm_start == nullptr) {
    starts.push_back(encode(family, xbar * (1.0 - acf1), acf1, 0.5 * eps_var, 0.10,
                            0.40, 6.0, 1.0));
  }

  const std::size_t dim = param_count(family);
  std::vector<double> step(dim, 0.25);
  step[0] = 0.1 * std::sqrt(s2) + 1e-4;

  NelderMeadResult best;
  best.fmin = 1e200;
  bool any_converged = false;
  for (const auto& s : starts) {
    NelderMeadResult r = nelder_mead(objective, s, step, 1e-8, 4000);
    // One shrunken restart polishes the incumbent.
    std::vector<double> small_step(dim, 0.02);
    small_step[0] = 0.01 * std::sqrt(s2) + 1e-5;
    NelderMeadResult r2 = nelder_mead(objective, r.x, small_step, 1e-8, 2000);
    if (r2.fmin < r.fmin) r = r2;
    any_converged = any_converged || r.converged;
    if (r.fmin < best.fmin) best = r;
  }
  if (best.fmin >= 1e100) {
    throw std::runtime_error("fit_ar_garch_mle: likelihood evaluation failed");
  }

  const ThetaView th = decode(family, best.x);
  FilterState st = filter_with_params(window, family, th.c, th.phi, th.omega,
                                      th.alpha, th.beta, th.nu, th.gamma);
  st.converged = any_converged;
  return st;
}

OneStepForecast forecast_one_step(const FilterState& state) {
  return {state.next_mu, state.next_sigma};
}

}  // namespace riskbt
