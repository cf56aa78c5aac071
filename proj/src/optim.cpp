#include "riskbt/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace riskbt {

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const std::vector<double>& step, double tol,
    int max_evaluations) {
  const std::size_t n = x0.size();
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : 1e100;
  };
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  NelderMeadResult out;
  while (evals < max_evaluations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0], worst = order[n], second = order[n - 1];
    if (fv[worst] - fv[best] < tol) {
      out.converged = true;
      break;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        if (i != worst) s += pts[i][j];
      centroid[j] = s / n;
    }
    for (std::size_t j = 0; j < n; ++j)
      xr[j] = centroid[j] + alpha * (centroid[j] - pts[worst][j]);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      for (std::size_t j = 0; j < n; ++j)
        xe[j] = centroid[j] + gamma * (xr[j] - centroid[j]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      pts[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      const std::vector<double>& towards = outside ? xr : pts[worst];
      for (std::size_t j = 0; j < n; ++j)
        xc[j] = centroid[j] + rho * (towards[j] - centroid[j]);
      const double fc = eval(xc);
      if (fc < std::min(fr, fv[worst])) {
        pts[worst] = xc;
        fv[worst] = fc;
      } else {
        // Shrink towards the best vertex.
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < n; ++j)
            pts[i][j] = pts[best][j] + sigma * (pts[i][j] - pts[best][j]);
          fv[i] = eval(pts[i]);
        }
      }
    }
  }
  const std::size_t ibest =
      std::min_element(fv.begin(), fv.end()) - fv.begin();
  out.x = pts[ibest];
  out.fmin = fv[ibest];
  out.evaluations = evals;
  return out;
}

}  // namespace riskbt
