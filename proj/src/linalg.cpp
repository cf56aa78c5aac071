#include "riskbt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskbt {

SymEigen sym_eigen(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("sym_eigen: square matrix required");
  Matrix a = m;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-300) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double apj = a(p, j);
          const double aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  SymEigen out;
  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = a(i, i);
  // Sort ascending, permuting eigenvector columns along.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return out.eigenvalues[x] < out.eigenvalues[y];
  });
  SymEigen sorted;
  sorted.eigenvalues.resize(n);
  sorted.eigenvectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    sorted.eigenvalues[j] = out.eigenvalues[idx[j]];
    for (std::size_t i = 0; i < n; ++i) sorted.eigenvectors(i, j) = v(i, idx[j]);
  }
  return sorted;
}

QuadFormResult inverse_quadratic_form(const Matrix& m,
                                      const std::vector<double>& v,
                                      double cond_guard) {
  QuadFormResult res;
  const std::size_t n = m.rows();
  if (v.size() != n) throw std::invalid_argument("inverse_quadratic_form: size mismatch");
  SymEigen eig = sym_eigen(m);
  const double lmax = eig.eigenvalues.back();
  const double lmin = eig.eigenvalues.front();
  if (!(lmax > 0.0) || lmin <= 0.0) {
    res.degenerate = true;
    res.condition_number = std::numeric_limits<double>::infinity();
    return res;
  }
  res.condition_number = lmax / lmin;
  if (res.condition_number > cond_guard) {
    res.degenerate = true;
    return res;
  }
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double proj = 0.0;
    for (std::size_t i = 0; i < n; ++i) proj += eig.eigenvectors(i, j) * v[i];
    total += proj * proj / eig.eigenvalues[j];
  }
  res.value = total;
  return res;
}

}  // namespace riskbt
