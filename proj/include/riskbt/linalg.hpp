// Dense linear algebra for the small symmetric systems appearing in the
// Wald-type test statistics (dimension q <= ~8). Inversion goes through a
// Jacobi eigendecomposition so near-singularity can be detected via the
// condition number instead of silently producing garbage.
#pragma once

#include <cstddef>
#include <vector>

namespace riskbt {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

struct SymEigen {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // columns
};

// Cyclic Jacobi rotations; adequate for the tiny matrices used here.
SymEigen sym_eigen(const Matrix& m);

struct QuadFormResult {
  double value = 0.0;
  bool degenerate = false;     // condition number above the guard
  double condition_number = 0.0;
};

// v' M^{-1} v for symmetric positive semidefinite M with a condition-number
// guard (default 1e12). No pseudo-inverse: an ill-conditioned M reports
// degenerate instead.
QuadFormResult inverse_quadratic_form(const Matrix& m,
                                      const std::vector<double>& v,
                                      double cond_guard = 1e12);

}  // namespace riskbt
