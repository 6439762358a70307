#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "hilbert.hpp"

namespace ifbf {

// Small dense row-major matrix; enough linear algebra for desk-scale
// operator construction (applies, adjoint applies, norm estimates).
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows_ * cols_) {
      throw dimension_error("Matrix: entry count " + std::to_string(a_.size()) +
                            " does not match " + std::to_string(rows_) + "x" +
                            std::to_string(cols_));
    }
    for (double v : a_) {
      if (!std::isfinite(v)) throw numeric_error("Matrix: non-finite entry");
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  HVector apply(const HVector& x) const {
    if (x.dim() != cols_) {
      throw dimension_error("Matrix::apply: vector dimension " + std::to_string(x.dim()) +
                            " does not match " + std::to_string(cols_) + " columns");
    }
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) acc += a_[i * cols_ + j] * x[j];
      y[i] = acc;
    }
    return HVector(std::move(y));
  }

  HVector apply_transpose(const HVector& y) const {
    if (y.dim() != rows_) {
      throw dimension_error("Matrix::apply_transpose: vector dimension " +
                            std::to_string(y.dim()) + " does not match " +
                            std::to_string(rows_) + " rows");
    }
    std::vector<double> x(cols_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) acc += a_[i * cols_ + j] * y[i];
      x[j] = acc;
    }
    return HVector(std::move(x));
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

inline bool is_skew(const Matrix& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j) + m(j, i)) > tol) return false;
  return true;
}

// Largest singular value via power iteration on M^T M with a fixed start
// vector. Converges to machine precision on the small dense matrices used
// here; callers needing a guaranteed upper bound inflate the result.
inline double spectral_norm_estimate(const Matrix& m, int iters = 100) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  std::vector<double> v(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) v[j] = 1.0 + 0.01 * static_cast<double>(j % 7);
  HVector x{std::vector<double>(v)};
  double nx = norm(x);
  if (nx == 0.0) return 0.0;
  x = x / nx;
  double value = 0.0;
  for (int k = 0; k < iters; ++k) {
    HVector w = m.apply_transpose(m.apply(x));
    double nw = norm(w);
    if (nw == 0.0) return 0.0;
    double next = std::sqrt(nw);
    x = w / nw;
    if (k > 2 && std::abs(next - value) <= 1e-15 * std::max(1.0, next)) {
      value = next;
      break;
    }
    value = next;
  }
  return value;
}

}  // namespace ifbf
