#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace ifbf {

// Element of a finite-dimensional real Hilbert space with the standard inner
// product. Coordinates are validated once at construction: NaN/Inf never
// enter the algebra, so a divergent run surfaces as a numeric_error at the
// first non-finite intermediate instead of propagating silently.
class HVector {
 public:
  HVector() = default;

  explicit HVector(std::vector<double> coords) : c_(std::move(coords)) {
    check_finite();
  }

  HVector(std::initializer_list<double> coords) : c_(coords) { check_finite(); }

  static HVector zeros(std::size_t dim) {
    HVector v;
    v.c_.assign(dim, 0.0);
    return v;
  }

  static HVector constant(std::size_t dim, double value) {
    HVector v;
    v.c_.assign(dim, value);
    v.check_finite();
    return v;
  }

  std::size_t dim() const noexcept { return c_.size(); }
  bool empty() const noexcept { return c_.empty(); }

  double operator[](std::size_t i) const { return c_[i]; }
  double at(std::size_t i) const { return c_.at(i); }

  const std::vector<double>& coords() const noexcept { return c_; }

  bool operator==(const HVector& other) const noexcept { return c_ == other.c_; }

 private:
  void check_finite() const {
    for (double v : c_) {
      if (!std::isfinite(v)) {
        throw numeric_error("non-finite coordinate " + std::to_string(v) +
                            " in vector of dimension " + std::to_string(c_.size()));
      }
    }
  }

  std::vector<double> c_;
};

namespace detail {

inline void require_same_dim(const HVector& x, const HVector& y, const char* op) {
  if (x.dim() != y.dim()) {
    throw dimension_error(std::string(op) + ": dimension mismatch (" +
                          std::to_string(x.dim()) + " vs " + std::to_string(y.dim()) + ")");
  }
}

}  // namespace detail

inline double inner(const HVector& x, const HVector& y) {
  detail::require_same_dim(x, y, "inner");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) acc += x[i] * y[i];
  return acc;
}

inline double norm_sq(const HVector& x) { return inner(x, x); }

inline double norm(const HVector& x) { return std::sqrt(norm_sq(x)); }

inline HVector operator+(const HVector& x, const HVector& y) {
  detail::require_same_dim(x, y, "operator+");
  std::vector<double> c(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) c[i] = x[i] + y[i];
  return HVector(std::move(c));
}

inline HVector operator-(const HVector& x, const HVector& y) {
  detail::require_same_dim(x, y, "operator-");
  std::vector<double> c(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) c[i] = x[i] - y[i];
  return HVector(std::move(c));
}

inline HVector operator*(double a, const HVector& x) {
  std::vector<double> c(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) c[i] = a * x[i];
  return HVector(std::move(c));
}

inline HVector operator*(const HVector& x, double a) { return a * x; }

inline HVector operator/(const HVector& x, double a) {
  std::vector<double> c(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) c[i] = x[i] / a;
  return HVector(std::move(c));
}

inline HVector operator-(const HVector& x) {
  std::vector<double> c(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) c[i] = -x[i];
  return HVector(std::move(c));
}

// Coordinatewise sum of coeffs[k] * vectors[k], accumulated left to right.
inline HVector combine(std::span<const double> coeffs, std::span<const HVector> vectors) {
  if (coeffs.size() != vectors.size()) {
    throw dimension_error("combine: " + std::to_string(coeffs.size()) + " coefficients for " +
                          std::to_string(vectors.size()) + " vectors");
  }
  if (vectors.empty()) throw dimension_error("combine: empty input");
  const std::size_t n = vectors.front().dim();
  for (const HVector& v : vectors) detail::require_same_dim(vectors.front(), v, "combine");
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) c[i] += coeffs[k] * vectors[k][i];
  }
  return HVector(std::move(c));
}

// Block vector in the product space H x G_1 x ... x G_m. The inner product is
// the sum of the blockwise inner products, head first.
class ProductVector {
 public:
  ProductVector() = default;

  ProductVector(HVector head, std::vector<HVector> blocks)
      : head_(std::move(head)), blocks_(std::move(blocks)) {}

  const HVector& head() const noexcept { return head_; }
  const std::vector<HVector>& blocks() const noexcept { return blocks_; }
  const HVector& block(std::size_t i) const { return blocks_.at(i); }
  std::size_t block_count() const noexcept { return blocks_.size(); }

  std::size_t total_dim() const noexcept {
    std::size_t n = head_.dim();
    for (const HVector& b : blocks_) n += b.dim();
    return n;
  }

  bool same_signature(const ProductVector& other) const noexcept {
    if (head_.dim() != other.head_.dim()) return false;
    if (blocks_.size() != other.blocks_.size()) return false;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (blocks_[i].dim() != other.blocks_[i].dim()) return false;
    }
    return true;
  }

  bool operator==(const ProductVector& other) const noexcept {
    return head_ == other.head_ && blocks_ == other.blocks_;
  }

 private:
  HVector head_;
  std::vector<HVector> blocks_;
};

namespace detail {

inline void require_same_signature(const ProductVector& u, const ProductVector& w,
                                   const char* op) {
  if (!u.same_signature(w)) {
    throw dimension_error(std::string(op) + ": product-space signature mismatch");
  }
}

}  // namespace detail

inline double product_inner(const ProductVector& u, const ProductVector& w) {
  detail::require_same_signature(u, w, "product_inner");
  double acc = inner(u.head(), w.head());
  for (std::size_t i = 0; i < u.block_count(); ++i) acc += inner(u.block(i), w.block(i));
  return acc;
}

inline double product_norm_sq(const ProductVector& u) { return product_inner(u, u); }

inline double product_norm(const ProductVector& u) { return std::sqrt(product_norm_sq(u)); }

inline ProductVector operator+(const ProductVector& u, const ProductVector& w) {
  detail::require_same_signature(u, w, "operator+");
  std::vector<HVector> blocks;
  blocks.reserve(u.block_count());
  for (std::size_t i = 0; i < u.block_count(); ++i) blocks.push_back(u.block(i) + w.block(i));
  return ProductVector(u.head() + w.head(), std::move(blocks));
}

inline ProductVector operator-(const ProductVector& u, const ProductVector& w) {
  detail::require_same_signature(u, w, "operator-");
  std::vector<HVector> blocks;
  blocks.reserve(u.block_count());
  for (std::size_t i = 0; i < u.block_count(); ++i) blocks.push_back(u.block(i) - w.block(i));
  return ProductVector(u.head() - w.head(), std::move(blocks));
}

inline ProductVector operator*(double a, const ProductVector& u) {
  std::vector<HVector> blocks;
  blocks.reserve(u.block_count());
  for (std::size_t i = 0; i < u.block_count(); ++i) blocks.push_back(a * u.block(i));
  return ProductVector(a * u.head(), std::move(blocks));
}

}  // namespace ifbf
