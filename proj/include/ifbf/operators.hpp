#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hilbert.hpp"
#include "matrix.hpp"

namespace ifbf {

// Hypothesis-level properties supplied by the caller. They select which
// convergence statement applies; nothing here is verified at runtime.
struct OperatorTags {
  bool demiregular = false;
  bool uniformly_monotone = false;
};

// Set-valued maximally monotone operator, represented solely by the ability
// to evaluate its resolvent J_{gamma A} = (id + gamma A)^{-1} for gamma > 0.
class MaxMonotoneOp {
 public:
  using ResolventFn = std::function<HVector(double, const HVector&)>;

  MaxMonotoneOp(std::size_t dim, ResolventFn resolvent_eval, std::string label = {})
      : dim_(dim), resolvent_(std::move(resolvent_eval)), label_(std::move(label)) {}

  HVector resolvent(double gamma, const HVector& x) const {
    if (!(gamma > 0.0)) {
      throw parameter_error("resolvent: gamma must be positive, got " + std::to_string(gamma));
    }
    if (x.dim() != dim_) {
      throw dimension_error("resolvent: vector dimension " + std::to_string(x.dim()) +
                            " does not match operator dimension " + std::to_string(dim_));
    }
    return resolvent_(gamma, x);
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }

  OperatorTags tags;

 private:
  std::size_t dim_;
  ResolventFn resolvent_;
  std::string label_;
};

// Single-valued monotone operator evaluated by forward calls, with a known
// Lipschitz constant. The constant is an upper bound, not an exact modulus;
// zero is admitted for the zero operator.
class ForwardOp {
 public:
  using EvalFn = std::function<HVector(const HVector&)>;

  ForwardOp(std::size_t dim, EvalFn eval, double lipschitz, std::string label = {})
      : dim_(dim), eval_(std::move(eval)), lipschitz_(lipschitz), label_(std::move(label)) {
    if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) {
      throw parameter_error("ForwardOp: Lipschitz constant must be finite and >= 0");
    }
  }

  HVector operator()(const HVector& x) const {
    if (x.dim() != dim_) {
      throw dimension_error("ForwardOp: vector dimension " + std::to_string(x.dim()) +
                            " does not match operator dimension " + std::to_string(dim_));
    }
    return eval_(x);
  }

  std::size_t dim() const noexcept { return dim_; }
  double lipschitz() const noexcept { return lipschitz_; }
  const std::string& label() const noexcept { return label_; }

  OperatorTags tags;

 private:
  std::size_t dim_;
  EvalFn eval_;
  double lipschitz_;
  std::string label_;
};

// Linear continuous map between two spaces together with its adjoint and an
// upper bound on the operator norm.
class LinearMap {
 public:
  using ApplyFn = std::function<HVector(const HVector&)>;

  LinearMap(std::size_t in_dim, std::size_t out_dim, ApplyFn apply, ApplyFn adjoint_apply,
            double op_norm_bound, std::string label = {})
      : in_dim_(in_dim),
        out_dim_(out_dim),
        apply_(std::move(apply)),
        adjoint_(std::move(adjoint_apply)),
        norm_bound_(op_norm_bound),
        label_(std::move(label)) {
    if (!(op_norm_bound >= 0.0) || !std::isfinite(op_norm_bound)) {
      throw parameter_error("LinearMap: operator norm bound must be finite and >= 0");
    }
  }

  // Power-iteration norm estimate inflated by 1% so the bound stays safe.
  static LinearMap from_matrix(const Matrix& m, std::string label = {}) {
    return from_matrix(m, spectral_norm_estimate(m) * 1.01, std::move(label));
  }

  static LinearMap from_matrix(const Matrix& m, double exact_norm_bound, std::string label = {}) {
    auto mp = std::make_shared<Matrix>(m);
    return LinearMap(
        m.cols(), m.rows(), [mp](const HVector& x) { return mp->apply(x); },
        [mp](const HVector& y) { return mp->apply_transpose(y); }, exact_norm_bound,
        std::move(label));
  }

  static LinearMap identity(std::size_t dim) {
    return LinearMap(
        dim, dim, [](const HVector& x) { return x; }, [](const HVector& y) { return y; }, 1.0,
        "id");
  }

  static LinearMap scaled_identity(std::size_t dim, double scale) {
    return LinearMap(
        dim, dim, [scale](const HVector& x) { return scale * x; },
        [scale](const HVector& y) { return scale * y; }, std::abs(scale), "scaled-id");
  }

  HVector apply(const HVector& x) const {
    if (x.dim() != in_dim_) {
      throw dimension_error("LinearMap::apply: dimension " + std::to_string(x.dim()) +
                            " does not match domain dimension " + std::to_string(in_dim_));
    }
    return apply_(x);
  }

  HVector apply_adjoint(const HVector& y) const {
    if (y.dim() != out_dim_) {
      throw dimension_error("LinearMap::apply_adjoint: dimension " + std::to_string(y.dim()) +
                            " does not match codomain dimension " + std::to_string(out_dim_));
    }
    return adjoint_(y);
  }

  std::size_t in_dim() const noexcept { return in_dim_; }
  std::size_t out_dim() const noexcept { return out_dim_; }
  double op_norm_bound() const noexcept { return norm_bound_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::size_t in_dim_;
  std::size_t out_dim_;
  ApplyFn apply_;
  ApplyFn adjoint_;
  double norm_bound_;
  std::string label_;
};

// Nonempty closed convex set, represented by its projection. Membership
// defaults to "projection moves the point by at most tol".
class ConvexSet {
 public:
  using ProjectFn = std::function<HVector(const HVector&)>;
  using MemberFn = std::function<bool(const HVector&, double)>;

  ConvexSet(std::size_t dim, ProjectFn project, std::string label = {})
      : dim_(dim), project_(std::move(project)), label_(std::move(label)) {}

  ConvexSet(std::size_t dim, ProjectFn project, MemberFn membership, std::string label = {})
      : dim_(dim),
        project_(std::move(project)),
        member_(std::move(membership)),
        label_(std::move(label)) {}

  HVector project(const HVector& x) const {
    if (x.dim() != dim_) {
      throw dimension_error("ConvexSet::project: dimension mismatch");
    }
    return project_(x);
  }

  bool contains(const HVector& x, double tol = 1e-9) const {
    if (member_) return member_(x, tol);
    return norm(x - project(x)) <= tol;
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::size_t dim_;
  ProjectFn project_;
  MemberFn member_;
  std::string label_;
};

// ---------------------------------------------------------------------------
// Resolvent calculus

inline HVector resolvent(const MaxMonotoneOp& a, double gamma, const HVector& x) {
  return a.resolvent(gamma, x);
}

// J_{sigma A^{-1}}(y) without an explicit inverse: the resolvents of A and
// A^{-1} satisfy J_{gamma A} + gamma J_{gamma^{-1} A^{-1}} o gamma^{-1} id = id,
// hence J_{sigma A^{-1}}(y) = y - sigma * J_{sigma^{-1} A}(y / sigma).
inline HVector inverse_resolvent(const MaxMonotoneOp& a, double sigma, const HVector& y) {
  if (!(sigma > 0.0)) {
    throw parameter_error("inverse_resolvent: sigma must be positive, got " +
                          std::to_string(sigma));
  }
  return y - sigma * a.resolvent(1.0 / sigma, y / sigma);
}

// ---------------------------------------------------------------------------
// Concrete operators

// Zero operator as a maximally monotone map; its resolvent is the identity.
inline MaxMonotoneOp zero_monotone(std::size_t dim) {
  return MaxMonotoneOp(
      dim, [](double, const HVector& x) { return x; }, "zero");
}

// Identity as a maximally monotone map: J_{gamma id}(x) = x / (1 + gamma).
inline MaxMonotoneOp identity_monotone(std::size_t dim) {
  return MaxMonotoneOp(
      dim, [](double gamma, const HVector& x) { return x / (1.0 + gamma); }, "identity");
}

inline ForwardOp zero_forward(std::size_t dim) {
  return ForwardOp(
      dim, [dim](const HVector&) { return HVector::zeros(dim); }, 0.0, "zero");
}

// x -> Mx + b with Lipschitz constant ||M||. Monotonicity is the caller's
// claim (audited by certify), skewness or a PSD symmetric part being the
// usual reasons.
inline ForwardOp linear_forward(const Matrix& m, std::optional<HVector> shift = std::nullopt,
                                std::optional<double> norm_bound = std::nullopt,
                                std::string label = "linear") {
  if (m.rows() != m.cols()) {
    throw dimension_error("linear_forward: matrix must be square");
  }
  if (shift && shift->dim() != m.rows()) {
    throw dimension_error("linear_forward: shift dimension mismatch");
  }
  const double bound = norm_bound ? *norm_bound : spectral_norm_estimate(m) * 1.01;
  auto mp = std::make_shared<Matrix>(m);
  auto bp = std::make_shared<std::optional<HVector>>(std::move(shift));
  return ForwardOp(
      m.rows(),
      [mp, bp](const HVector& x) {
        HVector y = mp->apply(x);
        if (*bp) y = y + **bp;
        return y;
      },
      bound, std::move(label));
}

// Skew operator from its matrix: <x, Mx> = 0 for all x, hence monotone; the
// Lipschitz constant is the spectral norm.
inline ForwardOp make_skew(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw dimension_error("make_skew: matrix must be square");
  }
  if (!is_skew(m, 1e-12)) {
    throw parameter_error("make_skew: matrix is not skew-symmetric within 1e-12");
  }
  auto mp = std::make_shared<Matrix>(m);
  return ForwardOp(
      m.rows(), [mp](const HVector& x) { return mp->apply(x); }, spectral_norm_estimate(m),
      "skew");
}

// Normal cone of a closed convex set. Its resolvent is the projection for
// every gamma > 0, so the gamma argument is ignored by construction.
inline MaxMonotoneOp normal_cone(const ConvexSet& s) {
  auto sp = std::make_shared<ConvexSet>(s);
  return MaxMonotoneOp(
      s.dim(), [sp](double, const HVector& x) { return sp->project(x); },
      "normal-cone(" + s.label() + ")");
}

// ---------------------------------------------------------------------------
// Convex set library

inline ConvexSet box_set(const HVector& lo, const HVector& hi) {
  detail::require_same_dim(lo, hi, "box_set");
  for (std::size_t i = 0; i < lo.dim(); ++i) {
    if (lo[i] > hi[i]) throw parameter_error("box_set: empty box (lo > hi)");
  }
  auto lop = std::make_shared<HVector>(lo);
  auto hip = std::make_shared<HVector>(hi);
  return ConvexSet(
      lo.dim(),
      [lop, hip](const HVector& x) {
        std::vector<double> c(x.dim());
        for (std::size_t i = 0; i < x.dim(); ++i) c[i] = std::clamp(x[i], (*lop)[i], (*hip)[i]);
        return HVector(std::move(c));
      },
      "box");
}

inline ConvexSet box_set(std::size_t dim, double lo, double hi) {
  return box_set(HVector::constant(dim, lo), HVector::constant(dim, hi));
}

inline ConvexSet ball_set(std::size_t dim, double radius) {
  if (!(radius > 0.0)) throw parameter_error("ball_set: radius must be positive");
  return ConvexSet(
      dim,
      [radius](const HVector& x) {
        const double nx = norm(x);
        if (nx <= radius) return x;
        return (radius / nx) * x;
      },
      "l2-ball");
}

// Affine hyperplane {x : <a, x> = b}, a != 0.
inline ConvexSet hyperplane_set(const HVector& a, double b) {
  const double na2 = norm_sq(a);
  if (na2 == 0.0) throw parameter_error("hyperplane_set: normal vector must be nonzero");
  auto ap = std::make_shared<HVector>(a);
  return ConvexSet(
      a.dim(),
      [ap, b, na2](const HVector& x) {
        const double t = (inner(*ap, x) - b) / na2;
        return x - t * (*ap);
      },
      "hyperplane");
}

inline ConvexSet whole_space(std::size_t dim) {
  return ConvexSet(
      dim, [](const HVector& x) { return x; }, "whole-space");
}

// ---------------------------------------------------------------------------
// Randomized certification of declared operator properties

struct CertifyViolation {
  std::string property;
  std::string detail;
};

struct CertifyReport {
  std::string op_label;
  int samples = 0;
  std::vector<CertifyViolation> violations;

  bool ok() const noexcept { return violations.empty(); }

  std::string summary() const {
    std::ostringstream os;
    os << "certify(" << op_label << "): " << samples << " samples, ";
    if (ok()) {
      os << "no violations";
    } else {
      os << violations.size() << " violation(s)";
      for (const auto& v : violations) os << "\n  [" << v.property << "] " << v.detail;
    }
    return os.str();
  }
};

namespace detail {

inline HVector sample_vector(std::mt19937_64& rng, std::size_t dim, double range = 5.0) {
  std::uniform_real_distribution<double> u(-range, range);
  std::vector<double> c(dim);
  for (double& v : c) v = u(rng);
  return HVector(std::move(c));
}

inline std::string pair_detail(const HVector& x, const HVector& y, double lhs, double rhs) {
  std::ostringstream os;
  os.precision(17);
  os << "lhs=" << lhs << " rhs=" << rhs << " at |x|=" << norm(x) << ", |y|=" << norm(y);
  return os.str();
}

}  // namespace detail

// Samples seeded pairs and reports every declared inequality that fails:
// monotonicity and the Lipschitz bound. Violations are report entries, not
// exceptions.
inline CertifyReport certify(const ForwardOp& op, int samples, std::uint64_t seed) {
  if (samples < 1) throw parameter_error("certify: samples must be >= 1");
  CertifyReport report{op.label().empty() ? "forward-op" : op.label(), samples, {}};
  std::mt19937_64 rng(seed);
  const double slack = 1e-10;
  for (int k = 0; k < samples; ++k) {
    const HVector x = detail::sample_vector(rng, op.dim());
    const HVector y = detail::sample_vector(rng, op.dim());
    const HVector bx = op(x);
    const HVector by = op(y);
    const double mono = inner(x - y, bx - by);
    const double scale = std::max(1.0, norm(x - y) * norm(bx - by));
    if (mono < -slack * scale) {
      report.violations.push_back(
          {"monotone", "<x-y, Bx-By> = " + std::to_string(mono) + " < 0; " +
                           detail::pair_detail(x, y, mono, 0.0)});
    }
    const double lhs = norm(bx - by);
    const double rhs = op.lipschitz() * norm(x - y);
    if (lhs > rhs + slack * std::max(1.0, rhs)) {
      report.violations.push_back(
          {"lipschitz", "|Bx-By| = " + std::to_string(lhs) + " exceeds L*|x-y| = " +
                            std::to_string(rhs) + " (declared L = " +
                            std::to_string(op.lipschitz()) + "); " +
                            detail::pair_detail(x, y, lhs, rhs)});
    }
  }
  return report;
}

// Firm nonexpansiveness of the resolvent on sampled pairs, for a small grid
// of step sizes: |Jx - Jy|^2 <= <x - y, Jx - Jy>.
inline CertifyReport certify(const MaxMonotoneOp& op, int samples, std::uint64_t seed) {
  if (samples < 1) throw parameter_error("certify: samples must be >= 1");
  CertifyReport report{op.label().empty() ? "monotone-op" : op.label(), samples, {}};
  std::mt19937_64 rng(seed);
  const double gammas[] = {0.1, 1.0, 10.0};
  const double slack = 1e-10;
  for (int k = 0; k < samples; ++k) {
    const HVector x = detail::sample_vector(rng, op.dim());
    const HVector y = detail::sample_vector(rng, op.dim());
    for (double gamma : gammas) {
      const HVector jx = op.resolvent(gamma, x);
      const HVector jy = op.resolvent(gamma, y);
      const double lhs = norm_sq(jx - jy);
      const double rhs = inner(x - y, jx - jy);
      if (lhs > rhs + slack * std::max(1.0, std::abs(rhs))) {
        report.violations.push_back(
            {"firmly-nonexpansive",
             "|Jx-Jy|^2 = " + std::to_string(lhs) + " exceeds <x-y, Jx-Jy> = " +
                 std::to_string(rhs) + " at gamma = " + std::to_string(gamma) + "; " +
                 detail::pair_detail(x, y, lhs, rhs)});
      }
    }
  }
  return report;
}

}  // namespace ifbf
