#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hilbert.hpp"
#include "operators.hpp"
#include "primal_dual.hpp"

namespace ifbf {

inline constexpr double kPlusInf = std::numeric_limits<double>::infinity();

// Proper convex lsc function accessed through its proximal map
// prox_{gamma f}(x) = argmin_y f(y) + |y - x|^2 / (2 gamma). Function values
// and conjugate values are optional closed-form evaluators (extended-real,
// +inf for points outside the domain); objectives that need a missing
// evaluator report "unavailable" instead of guessing.
class ProxFunction {
 public:
  using ProxFn = std::function<HVector(double, const HVector&)>;
  using ValueFn = std::function<double(const HVector&)>;

  ProxFunction(ProxFn prox_eval, std::string label)
      : prox_(std::move(prox_eval)), label_(std::move(label)) {}

  ProxFunction& with_value(ValueFn f) {
    value_ = std::move(f);
    return *this;
  }

  ProxFunction& with_conj_value(ValueFn f) {
    conj_value_ = std::move(f);
    return *this;
  }

  HVector prox(double gamma, const HVector& x) const {
    if (!(gamma > 0.0)) {
      throw parameter_error("prox: gamma must be positive, got " + std::to_string(gamma));
    }
    return prox_(gamma, x);
  }

  bool has_value() const noexcept { return static_cast<bool>(value_); }
  bool has_conj_value() const noexcept { return static_cast<bool>(conj_value_); }

  double value(const HVector& x) const {
    if (!value_) throw parameter_error("ProxFunction '" + label_ + "': no value evaluator");
    return value_(x);
  }

  double conj_value(const HVector& u) const {
    if (!conj_value_) {
      throw parameter_error("ProxFunction '" + label_ + "': no conjugate value evaluator");
    }
    return conj_value_(u);
  }

  const std::string& label() const noexcept { return label_; }

 private:
  ProxFn prox_;
  ValueFn value_;
  ValueFn conj_value_;
  std::string label_;
};

inline HVector prox(const ProxFunction& f, double gamma, const HVector& x) {
  return f.prox(gamma, x);
}

// prox_{gamma f*}(x) through Moreau's decomposition
// prox_{gamma f} + gamma prox_{f*/gamma} o (id/gamma) = id, so conjugate
// proxes never require f* in closed form.
inline HVector conjugate_prox(const ProxFunction& f, double gamma, const HVector& x) {
  if (!(gamma > 0.0)) {
    throw parameter_error("conjugate_prox: gamma must be positive, got " + std::to_string(gamma));
  }
  return x - gamma * f.prox(1.0 / gamma, x / gamma);
}

// Convex differentiable function with a Lipschitz gradient, evaluated by
// forward gradient calls.
class SmoothFunction {
 public:
  using GradFn = std::function<HVector(const HVector&)>;
  using ValueFn = std::function<double(const HVector&)>;

  SmoothFunction(GradFn grad, double lipschitz_grad, std::string label)
      : grad_(std::move(grad)), lipschitz_(lipschitz_grad), label_(std::move(label)) {
    if (!(lipschitz_grad >= 0.0)) {
      throw parameter_error("SmoothFunction: gradient Lipschitz constant must be >= 0");
    }
  }

  SmoothFunction& with_value(ValueFn f) {
    value_ = std::move(f);
    return *this;
  }

  HVector grad(const HVector& x) const { return grad_(x); }
  double lipschitz_grad() const noexcept { return lipschitz_; }
  bool has_value() const noexcept { return static_cast<bool>(value_); }

  double value(const HVector& x) const {
    if (!value_) throw parameter_error("SmoothFunction '" + label_ + "': no value evaluator");
    return value_(x);
  }

  const std::string& label() const noexcept { return label_; }

 private:
  GradFn grad_;
  double lipschitz_;
  ValueFn value_;
  std::string label_;
};

// ---------------------------------------------------------------------------
// Prox library. Every entry has a closed-form prox and, where available,
// closed-form values and conjugate values.

inline ProxFunction prox_zero() {
  ProxFunction f([](double, const HVector& x) { return x; }, "zero");
  f.with_value([](const HVector&) { return 0.0; });
  // conjugate is the indicator of the origin
  f.with_conj_value([](const HVector& u) { return norm(u) <= 1e-12 ? 0.0 : kPlusInf; });
  return f;
}

inline double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

// tau * |x|_1; prox is the soft threshold, the conjugate the indicator of
// the inf-norm ball of radius tau.
inline ProxFunction prox_l1(double tau) {
  if (!(tau > 0.0)) throw parameter_error("prox_l1: tau must be positive");
  ProxFunction f(
      [tau](double gamma, const HVector& x) {
        std::vector<double> c(x.dim());
        for (std::size_t i = 0; i < x.dim(); ++i) c[i] = soft_threshold(x[i], gamma * tau);
        return HVector(std::move(c));
      },
      "l1(tau=" + std::to_string(tau) + ")");
  f.with_value([tau](const HVector& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) s += std::abs(x[i]);
    return tau * s;
  });
  f.with_conj_value([tau](const HVector& u) {
    double mx = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) mx = std::max(mx, std::abs(u[i]));
    return mx <= tau * (1.0 + 1e-9) + 1e-12 ? 0.0 : kPlusInf;
  });
  return f;
}

// (c/2) |x - b|^2 with optional shift b; prox_{gamma f}(x) = (x + gamma c b) / (1 + gamma c),
// conjugate f*(u) = <u, b> + |u|^2 / (2 c).
inline ProxFunction prox_sq_l2(double c, std::optional<HVector> shift = std::nullopt) {
  if (!(c > 0.0)) throw parameter_error("prox_sq_l2: scale must be positive");
  auto bp = std::make_shared<std::optional<HVector>>(std::move(shift));
  ProxFunction f(
      [c, bp](double gamma, const HVector& x) {
        if (*bp) return (x + (gamma * c) * **bp) / (1.0 + gamma * c);
        return x / (1.0 + gamma * c);
      },
      "sq-l2(c=" + std::to_string(c) + ")");
  f.with_value([c, bp](const HVector& x) {
    if (*bp) return 0.5 * c * norm_sq(x - **bp);
    return 0.5 * c * norm_sq(x);
  });
  f.with_conj_value([c, bp](const HVector& u) {
    const double quad = norm_sq(u) / (2.0 * c);
    if (*bp) return inner(u, **bp) + quad;
    return quad;
  });
  return f;
}

// Indicator of a closed convex set; prox is the projection for every gamma.
inline ProxFunction prox_indicator(const ConvexSet& s, ProxFunction::ValueFn support_fn = {}) {
  auto sp = std::make_shared<ConvexSet>(s);
  ProxFunction f([sp](double, const HVector& x) { return sp->project(x); },
                 "indicator(" + s.label() + ")");
  f.with_value([sp](const HVector& x) { return sp->contains(x) ? 0.0 : kPlusInf; });
  if (support_fn) f.with_conj_value(std::move(support_fn));
  return f;
}

inline ProxFunction prox_box(const HVector& lo, const HVector& hi) {
  auto lop = std::make_shared<HVector>(lo);
  auto hip = std::make_shared<HVector>(hi);
  return prox_indicator(box_set(lo, hi), [lop, hip](const HVector& u) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) s += u[i] >= 0.0 ? (*hip)[i] * u[i] : (*lop)[i] * u[i];
    return s;
  });
}

inline ProxFunction prox_box(std::size_t dim, double lo, double hi) {
  return prox_box(HVector::constant(dim, lo), HVector::constant(dim, hi));
}

inline ProxFunction prox_l2_ball(std::size_t dim, double radius) {
  return prox_indicator(ball_set(dim, radius),
                        [radius](const HVector& u) { return radius * norm(u); });
}

// Indicator of {x : <a, x> = b}; the support function is finite only on the
// span of a.
inline ProxFunction prox_hyperplane(const HVector& a, double b) {
  auto ap = std::make_shared<HVector>(a);
  const double na2 = norm_sq(a);
  return prox_indicator(hyperplane_set(a, b), [ap, b, na2](const HVector& u) {
    const double t = inner(u, *ap) / na2;
    if (norm(u - t * (*ap)) > 1e-9 * std::max(1.0, norm(u))) return kPlusInf;
    return t * b;
  });
}

// Maximally monotone operator view of a subdifferential: the resolvent of
// the subdifferential is the prox of the function.
inline MaxMonotoneOp subdifferential_op(const ProxFunction& f, std::size_t dim) {
  auto fp = std::make_shared<ProxFunction>(f);
  return MaxMonotoneOp(
      dim, [fp](double gamma, const HVector& x) { return fp->prox(gamma, x); },
      "subdiff(" + f.label() + ")");
}

// ---------------------------------------------------------------------------
// Composite convex problem
//   inf_x f(x) + sum_i (g_i [] l_i)(L_i x - r_i) + h(x) - <x, z>
// together with its Fenchel-type dual. Each block's smoothing term l_i is
// either delta_{0} (so g_i [] l_i = g_i) or a strongly convex function given
// through its conjugate's gradient.

struct ConvexBlock {
  ProxFunction g;
  // nullopt selects l_i = delta_{0}; otherwise the conjugate l_i^* with
  // nu_i-Lipschitz gradient (its gradient is the forward operator D_i^{-1}).
  std::optional<SmoothFunction> l_conj;
  HVector r;
  LinearMap L;
  // Value of g_i [] l_i when l_i is nontrivial and a closed form is known.
  ProxFunction::ValueFn infconv_value;
};

class ConvexProblem {
 public:
  ConvexProblem(ProxFunction f, SmoothFunction h, HVector z, std::vector<ConvexBlock> blocks)
      : f_(std::move(f)), h_(std::move(h)), z_(std::move(z)), blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw parameter_error("ConvexProblem: at least one block is required");
    for (const ConvexBlock& blk : blocks_) {
      if (blk.L.in_dim() != z_.dim()) {
        throw dimension_error("ConvexProblem: block linear map domain mismatch");
      }
      if (blk.r.dim() != blk.L.out_dim()) {
        throw dimension_error("ConvexProblem: block offset dimension mismatch");
      }
    }
  }

  ConvexProblem& with_fstar_hstar_value(ProxFunction::ValueFn f) {
    fstar_hstar_ = std::move(f);
    return *this;
  }

  const ProxFunction& f() const noexcept { return f_; }
  const SmoothFunction& h() const noexcept { return h_; }
  const HVector& z() const noexcept { return z_; }
  const std::vector<ConvexBlock>& blocks() const noexcept { return blocks_; }
  std::size_t dim() const noexcept { return z_.dim(); }
  bool has_fstar_hstar() const noexcept { return static_cast<bool>(fstar_hstar_); }
  double fstar_hstar(const HVector& w) const { return fstar_hstar_(w); }

 private:
  ProxFunction f_;
  SmoothFunction h_;
  HVector z_;
  std::vector<ConvexBlock> blocks_;
  ProxFunction::ValueFn fstar_hstar_;
};

// The monotone-inclusion view: A = subdiff f, C = grad h, B_i = subdiff g_i,
// D_i^{-1} = grad l_i^* (the zero map in the delta_{0} case).
inline PrimalDualProblem to_inclusion(const ConvexProblem& p) {
  MaxMonotoneOp a = subdifferential_op(p.f(), p.dim());
  auto hp = std::make_shared<SmoothFunction>(p.h());
  ForwardOp c(
      p.dim(), [hp](const HVector& x) { return hp->grad(x); }, p.h().lipschitz_grad(),
      "grad(" + p.h().label() + ")");
  std::vector<PdBlock> blocks;
  blocks.reserve(p.blocks().size());
  for (const ConvexBlock& blk : p.blocks()) {
    const std::size_t gdim = blk.L.out_dim();
    ForwardOp d_inv = zero_forward(gdim);
    if (blk.l_conj) {
      auto lp = std::make_shared<SmoothFunction>(*blk.l_conj);
      d_inv = ForwardOp(
          gdim, [lp](const HVector& v) { return lp->grad(v); }, blk.l_conj->lipschitz_grad(),
          "grad(" + blk.l_conj->label() + ")");
    }
    blocks.push_back(PdBlock{blk.r, subdifferential_op(blk.g, gdim), std::move(d_inv), blk.L});
  }
  return PrimalDualProblem(p.z(), std::move(a), std::move(c), std::move(blocks));
}

// Solves the primal-dual pair by the inertial primal-dual scheme on the
// inclusion view. The dual-block backward steps prox_{lambda g_i^*} are
// realized through the Moreau decomposition inside the inclusion layer, so
// only g_i itself is ever supplied. Adds no arithmetic of its own: the
// trajectory is the pd_solve trajectory on to_inclusion(problem).
inline std::pair<PrimalDualSolution, SolveReport> solve_convex(const ConvexProblem& p,
                                                               const FbfParams& params,
                                                               const PrimalDualState& init,
                                                               double tol, long max_iters,
                                                               const PdSolveOptions& opts = {}) {
  return pd_solve(to_inclusion(p), params, init, tol, max_iters, opts);
}

inline PrimalDualState convex_start(const ConvexProblem& p, const HVector& x1) {
  std::vector<HVector> v1;
  v1.reserve(p.blocks().size());
  for (const ConvexBlock& blk : p.blocks()) v1.push_back(HVector::zeros(blk.L.out_dim()));
  return PrimalDualState::start(x1, std::move(v1));
}

// ---------------------------------------------------------------------------
// Objectives and optimality

// f(x) + sum_i (g_i [] l_i)(L_i x - r_i) + h(x) - <x, z>, or nullopt when a
// required value evaluator is missing.
inline std::optional<double> primal_objective(const ConvexProblem& p, const HVector& x) {
  if (!p.f().has_value() || !p.h().has_value()) return std::nullopt;
  double total = p.f().value(x);
  for (const ConvexBlock& blk : p.blocks()) {
    const HVector w = blk.L.apply(x) - blk.r;
    if (!blk.l_conj) {
      if (!blk.g.has_value()) return std::nullopt;
      total += blk.g.value(w);
    } else if (blk.infconv_value) {
      total += blk.infconv_value(w);
    } else {
      return std::nullopt;
    }
    if (std::isinf(total)) return total;  // infeasible point, no need to finish
  }
  total += p.h().value(x);
  total -= inner(x, p.z());
  return total;
}

// -(f* [] h*)(z - sum_i L_i^* v_i) - sum_i (g_i^*(v_i) + l_i^*(v_i) + <v_i, r_i>),
// or nullopt when a required evaluator is missing. l_i^* vanishes in the
// delta_{0} case (l_i = delta_{0} gives l_i^* = 0).
inline std::optional<double> dual_objective(const ConvexProblem& p,
                                            const std::vector<HVector>& v) {
  if (!p.has_fstar_hstar()) return std::nullopt;
  if (v.size() != p.blocks().size()) {
    throw dimension_error("dual_objective: block count mismatch");
  }
  HVector w = p.z();
  for (std::size_t i = 0; i < v.size(); ++i) {
    w = w - p.blocks()[i].L.apply_adjoint(v[i]);
  }
  double total = -p.fstar_hstar(w);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const ConvexBlock& blk = p.blocks()[i];
    if (!blk.g.has_conj_value()) return std::nullopt;
    total -= blk.g.conj_value(v[i]);
    if (blk.l_conj) {
      if (!blk.l_conj->has_value()) return std::nullopt;
      total -= blk.l_conj->value(v[i]);
    }
    total -= inner(v[i], blk.r);
  }
  return total;
}

struct OptimalityCheck {
  bool ok = false;
  std::vector<double> residuals;  // head condition, then one per block
};

// Verifies the optimality system through prox-based fixed-point residuals:
//   x = prox_f(x + (z - sum_i L_i^* v_i - grad h(x)))
// and per block, via the conjugate prox,
//   v_i = prox_{g_i^*}(v_i + (L_i x - r_i - grad l_i^*(v_i))).
inline OptimalityCheck check_optimality(const ConvexProblem& p, const HVector& x,
                                        const std::vector<HVector>& v, double tol) {
  if (v.size() != p.blocks().size()) {
    throw dimension_error("check_optimality: block count mismatch");
  }
  OptimalityCheck out;
  HVector w = p.z() - p.h().grad(x);
  for (std::size_t i = 0; i < v.size(); ++i) {
    w = w - p.blocks()[i].L.apply_adjoint(v[i]);
  }
  out.residuals.push_back(norm(x - p.f().prox(1.0, x + w)));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const ConvexBlock& blk = p.blocks()[i];
    HVector u = blk.L.apply(x) - blk.r;
    if (blk.l_conj) u = u - blk.l_conj->grad(v[i]);
    out.residuals.push_back(norm(v[i] - conjugate_prox(blk.g, 1.0, v[i] + u)));
  }
  out.ok = true;
  for (double r : out.residuals) {
    if (!(r <= tol)) out.ok = false;
  }
  return out;
}

}  // namespace ifbf
