#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fbf.hpp"
#include "hilbert.hpp"
#include "operators.hpp"

namespace ifbf {

// One dual block of the composite inclusion: the linearly composed,
// parallel-sum smoothed term L_i^* ((B_i [] D_i)(L_i x - r_i)). D_i enters
// only through its inverse, a nu_i-Lipschitz single-valued map; the zero
// forward operator selects the degenerate case B_i [] D_i = B_i.
struct PdBlock {
  HVector r;
  MaxMonotoneOp B;
  ForwardOp D_inv;
  LinearMap L;
};

// Data of the primal inclusion
//   z in A x + sum_i L_i^* ((B_i [] D_i)(L_i x - r_i)) + C x
// together with its dual. All spaces are finite-dimensional; the block list
// fixes the product-space signature H x G_1 x ... x G_m.
class PrimalDualProblem {
 public:
  PrimalDualProblem(HVector z, MaxMonotoneOp a, ForwardOp c, std::vector<PdBlock> blocks)
      : z_(std::move(z)), a_(std::move(a)), c_(std::move(c)), blocks_(std::move(blocks)) {
    if (blocks_.empty()) {
      throw parameter_error("PrimalDualProblem: at least one block is required");
    }
    if (a_.dim() != z_.dim() || c_.dim() != z_.dim()) {
      throw dimension_error("PrimalDualProblem: A, C and z must share the primal dimension");
    }
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const PdBlock& blk = blocks_[i];
      const std::string tag = " (block " + std::to_string(i) + ")";
      if (blk.L.in_dim() != z_.dim()) {
        throw dimension_error("PrimalDualProblem: L domain must be the primal space" + tag);
      }
      const std::size_t gdim = blk.L.out_dim();
      if (blk.B.dim() != gdim || blk.D_inv.dim() != gdim || blk.r.dim() != gdim) {
        throw dimension_error("PrimalDualProblem: inconsistent block dimensions" + tag);
      }
      if (!(blk.L.op_norm_bound() > 0.0)) {
        throw parameter_error("PrimalDualProblem: L must be nonzero" + tag);
      }
    }
  }

  const HVector& z() const noexcept { return z_; }
  const MaxMonotoneOp& A() const noexcept { return a_; }
  const ForwardOp& C() const noexcept { return c_; }
  const std::vector<PdBlock>& blocks() const noexcept { return blocks_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  std::size_t dim_h() const noexcept { return z_.dim(); }
  std::size_t dim_g(std::size_t i) const { return blocks_.at(i).L.out_dim(); }

  std::size_t total_dim() const noexcept {
    std::size_t n = dim_h();
    for (const PdBlock& blk : blocks_) n += blk.L.out_dim();
    return n;
  }

  ProductVector zero_point() const {
    std::vector<HVector> blocks;
    blocks.reserve(blocks_.size());
    for (const PdBlock& blk : blocks_) blocks.push_back(HVector::zeros(blk.L.out_dim()));
    return ProductVector(HVector::zeros(dim_h()), std::move(blocks));
  }

 private:
  HVector z_;
  MaxMonotoneOp a_;
  ForwardOp c_;
  std::vector<PdBlock> blocks_;
};

// Lipschitz constant of the forward operator Q on the product space:
// beta = max{mu, nu_1, ..., nu_m} + sqrt(sum_i ||L_i||^2).
inline double beta_of(const PrimalDualProblem& p) {
  double mx = p.C().lipschitz();
  double lsq = 0.0;
  for (const PdBlock& blk : p.blocks()) {
    mx = std::max(mx, blk.D_inv.lipschitz());
    lsq += blk.L.op_norm_bound() * blk.L.op_norm_bound();
  }
  return mx + std::sqrt(lsq);
}

namespace detail {

inline void require_problem_signature(const PrimalDualProblem& p, const ProductVector& u,
                                      const char* op) {
  bool ok = u.head().dim() == p.dim_h() && u.block_count() == p.block_count();
  if (ok) {
    for (std::size_t i = 0; i < p.block_count(); ++i) {
      if (u.block(i).dim() != p.dim_g(i)) {
        ok = false;
        break;
      }
    }
  }
  if (!ok) throw dimension_error(std::string(op) + ": product vector does not match problem");
}

}  // namespace detail

// Resolvent of M(x, v_1, ..., v_m) = (-z + A x) x (r_1 + B_1^{-1} v_1) x ...
// evaluated blockwise:
//   J_{lambda M}(x, v) = (J_{lambda A}(x + lambda z),
//                         J_{lambda B_i^{-1}}(v_i - lambda r_i), ...),
// with each J_{lambda B_i^{-1}} obtained from the resolvent of B_i through
// the inverse-resolvent identity, so only B_i itself is ever supplied.
inline ProductVector product_resolvent(const PrimalDualProblem& p, double lambda,
                                       const ProductVector& u) {
  if (!(lambda > 0.0)) throw parameter_error("product_resolvent: lambda must be positive");
  detail::require_problem_signature(p, u, "product_resolvent");
  HVector head = p.A().resolvent(lambda, u.head() + lambda * p.z());
  std::vector<HVector> blocks;
  blocks.reserve(p.block_count());
  for (std::size_t i = 0; i < p.block_count(); ++i) {
    const PdBlock& blk = p.blocks()[i];
    blocks.push_back(inverse_resolvent(blk.B, lambda, u.block(i) - lambda * blk.r));
  }
  return ProductVector(std::move(head), std::move(blocks));
}

// Forward operator on the product space:
//   Q(x, v_1, ..., v_m) = (C x + sum_i L_i^* v_i,
//                          -L_1 x + D_1^{-1} v_1, ..., -L_m x + D_m^{-1} v_m).
// Q is monotone and beta_of(p)-Lipschitzian.
inline ProductVector product_forward(const PrimalDualProblem& p, const ProductVector& u) {
  detail::require_problem_signature(p, u, "product_forward");
  HVector head = p.C()(u.head());
  for (std::size_t i = 0; i < p.block_count(); ++i) {
    head = head + p.blocks()[i].L.apply_adjoint(u.block(i));
  }
  std::vector<HVector> blocks;
  blocks.reserve(p.block_count());
  for (std::size_t i = 0; i < p.block_count(); ++i) {
    const PdBlock& blk = p.blocks()[i];
    blocks.push_back(blk.D_inv(u.block(i)) - blk.L.apply(u.head()));
  }
  return ProductVector(std::move(head), std::move(blocks));
}

// ---------------------------------------------------------------------------
// Flattened view of the product space, for running the generic scheme on
// (M, Q) directly.

inline HVector flatten(const ProductVector& u) {
  std::vector<double> c;
  c.reserve(u.total_dim());
  for (double v : u.head().coords()) c.push_back(v);
  for (const HVector& b : u.blocks())
    for (double v : b.coords()) c.push_back(v);
  return HVector(std::move(c));
}

inline ProductVector unflatten(const PrimalDualProblem& p, const HVector& x) {
  if (x.dim() != p.total_dim()) {
    throw dimension_error("unflatten: dimension " + std::to_string(x.dim()) +
                          " does not match product dimension " + std::to_string(p.total_dim()));
  }
  std::size_t pos = 0;
  auto take = [&x, &pos](std::size_t n) {
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = x[pos + i];
    pos += n;
    return HVector(std::move(c));
  };
  HVector head = take(p.dim_h());
  std::vector<HVector> blocks;
  blocks.reserve(p.block_count());
  for (std::size_t i = 0; i < p.block_count(); ++i) blocks.push_back(take(p.dim_g(i)));
  return ProductVector(std::move(head), std::move(blocks));
}

// M as a maximally monotone operator on the flattened product space.
inline MaxMonotoneOp product_monotone_op(const PrimalDualProblem& p) {
  auto pp = std::make_shared<PrimalDualProblem>(p);
  return MaxMonotoneOp(
      p.total_dim(),
      [pp](double gamma, const HVector& x) {
        return flatten(product_resolvent(*pp, gamma, unflatten(*pp, x)));
      },
      "product-M");
}

// Q as a forward operator on the flattened product space.
inline ForwardOp product_forward_op(const PrimalDualProblem& p) {
  auto pp = std::make_shared<PrimalDualProblem>(p);
  return ForwardOp(
      p.total_dim(),
      [pp](const HVector& x) { return flatten(product_forward(*pp, unflatten(*pp, x))); },
      beta_of(p), "product-Q");
}

// ---------------------------------------------------------------------------
// Explicit primal-dual iteration

struct PrimalDualState {
  long n = 1;
  HVector x;
  HVector x_prev;
  std::vector<HVector> v;
  std::vector<HVector> v_prev;
  std::optional<HVector> p1;
  std::optional<std::vector<HVector>> p2;

  static PrimalDualState start(const HVector& x1, std::vector<HVector> v1) {
    PrimalDualState s;
    s.n = 1;
    s.x = x1;
    s.x_prev = x1;
    s.v_prev = v1;
    s.v = std::move(v1);
    return s;
  }

  ProductVector current() const { return ProductVector(x, v); }
  ProductVector previous() const { return ProductVector(x_prev, v_prev); }

  ProductVector backward_point() const {
    if (!p1 || !p2) throw parameter_error("PrimalDualState: no backward point yet");
    return ProductVector(*p1, *p2);
  }
};

namespace detail {

inline void require_state_signature(const PrimalDualProblem& p, const PrimalDualState& s) {
  bool ok = s.x.dim() == p.dim_h() && s.x_prev.dim() == p.dim_h() &&
            s.v.size() == p.block_count() && s.v_prev.size() == p.block_count();
  if (ok) {
    for (std::size_t i = 0; i < p.block_count(); ++i) {
      if (s.v[i].dim() != p.dim_g(i) || s.v_prev[i].dim() != p.dim_g(i)) {
        ok = false;
        break;
      }
    }
  }
  if (!ok) throw dimension_error("pd_step: state does not match problem signature");
}

}  // namespace detail

// One update of the explicit inertial primal-dual scheme. All operators are
// accessed separately, via forward or backward evaluations:
//   p_{1,n}   = J_{l A}[x_n - l (C x_n + sum_i L_i^* v_{i,n} - z) + a1 dx]
//   p_{2,i,n} = J_{l B_i^{-1}}[v_{i,n} + l (L_i x_n - D_i^{-1} v_{i,n} - r_i) + a1 dv_i]
//   v_{i,n+1} = l L_i(p_{1,n} - x_n) + l (D_i^{-1} v_{i,n} - D_i^{-1} p_{2,i,n})
//               + p_{2,i,n} + a2 dv_i
//   x_{n+1}   = l sum_i L_i^*(v_{i,n} - p_{2,i,n}) + l (C x_n - C p_{1,n})
//               + p_{1,n} + a2 dx
// with dx = x_n - x_{n-1}, dv_i = v_{i,n} - v_{i,n-1} and l = lambda_n.
// Per step: one J_A, one J_{B_i^{-1}} per block, two C evaluations, two
// D_i^{-1} evaluations per block, two L_i and two L_i^* applications.
inline PrimalDualState pd_step(const PrimalDualProblem& prob, const FbfParams& params,
                               const PrimalDualState& state) {
  detail::require_state_signature(prob, state);
  const std::size_t m = prob.block_count();
  const auto [lam, a1, a2] = detail::resolve_step(params, state.n, beta_of(prob));

  // Forward evaluations at the current point, each used twice below.
  const HVector cx = prob.C()(state.x);
  std::vector<HVector> lx(m), dv(m);
  for (std::size_t i = 0; i < m; ++i) {
    lx[i] = prob.blocks()[i].L.apply(state.x);
    dv[i] = prob.blocks()[i].D_inv(state.v[i]);
  }

  // p_{1,n}
  HVector fwd_head = cx;
  for (std::size_t i = 0; i < m; ++i) fwd_head = fwd_head + prob.blocks()[i].L.apply_adjoint(state.v[i]);
  fwd_head = fwd_head - prob.z();
  HVector arg1 = state.x - lam * fwd_head;
  if (a1 != 0.0) arg1 = arg1 + a1 * (state.x - state.x_prev);
  HVector p1 = prob.A().resolvent(lam, arg1);

  // p_{2,i,n}
  std::vector<HVector> p2(m);
  for (std::size_t i = 0; i < m; ++i) {
    const PdBlock& blk = prob.blocks()[i];
    HVector argb = state.v[i] + lam * (lx[i] - dv[i] - blk.r);
    if (a1 != 0.0) argb = argb + a1 * (state.v[i] - state.v_prev[i]);
    p2[i] = inverse_resolvent(blk.B, lam, argb);
  }

  // v_{i,n+1}
  std::vector<HVector> v_next(m);
  for (std::size_t i = 0; i < m; ++i) {
    const PdBlock& blk = prob.blocks()[i];
    HVector vn = lam * blk.L.apply(p1 - state.x) + lam * (dv[i] - blk.D_inv(p2[i])) + p2[i];
    if (a2 != 0.0) vn = vn + a2 * (state.v[i] - state.v_prev[i]);
    v_next[i] = std::move(vn);
  }

  // x_{n+1}
  HVector lsum = HVector::zeros(prob.dim_h());
  for (std::size_t i = 0; i < m; ++i) {
    lsum = lsum + prob.blocks()[i].L.apply_adjoint(state.v[i] - p2[i]);
  }
  HVector x_next = lam * lsum + lam * (cx - prob.C()(p1)) + p1;
  if (a2 != 0.0) x_next = x_next + a2 * (state.x - state.x_prev);

  PrimalDualState next;
  next.n = state.n + 1;
  next.x_prev = state.x;
  next.x = std::move(x_next);
  next.v_prev = state.v;
  next.v = std::move(v_next);
  next.p1 = std::move(p1);
  next.p2 = std::move(p2);
  return next;
}

struct PrimalDualSolution {
  HVector x;
  std::vector<HVector> v;
  std::vector<double> residuals;  // per-condition magnitudes: head, then one per block
};

// Fixed-point residual of the equivalent product-space formulation at a
// reference step size: componentwise norms of u - J_{lambda M}(u - lambda Q u).
// Zero exactly at primal-dual solutions.
inline std::vector<double> optimality_residual(const PrimalDualProblem& prob, const HVector& x,
                                               const std::vector<HVector>& v,
                                               double lambda = 1.0) {
  ProductVector u(x, v);
  detail::require_problem_signature(prob, u, "optimality_residual");
  const ProductVector q = product_forward(prob, u);
  const ProductVector j = product_resolvent(prob, lambda, u - lambda * q);
  std::vector<double> res;
  res.reserve(1 + prob.block_count());
  res.push_back(norm(x - j.head()));
  for (std::size_t i = 0; i < prob.block_count(); ++i) res.push_back(norm(v[i] - j.block(i)));
  return res;
}

inline std::vector<double> optimality_residual(const PrimalDualProblem& prob,
                                               const PrimalDualSolution& cand,
                                               double lambda = 1.0) {
  return optimality_residual(prob, cand.x, cand.v, lambda);
}

struct PdSolveOptions {
  bool keep_iterates = false;
  std::function<void(const PrimalDualState&)> observer;
  double residual_lambda = 1.0;  // reference step for the final optimality residuals
};

// Runs the explicit scheme until the product-space residual
// ||u_n - p_n||_K / max(1, ||u_n||_K) reaches tol. The report carries the
// monitored series for the product iterate and, separately, for the primal
// and dual parts.
inline std::pair<PrimalDualSolution, SolveReport> pd_solve(const PrimalDualProblem& prob,
                                                           const FbfParams& params,
                                                           const PrimalDualState& init,
                                                           double tol, long max_iters,
                                                           const PdSolveOptions& opts = {}) {
  params.validate();
  if (!(tol > 0.0)) throw parameter_error("pd_solve: tol must be positive");
  if (max_iters < 1) throw parameter_error("pd_solve: max_iters must be >= 1");
  detail::require_state_signature(prob, init);
  if (params.equal_start && !(init.x == init.x_prev && init.v == init.v_prev)) {
    throw parameter_error("pd_solve: equal_start requires the two starting points to coincide");
  }

  SolveReport report;
  if (params.rule == StepBoundRule::no_inertia2) {
    report.notes.push_back(
        "step bound: no-inertia2 rule applied on the product space (alpha2 = 0); "
        "extrapolated from the single-space analysis");
  }

  PrimalDualState state = init;
  double step_sum = 0.0, gap_sum = 0.0;
  double pstep_sum = 0.0, pgap_sum = 0.0, dstep_sum = 0.0, dgap_sum = 0.0;

  auto finish = [&](Termination t, long iters, double residual) {
    report.termination = t;
    report.iterations = iters;
    report.final_residual = residual;
    PrimalDualSolution sol;
    if (state.p1 && state.p2) {
      sol.x = *state.p1;
      sol.v = *state.p2;
    } else {
      sol.x = state.x;
      sol.v = state.v;
    }
    sol.residuals = optimality_residual(prob, sol.x, sol.v, opts.residual_lambda);
    report.final_x = flatten(state.current());
    if (state.p1 && state.p2) report.final_p = flatten(state.backward_point());
    return std::make_pair(std::move(sol), std::move(report));
  };

  for (long n = 1; n <= max_iters; ++n) {
    PrimalDualState next;
    try {
      next = pd_step(prob, params, state);
    } catch (const schedule_error& e) {
      report.violation_index = e.index();
      report.violation_message = e.what();
      return finish(Termination::parameter_violation, n - 1,
                    report.residual_history.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                    : report.residual_history.back());
    }

    // u_n vs p_n and u_{n+1}, split into primal and dual contributions.
    const double pgap_sq = norm_sq(next.x_prev - *next.p1);
    const double pstep_sq = norm_sq(next.x - next.x_prev);
    double dgap_sq = 0.0, dstep_sq = 0.0;
    for (std::size_t i = 0; i < prob.block_count(); ++i) {
      dgap_sq += norm_sq(next.v_prev[i] - (*next.p2)[i]);
      dstep_sq += norm_sq(next.v[i] - next.v_prev[i]);
    }
    const double gap_sq = pgap_sq + dgap_sq;
    const double step_sq = pstep_sq + dstep_sq;
    const double un_norm = std::sqrt(norm_sq(next.x_prev) + [&] {
      double s = 0.0;
      for (const HVector& b : next.v_prev) s += norm_sq(b);
      return s;
    }());
    const double residual = std::sqrt(gap_sq) / std::max(1.0, un_norm);

    gap_sum += gap_sq;
    step_sum += step_sq;
    pgap_sum += pgap_sq;
    pstep_sum += pstep_sq;
    dgap_sum += dgap_sq;
    dstep_sum += dstep_sq;
    report.residual_history.push_back(residual);
    report.sq_gap_partial_sums.push_back(gap_sum);
    report.sq_step_partial_sums.push_back(step_sum);
    report.primal_sq_gap_partial_sums.push_back(pgap_sum);
    report.primal_sq_step_partial_sums.push_back(pstep_sum);
    report.dual_sq_gap_partial_sums.push_back(dgap_sum);
    report.dual_sq_step_partial_sums.push_back(dstep_sum);
    if (opts.keep_iterates) report.iterates.push_back(flatten(next.current()));
    if (opts.observer) opts.observer(next);

    state = std::move(next);
    if (residual <= tol) return finish(Termination::converged, n, residual);
  }

  return finish(Termination::max_iters, max_iters,
                report.residual_history.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                : report.residual_history.back());
}

}  // namespace ifbf
