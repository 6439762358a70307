#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hilbert.hpp"
#include "operators.hpp"

namespace ifbf {

// Admissible step-size interval. The general rule covers arbitrary inertia
// caps; the no_inertia2 rule is the larger bound available once alpha2 = 0.
enum class StepBoundRule { general, no_inertia2 };

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

// Upper step bound for the inertial scheme with caps alpha1, alpha2 and
// margin sigma: (1/beta) * sqrt((1 - 12 a2^2 - 9 (a1+a2) - 4 s) /
// (12 a2^2 + 8 (a1+a2) + 4 s + 2)). Requires 12 a2^2 + 9 (a1+a2) + 4 s < 1.
// beta = 0 (zero forward operator) leaves the step unconstrained.
inline double step_bound_general(double beta, double alpha1, double alpha2, double sigma) {
  if (!(beta >= 0.0)) throw parameter_error("step_bound_general: beta must be >= 0");
  if (!(alpha1 >= 0.0 && alpha2 >= 0.0)) {
    throw parameter_error("step_bound_general: alpha1 and alpha2 must be >= 0");
  }
  if (!(sigma > 0.0)) throw parameter_error("step_bound_general: sigma must be positive");
  const double s = 12.0 * alpha2 * alpha2 + 9.0 * (alpha1 + alpha2) + 4.0 * sigma;
  if (!(s < 1.0)) {
    throw parameter_error(
        "parameter condition violated: 12*alpha2^2 + 9*(alpha1+alpha2) + 4*sigma = " +
        detail::fmt(s) + ", must be < 1");
  }
  if (beta == 0.0) return std::numeric_limits<double>::infinity();
  const double num = 1.0 - s;
  const double den = 12.0 * alpha2 * alpha2 + 8.0 * (alpha1 + alpha2) + 4.0 * sigma + 2.0;
  return std::sqrt(num / den) / beta;
}

// Improved bound for alpha2 = 0: (1/beta) * sqrt((1 - 5 a1 - 2 s) /
// (4 a1 + 2 s + 1)). Requires 5 a1 + 2 s < 1.
inline double step_bound_no_inertia2(double beta, double alpha1, double sigma) {
  if (!(beta >= 0.0)) throw parameter_error("step_bound_no_inertia2: beta must be >= 0");
  if (!(alpha1 >= 0.0)) throw parameter_error("step_bound_no_inertia2: alpha1 must be >= 0");
  if (!(sigma > 0.0)) throw parameter_error("step_bound_no_inertia2: sigma must be positive");
  const double s = 5.0 * alpha1 + 2.0 * sigma;
  if (!(s < 1.0)) {
    throw parameter_error("parameter condition violated: 5*alpha1 + 2*sigma = " +
                          detail::fmt(s) + ", must be < 1");
  }
  if (beta == 0.0) return std::numeric_limits<double>::infinity();
  const double num = 1.0 - s;
  const double den = 4.0 * alpha1 + 2.0 * sigma + 1.0;
  return std::sqrt(num / den) / beta;
}

// Inertia caps, margin, step interval and per-iteration schedules for the
// inertial forward-backward-forward scheme.
//
// Defaults: lambda_n constant at lambda_fraction (0.99) of the active upper
// bound; alpha_{i,n} ramp linearly from 0 to the cap over the first
// ramp_iters iterations, then stay constant; equal_start = true, so a single
// starting point is duplicated and alpha_{i,1} = 0 is not required.
struct FbfParams {
  double alpha1 = 0.0;   // cap for alpha_{1,n}
  double alpha2 = 0.0;   // cap for alpha_{2,n}
  double sigma = 0.125;  // margin
  double lambda_min = 1e-9;
  StepBoundRule rule = StepBoundRule::general;

  // Step-size policy, in order of precedence: lambda_schedule if set,
  // else lambda_const if set, else lambda_fraction * step_bound(beta).
  std::function<double(long)> lambda_schedule;
  std::optional<double> lambda_const;
  double lambda_fraction = 0.99;

  // Inertia schedules; when unset, linear ramps to the caps are used.
  std::function<double(long)> alpha1_schedule;
  std::function<double(long)> alpha2_schedule;
  long ramp_iters = 10;

  bool equal_start = true;
  // Accept schedules whose sum alpha_{1,n} + alpha_{2,n} is nondecreasing
  // even if the individual sequences are not.
  bool relaxed_sum_monotonicity = false;

  void validate() const {
    if (!(alpha1 >= 0.0 && alpha2 >= 0.0)) {
      throw parameter_error("FbfParams: inertia caps must be >= 0");
    }
    if (!(sigma > 0.0)) throw parameter_error("FbfParams: sigma must be positive");
    if (!(lambda_min > 0.0)) throw parameter_error("FbfParams: lambda_min must be positive");
    if (!(lambda_fraction > 0.0 && lambda_fraction <= 1.0)) {
      throw parameter_error("FbfParams: lambda_fraction must lie in (0, 1]");
    }
    if (lambda_const && !(*lambda_const > 0.0)) {
      throw parameter_error("FbfParams: constant lambda must be positive");
    }
    if (ramp_iters < 1) throw parameter_error("FbfParams: ramp_iters must be >= 1");
    if (rule == StepBoundRule::no_inertia2) {
      if (alpha2 != 0.0) {
        throw parameter_error("FbfParams: the no_inertia2 step bound requires alpha2 = 0");
      }
      const double s = 5.0 * alpha1 + 2.0 * sigma;
      if (!(s < 1.0)) {
        throw parameter_error("parameter condition violated: 5*alpha1 + 2*sigma = " +
                              detail::fmt(s) + ", must be < 1");
      }
    } else {
      const double s = 12.0 * alpha2 * alpha2 + 9.0 * (alpha1 + alpha2) + 4.0 * sigma;
      if (!(s < 1.0)) {
        throw parameter_error(
            "parameter condition violated: 12*alpha2^2 + 9*(alpha1+alpha2) + 4*sigma = " +
            detail::fmt(s) + ", must be < 1");
      }
    }
  }

  double step_bound(double beta) const {
    return rule == StepBoundRule::no_inertia2 ? step_bound_no_inertia2(beta, alpha1, sigma)
                                              : step_bound_general(beta, alpha1, alpha2, sigma);
  }

  double lambda_at(long n, double beta) const {
    if (lambda_schedule) return lambda_schedule(n);
    if (lambda_const) return *lambda_const;
    const double bound = step_bound(beta);
    if (std::isinf(bound)) {
      throw parameter_error(
          "FbfParams: fraction-of-bound step policy needs a finite bound (beta > 0); "
          "set a constant lambda or a schedule for a zero forward operator");
    }
    return lambda_fraction * bound;
  }

  double alpha1_at(long n) const {
    if (alpha1_schedule) return alpha1_schedule(n);
    return default_ramp(alpha1, n);
  }

  double alpha2_at(long n) const {
    if (alpha2_schedule) return alpha2_schedule(n);
    return default_ramp(alpha2, n);
  }

 private:
  double default_ramp(double cap, long n) const {
    if (cap == 0.0) return 0.0;
    const double t = static_cast<double>(n - 1) / static_cast<double>(ramp_iters);
    return cap * std::min(1.0, t);
  }
};

// Parameter choice reproducing the classical error-free Tseng scheme:
// alpha1 = alpha2 = 0, lambda_min = eps and
// sigma = (1 - (1-eps)^2) / (2 (1 + (1-eps)^2)), which makes the admissible
// interval exactly [eps, (1-eps)/beta].
inline FbfParams classical_tseng_params(double beta, double eps) {
  if (!(beta > 0.0)) throw parameter_error("classical_tseng_params: beta must be positive");
  if (!(eps > 0.0 && eps < 1.0 / (beta + 1.0))) {
    throw parameter_error("classical_tseng_params: eps must lie in (0, 1/(beta+1)), got " +
                          detail::fmt(eps));
  }
  const double c = (1.0 - eps) * (1.0 - eps);
  FbfParams p;
  p.alpha1 = 0.0;
  p.alpha2 = 0.0;
  p.sigma = (1.0 - c) / (2.0 * (1.0 + c));
  p.lambda_min = eps;
  p.rule = StepBoundRule::no_inertia2;
  return p;
}

// Two consecutive iterates plus the last backward point p_n.
struct FbfState {
  long n = 1;
  HVector x_prev;
  HVector x_curr;
  std::optional<HVector> p_last;

  static FbfState start(const HVector& x0, const HVector& x1) {
    detail::require_same_dim(x0, x1, "FbfState::start");
    return FbfState{1, x0, x1, std::nullopt};
  }
};

namespace detail {

struct StepCoefficients {
  double lambda;
  double a1;
  double a2;
};

// Validates the schedule values at iteration n against the step interval,
// the caps and the monotonicity requirement, then returns them.
inline StepCoefficients resolve_step(const FbfParams& params, long n, double beta) {
  const double lam = params.lambda_at(n, beta);
  const double bound = params.step_bound(beta);
  if (!(lam >= params.lambda_min)) {
    throw schedule_error(n, "step size schedule violated at n = " + std::to_string(n) +
                                ": lambda_n = " + fmt(lam) + " is below lambda_min = " +
                                fmt(params.lambda_min));
  }
  if (!(lam <= bound)) {
    throw schedule_error(n, "step size schedule violated at n = " + std::to_string(n) +
                                ": lambda_n = " + fmt(lam) +
                                " exceeds the step bound " + fmt(bound) + " (beta = " +
                                fmt(beta) + ")");
  }
  const double a1 = params.alpha1_at(n);
  const double a2 = params.alpha2_at(n);
  auto check_cap = [n](double v, double cap, const char* name) {
    if (!(v >= 0.0) || v > cap) {
      throw schedule_error(n, std::string("inertia schedule violated at n = ") +
                                  std::to_string(n) + ": " + name + " = " + fmt(v) +
                                  " outside [0, " + fmt(cap) + "]");
    }
  };
  check_cap(a1, params.alpha1, "alpha1_n");
  check_cap(a2, params.alpha2, "alpha2_n");
  if (n == 1 && !params.equal_start && (a1 != 0.0 || a2 != 0.0)) {
    throw schedule_error(1,
                         "inertia schedule violated at n = 1: alpha_{i,1} must be 0 unless "
                         "x0 = x1 is enforced");
  }
  if (n >= 2) {
    const double a1p = params.alpha1_at(n - 1);
    const double a2p = params.alpha2_at(n - 1);
    if (params.relaxed_sum_monotonicity) {
      if (a1 + a2 < a1p + a2p) {
        throw schedule_error(n, "inertia schedule violated at n = " + std::to_string(n) +
                                    ": alpha1_n + alpha2_n decreased from " + fmt(a1p + a2p) +
                                    " to " + fmt(a1 + a2));
      }
    } else {
      if (a1 < a1p || a2 < a2p) {
        throw schedule_error(n, "inertia schedule violated at n = " + std::to_string(n) +
                                    ": alpha_{i,n} must be nondecreasing");
      }
    }
  }
  return {lam, a1, a2};
}

}  // namespace detail

// One update of the inertial forward-backward-forward scheme:
//   p_n     = J_{lambda_n A}[x_n - lambda_n B x_n + alpha_{1,n} (x_n - x_{n-1})]
//   x_{n+1} = p_n + lambda_n (B x_n - B p_n) + alpha_{2,n} (x_n - x_{n-1})
// Exactly two evaluations of B and one resolvent of A per step. With zero
// inertia coefficients the update reduces bitwise to the classical Tseng
// step (the inertia terms are skipped, not multiplied by zero).
inline FbfState fbf_step(const MaxMonotoneOp& a, const ForwardOp& b, const FbfParams& params,
                         const FbfState& state) {
  if (a.dim() != b.dim() || state.x_curr.dim() != a.dim()) {
    throw dimension_error("fbf_step: operator/iterate dimension mismatch");
  }
  const auto [lam, a1, a2] = detail::resolve_step(params, state.n, b.lipschitz());

  const HVector bx = b(state.x_curr);
  HVector arg = state.x_curr - lam * bx;
  if (a1 != 0.0) arg = arg + a1 * (state.x_curr - state.x_prev);
  HVector p = a.resolvent(lam, arg);
  const HVector bp = b(p);
  HVector x_next = p + lam * (bx - bp);
  if (a2 != 0.0) x_next = x_next + a2 * (state.x_curr - state.x_prev);

  return FbfState{state.n + 1, state.x_curr, std::move(x_next), std::move(p)};
}

enum class Termination { converged, max_iters, parameter_violation };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iters: return "max_iters";
    case Termination::parameter_violation: return "parameter_violation";
  }
  return "unknown";
}

// Scalar convergence record of a run. The partial-sum sequences track the
// two series whose summability the theory guarantees:
// sum ||x_{k+1} - x_k||^2 and sum ||x_k - p_k||^2.
struct SolveReport {
  Termination termination = Termination::max_iters;
  long iterations = 0;
  double final_residual = std::numeric_limits<double>::quiet_NaN();
  HVector final_x;  // last iterate x
  HVector final_p;  // last backward point p

  std::vector<double> residual_history;
  std::vector<double> sq_step_partial_sums;
  std::vector<double> sq_gap_partial_sums;

  // Only populated by the primal-dual driver: the same two series split into
  // the primal (x) part and the aggregated dual (v) part.
  std::vector<double> primal_sq_step_partial_sums;
  std::vector<double> primal_sq_gap_partial_sums;
  std::vector<double> dual_sq_step_partial_sums;
  std::vector<double> dual_sq_gap_partial_sums;

  std::vector<HVector> iterates;  // kept only on request

  long violation_index = -1;
  std::string violation_message;
  std::vector<std::string> notes;
};

struct SolveOptions {
  bool keep_iterates = false;
  // Called after each completed step with the post-step state.
  std::function<void(const FbfState&)> observer;
};

// Iterates the scheme until the relative fixed-point residual
// ||x_n - p_n|| / max(1, ||x_n||) drops to tol or max_iters is reached.
// With equal_start the two starting points must coincide; otherwise the
// schedules must satisfy alpha_{i,1} = 0.
inline SolveReport solve(const MaxMonotoneOp& a, const ForwardOp& b, const FbfParams& params,
                         const HVector& x0, const HVector& x1, double tol, long max_iters,
                         const SolveOptions& opts = {}) {
  params.validate();
  if (!(tol > 0.0)) throw parameter_error("solve: tol must be positive");
  if (max_iters < 1) throw parameter_error("solve: max_iters must be >= 1");
  detail::require_same_dim(x0, x1, "solve");
  if (params.equal_start && !(x0 == x1)) {
    throw parameter_error("solve: equal_start requires x0 = x1 (set equal_start = false to "
                          "start from distinct points with alpha_{i,1} = 0)");
  }

  SolveReport report;
  FbfState state = FbfState::start(x0, x1);
  if (opts.keep_iterates) report.iterates.push_back(x1);

  double step_sum = 0.0;
  double gap_sum = 0.0;
  for (long n = 1; n <= max_iters; ++n) {
    FbfState next;
    try {
      next = fbf_step(a, b, params, state);
    } catch (const schedule_error& e) {
      report.termination = Termination::parameter_violation;
      report.iterations = n - 1;
      report.violation_index = e.index();
      report.violation_message = e.what();
      report.final_x = state.x_curr;
      if (state.p_last) report.final_p = *state.p_last;
      return report;
    }

    const HVector& xn = next.x_prev;       // x_n
    const HVector& p = *next.p_last;       // p_n
    const double gap = norm(xn - p);
    const double step = norm(next.x_curr - xn);
    const double residual = gap / std::max(1.0, norm(xn));
    gap_sum += gap * gap;
    step_sum += step * step;
    report.residual_history.push_back(residual);
    report.sq_gap_partial_sums.push_back(gap_sum);
    report.sq_step_partial_sums.push_back(step_sum);
    if (opts.keep_iterates) report.iterates.push_back(next.x_curr);
    if (opts.observer) opts.observer(next);

    state = std::move(next);
    if (residual <= tol) {
      report.termination = Termination::converged;
      report.iterations = n;
      report.final_residual = residual;
      report.final_x = state.x_curr;
      report.final_p = *state.p_last;
      return report;
    }
  }

  report.termination = Termination::max_iters;
  report.iterations = max_iters;
  report.final_residual = report.residual_history.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                          : report.residual_history.back();
  report.final_x = state.x_curr;
  if (state.p_last) report.final_p = *state.p_last;
  return report;
}

inline SolveReport solve(const MaxMonotoneOp& a, const ForwardOp& b, const FbfParams& params,
                         const HVector& x1, double tol, long max_iters,
                         const SolveOptions& opts = {}) {
  return solve(a, b, params, x1, x1, tol, max_iters, opts);
}

// The scheme with B = 0:
//   x_{n+1} = J_{lambda_n A}[x_n + alpha_{1,n}(x_n - x_{n-1})]
//             + alpha_{2,n}(x_n - x_{n-1}),
// realized by running solve with the zero forward operator, so the
// trajectory agrees with solve(A, 0, ...) bit for bit.
inline SolveReport inertial_proximal_point(const MaxMonotoneOp& a, const FbfParams& params,
                                           const HVector& x0, const HVector& x1, double tol,
                                           long max_iters, const SolveOptions& opts = {}) {
  return solve(a, zero_forward(a.dim()), params, x0, x1, tol, max_iters, opts);
}

// Post-run check that the monitored series behave like convergent ones: the
// fraction contributed by the last half of the iterations should be small.
struct SummabilitySummary {
  double step_series_total = 0.0;
  double gap_series_total = 0.0;
  double step_last_half_fraction = 0.0;
  double gap_last_half_fraction = 0.0;
  double threshold = 0.05;
  bool step_consistent = true;
  bool gap_consistent = true;
  bool consistent = true;
};

namespace detail {

inline double last_half_fraction(const std::vector<double>& partial_sums) {
  if (partial_sums.empty()) return 0.0;
  const std::size_t k = partial_sums.size();
  const double total = partial_sums.back();
  if (total <= 0.0) return 0.0;
  const std::size_t first_half = (k + 1) / 2;
  if (first_half >= k) return 0.0;  // degenerate run, empty tail
  const double tail = total - partial_sums[first_half - 1];
  return tail / total;
}

}  // namespace detail

inline SummabilitySummary summability_diagnostics(const SolveReport& report,
                                                  double threshold = 0.05) {
  SummabilitySummary s;
  s.threshold = threshold;
  s.step_series_total =
      report.sq_step_partial_sums.empty() ? 0.0 : report.sq_step_partial_sums.back();
  s.gap_series_total =
      report.sq_gap_partial_sums.empty() ? 0.0 : report.sq_gap_partial_sums.back();
  s.step_last_half_fraction = detail::last_half_fraction(report.sq_step_partial_sums);
  s.gap_last_half_fraction = detail::last_half_fraction(report.sq_gap_partial_sums);
  s.step_consistent = s.step_last_half_fraction <= threshold;
  s.gap_consistent = s.gap_last_half_fraction <= threshold;
  s.consistent = s.step_consistent && s.gap_consistent;
  return s;
}

}  // namespace ifbf
