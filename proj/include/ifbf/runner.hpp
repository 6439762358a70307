#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "config.hpp"
#include "convex.hpp"
#include "errors.hpp"
#include "fbf.hpp"
#include "hilbert.hpp"
#include "primal_dual.hpp"
#include "trace.hpp"
#include "zoo.hpp"

namespace ifbf {

// Exit codes of the command-line front end.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitMaxIters = 2;
inline constexpr int kExitInvalidConfig = 3;
inline constexpr int kExitNumericFailure = 4;

struct RunResult {
  int exit_code = kExitInvalidConfig;
  Termination termination = Termination::max_iters;
  long iterations = 0;
  double final_residual = std::numeric_limits<double>::quiet_NaN();
  HVector final_point;                // primal final point
  std::vector<HVector> final_duals;   // dual blocks, when the layer has them
  std::optional<double> distance_to_known;
  std::optional<double> final_primal;
  std::optional<double> final_dual;
  std::optional<double> final_gap;
  std::vector<double> optimality_residuals;
  std::string message;
  double wall_seconds = 0.0;
  std::string trace_path;
  std::string problem_description;
  SolveReport report;
};

inline std::string default_trace_path(const RunConfig& cfg) {
  return cfg.problem_name + "-" + to_string(cfg.solver) + ".trace." +
         to_string(cfg.trace_format);
}

namespace detail {

inline int exit_code_for(Termination t) {
  switch (t) {
    case Termination::converged: return kExitConverged;
    case Termination::max_iters: return kExitMaxIters;
    case Termination::parameter_violation: return kExitInvalidConfig;
  }
  return kExitInvalidConfig;
}

}  // namespace detail

// Executes one configured run: build the zoo problem, resolve the scheme
// parameters against its beta, iterate, and write the trace file. All
// configuration and parameter failures are reported through the exit code
// rather than exceptions; numeric blowups carry the offending context.
inline RunResult run(const RunConfig& cfg) {
  RunResult out;
  out.trace_path = cfg.trace_path.empty() ? default_trace_path(cfg) : cfg.trace_path;

  zoo::Instance instance;
  try {
    instance = zoo::make(cfg.problem_name, cfg.problem_params, cfg.seed);
  } catch (const parameter_error& e) {
    out.exit_code = kExitInvalidConfig;
    out.message = e.what();
    return out;
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::optional<double>> primal_values, dual_values;
  try {
    if (cfg.solver == SolverKind::fbf || cfg.solver == SolverKind::inertial_ppa) {
      const auto* inst = std::get_if<zoo::FbfInstance>(&instance);
      if (!inst) {
        throw config_error("config: solver '" + std::string(to_string(cfg.solver)) +
                           "' needs a plain inclusion problem; '" + cfg.problem_name +
                           "' is not one");
      }
      if (cfg.solver == SolverKind::inertial_ppa && !inst->forward_is_zero) {
        throw config_error(
            "config: inertial_ppa applies only to problems with a zero forward operator");
      }
      out.problem_description = inst->description;
      const FbfParams params = cfg.make_params(inst->B.lipschitz());
      out.report = solve(inst->A, inst->B, params, inst->x1, cfg.tol, cfg.max_iters);
      out.final_point = out.report.final_p.empty() ? out.report.final_x : out.report.final_p;
      if (inst->known_solution) {
        out.distance_to_known = norm(out.final_point - *inst->known_solution);
      }
    } else if (cfg.solver == SolverKind::primal_dual) {
      const auto* inst = std::get_if<zoo::PdInstance>(&instance);
      if (!inst) {
        throw config_error("config: solver 'primal_dual' needs a composite inclusion problem; '" +
                           cfg.problem_name + "' is not one");
      }
      out.problem_description = inst->description;
      const FbfParams params = cfg.make_params(beta_of(inst->problem));
      auto [sol, report] = pd_solve(inst->problem, params,
                                    PrimalDualState::start(inst->x1, inst->v1), cfg.tol,
                                    cfg.max_iters);
      out.report = std::move(report);
      out.final_point = sol.x;
      out.final_duals = sol.v;
      out.optimality_residuals = sol.residuals;
      if (inst->planted_x) out.distance_to_known = norm(sol.x - *inst->planted_x);
    } else {
      const auto* inst = std::get_if<zoo::ConvexInstance>(&instance);
      if (!inst) {
        throw config_error("config: solver 'convex' needs a convex optimization problem; '" +
                           cfg.problem_name + "' is not one");
      }
      out.problem_description = inst->description;
      const ConvexProblem& prob = inst->problem;
      const FbfParams params = cfg.make_params(beta_of(to_inclusion(prob)));
      PdSolveOptions opts;
      opts.observer = [&prob, &primal_values, &dual_values](const PrimalDualState& s) {
        primal_values.push_back(primal_objective(prob, *s.p1));
        dual_values.push_back(dual_objective(prob, *s.p2));
      };
      auto [sol, report] = solve_convex(prob, params, convex_start(prob, inst->x1), cfg.tol,
                                        cfg.max_iters, opts);
      out.report = std::move(report);
      out.final_point = sol.x;
      out.final_duals = sol.v;
      out.optimality_residuals = sol.residuals;
      out.final_primal = primal_objective(prob, sol.x);
      out.final_dual = dual_objective(prob, sol.v);
      if (out.final_primal && out.final_dual && std::isfinite(*out.final_primal) &&
          std::isfinite(*out.final_dual)) {
        out.final_gap = *out.final_primal - *out.final_dual;
      }
      if (inst->known_x) out.distance_to_known = norm(sol.x - *inst->known_x);
    }
  } catch (const config_error& e) {
    out.exit_code = kExitInvalidConfig;
    out.message = e.what();
    return out;
  } catch (const parameter_error& e) {
    out.exit_code = kExitInvalidConfig;
    out.message = e.what();
    return out;
  } catch (const numeric_error& e) {
    out.exit_code = kExitNumericFailure;
    out.message = e.what();
    return out;
  }
  const auto t1 = std::chrono::steady_clock::now();
  out.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

  out.termination = out.report.termination;
  out.iterations = out.report.iterations;
  out.final_residual = out.report.final_residual;
  out.exit_code = detail::exit_code_for(out.report.termination);
  if (out.report.termination == Termination::parameter_violation) {
    out.message = out.report.violation_message;
  }

  TraceSummary summary{to_string(out.report.termination), out.report.iterations,
                       out.report.final_residual};
  try {
    write_trace_file(out.trace_path, cfg.trace_format,
                     rows_from_report(out.report, cfg.stride, primal_values, dual_values),
                     summary);
  } catch (const parameter_error& e) {
    out.exit_code = kExitInvalidConfig;
    out.message = e.what();
  }
  return out;
}

struct CompareResult {
  RunResult a;
  RunResult b;
  double final_point_distance = std::numeric_limits<double>::quiet_NaN();
  bool asymmetric_stopping = false;
  int exit_code = kExitConverged;
};

// Runs two configurations of the same problem and reports their iteration
// counts and the distance between the two final points.
inline CompareResult compare(const RunConfig& a, const RunConfig& b) {
  if (a.problem_name != b.problem_name || a.problem_params != b.problem_params) {
    throw config_error("compare: the two configs target different problems");
  }
  if (zoo::is_seeded(a.problem_name) && a.seed != b.seed) {
    throw config_error("compare: '" + a.problem_name +
                       "' is seed-dependent; the two configs must use the same seed");
  }
  CompareResult out;
  out.a = run(a);
  out.b = run(b);
  out.asymmetric_stopping = (a.tol != b.tol) || (a.max_iters != b.max_iters);
  if (out.a.exit_code != kExitInvalidConfig && out.b.exit_code != kExitInvalidConfig &&
      out.a.final_point.dim() == out.b.final_point.dim() && out.a.final_point.dim() > 0) {
    out.final_point_distance = norm(out.a.final_point - out.b.final_point);
  }
  out.exit_code = std::max(out.a.exit_code, out.b.exit_code);
  return out;
}

}  // namespace ifbf
