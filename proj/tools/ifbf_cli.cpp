// Batch front end: run a configured experiment, compare two configurations,
// validate a configuration, or list the problem zoo.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ifbf/config.hpp"
#include "ifbf/runner.hpp"

namespace {

struct Overrides {
  std::optional<double> tol;
  std::optional<long> max_iters;
  std::optional<long> seed;
  std::optional<std::string> trace;
  std::optional<std::string> format;
};

void add_override_flags(CLI::App* cmd, Overrides& ov, bool with_trace) {
  cmd->add_option("--tol", ov.tol, "Override the stopping tolerance");
  cmd->add_option("--max-iters", ov.max_iters, "Override the iteration cap");
  cmd->add_option("--seed", ov.seed, "Override the seed");
  if (with_trace) cmd->add_option("--trace", ov.trace, "Override the trace file path");
  cmd->add_option("--format", ov.format, "Override the trace format (csv or json)")
      ->check(CLI::IsMember({"csv", "json"}));
}

ifbf::RunConfig load_config(const std::string& path, const Overrides& ov) {
  ifbf::RunConfig cfg = ifbf::parse_config_file(path);
  if (ov.tol) cfg.tol = *ov.tol;
  if (ov.max_iters) cfg.max_iters = *ov.max_iters;
  if (ov.seed) cfg.seed = static_cast<std::uint64_t>(*ov.seed);
  if (ov.trace) cfg.trace_path = *ov.trace;
  if (ov.format) cfg.trace_format = (*ov.format == "json") ? ifbf::TraceFormat::json
                                                           : ifbf::TraceFormat::csv;
  return cfg;
}

void print_run(const ifbf::RunResult& r, const ifbf::RunConfig& cfg) {
  std::printf("problem:        %s\n", cfg.problem_name.c_str());
  std::printf("solver:         %s\n", ifbf::to_string(cfg.solver));
  if (!r.problem_description.empty())
    std::printf("description:    %s\n", r.problem_description.c_str());
  if (r.exit_code == ifbf::kExitInvalidConfig || r.exit_code == ifbf::kExitNumericFailure) {
    std::printf("status:         failed (%s)\n", r.message.c_str());
    return;
  }
  std::printf("termination:    %s\n", ifbf::to_string(r.termination));
  std::printf("iterations:     %ld\n", r.iterations);
  std::printf("final residual: %.6e\n", r.final_residual);
  if (r.distance_to_known)
    std::printf("distance to known solution: %.6e\n", *r.distance_to_known);
  if (r.final_primal) std::printf("primal objective: %.12g\n", *r.final_primal);
  if (r.final_dual) std::printf("dual objective:   %.12g\n", *r.final_dual);
  if (r.final_gap) std::printf("objective gap:    %.6e\n", *r.final_gap);
  if (!r.optimality_residuals.empty()) {
    std::printf("optimality residuals:");
    for (double v : r.optimality_residuals) std::printf(" %.3e", v);
    std::printf("\n");
  }
  for (const std::string& note : r.report.notes) std::printf("note: %s\n", note.c_str());
  if (!r.message.empty()) std::printf("message: %s\n", r.message.c_str());
  std::printf("wall time:      %.4f s\n", r.wall_seconds);
  std::printf("trace:          %s\n", r.trace_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inertial forward-backward-forward splitting toolkit"};
  app.require_subcommand(1);

  std::string config_path, config_path_b;
  Overrides ov;

  CLI::App* cmd_run = app.add_subcommand("run", "Execute one configured run");
  cmd_run->add_option("config", config_path, "Run configuration file")->required();
  add_override_flags(cmd_run, ov, true);

  CLI::App* cmd_compare =
      app.add_subcommand("compare", "Run two configurations of the same problem");
  cmd_compare->add_option("configA", config_path, "First configuration")->required();
  cmd_compare->add_option("configB", config_path_b, "Second configuration")->required();
  add_override_flags(cmd_compare, ov, false);

  CLI::App* cmd_validate =
      app.add_subcommand("validate", "Check a configuration without running it");
  cmd_validate->add_option("config", config_path, "Run configuration file")->required();

  CLI::App* cmd_zoo = app.add_subcommand("zoo", "Problem zoo");
  bool zoo_list = false;
  CLI::App* cmd_zoo_list = cmd_zoo->add_subcommand("list", "List the available problems");
  cmd_zoo_list->callback([&zoo_list] { zoo_list = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      const ifbf::RunConfig cfg = load_config(config_path, ov);
      const ifbf::RunResult r = ifbf::run(cfg);
      print_run(r, cfg);
      return r.exit_code;
    }
    if (cmd_compare->parsed()) {
      const ifbf::RunConfig a = load_config(config_path, ov);
      const ifbf::RunConfig b = load_config(config_path_b, ov);
      const ifbf::CompareResult c = ifbf::compare(a, b);
      std::printf("=== run A (%s) ===\n", config_path.c_str());
      print_run(c.a, a);
      std::printf("=== run B (%s) ===\n", config_path_b.c_str());
      print_run(c.b, b);
      std::printf("=== comparison ===\n");
      std::printf("iterations: A = %ld, B = %ld\n", c.a.iterations, c.b.iterations);
      if (std::isfinite(c.final_point_distance))
        std::printf("final-point distance: %.6e\n", c.final_point_distance);
      if (c.asymmetric_stopping)
        std::printf("note: asymmetric stopping rules (tol or max_iters differ)\n");
      std::printf("traces: %s, %s\n", c.a.trace_path.c_str(), c.b.trace_path.c_str());
      return c.exit_code;
    }
    if (cmd_validate->parsed()) {
      const ifbf::RunConfig cfg = load_config(config_path, Overrides{});
      // Build the problem to resolve beta, then validate the parameters and
      // the first scheduled step against the admissible interval.
      const ifbf::zoo::Instance inst =
          ifbf::zoo::make(cfg.problem_name, cfg.problem_params, cfg.seed);
      double beta = 0.0;
      if (const auto* f = std::get_if<ifbf::zoo::FbfInstance>(&inst)) {
        beta = f->B.lipschitz();
      } else if (const auto* p = std::get_if<ifbf::zoo::PdInstance>(&inst)) {
        beta = ifbf::beta_of(p->problem);
      } else if (const auto* c = std::get_if<ifbf::zoo::ConvexInstance>(&inst)) {
        beta = ifbf::beta_of(ifbf::to_inclusion(c->problem));
      }
      const ifbf::FbfParams params = cfg.make_params(beta);
      const auto step = ifbf::detail::resolve_step(params, 1, beta);
      std::printf("config OK: problem '%s', solver %s\n", cfg.problem_name.c_str(),
                  ifbf::to_string(cfg.solver));
      std::printf("beta = %.12g, step bound = %.12g, lambda_1 = %.12g\n", beta,
                  params.step_bound(beta), step.lambda);
      return 0;
    }
    if (zoo_list) {
      for (const auto& e : ifbf::zoo::list()) {
        std::printf("%-14s %s%s\n", e.name.c_str(), e.summary.c_str(),
                    e.seeded ? " (seeded)" : "");
      }
      return 0;
    }
  } catch (const ifbf::numeric_error& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return ifbf::kExitNumericFailure;
  } catch (const ifbf::parameter_error& e) {
    std::fprintf(stderr, "invalid config: %s\n", e.what());
    return ifbf::kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return ifbf::kExitInvalidConfig;
  }
  return 0;
}
