#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fbf.hpp"
#include "zoo.hpp"

namespace ifbf {

enum class SolverKind { fbf, inertial_ppa, primal_dual, convex };

inline const char* to_string(SolverKind s) {
  switch (s) {
    case SolverKind::fbf: return "fbf";
    case SolverKind::inertial_ppa: return "inertial_ppa";
    case SolverKind::primal_dual: return "primal_dual";
    case SolverKind::convex: return "convex";
  }
  return "unknown";
}

enum class TraceFormat { csv, json };

inline const char* to_string(TraceFormat f) {
  return f == TraceFormat::csv ? "csv" : "json";
}

// One experiment: a zoo problem, a solver layer, the scheme parameters, the
// stopping rule and the trace destination. Parsed from a key-value file with
// [run], [problem] and [params] sections.
struct RunConfig {
  SolverKind solver = SolverKind::fbf;
  std::string problem_name;
  zoo::Params problem_params;

  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double sigma = 0.125;
  double lambda_min = 1e-9;
  std::optional<double> lambda_const;
  double lambda_fraction = 0.99;
  std::string rule = "general";  // general | no-inertia2 | classical
  std::optional<double> epsilon;
  long ramp_iters = 10;
  bool equal_start = true;
  bool relaxed_sum = false;

  double tol = 1e-8;
  long max_iters = 10000;
  std::uint64_t seed = 0;
  std::string trace_path;
  TraceFormat trace_format = TraceFormat::csv;
  long stride = 1;

  // Scheme parameters need beta (problem-dependent) only in classical mode,
  // where eps fixes sigma and the admissible interval [eps, (1-eps)/beta].
  FbfParams make_params(double beta) const {
    FbfParams p;
    if (rule == "classical") {
      if (alpha1 != 0.0 || alpha2 != 0.0) {
        throw config_error("config: classical rule requires alpha1 = alpha2 = 0");
      }
      p = classical_tseng_params(beta, epsilon.value_or(0.1));
    } else if (rule == "no-inertia2") {
      p.rule = StepBoundRule::no_inertia2;
      p.alpha1 = alpha1;
      p.alpha2 = alpha2;
      p.sigma = sigma;
      p.lambda_min = lambda_min;
    } else if (rule == "general") {
      p.rule = StepBoundRule::general;
      p.alpha1 = alpha1;
      p.alpha2 = alpha2;
      p.sigma = sigma;
      p.lambda_min = lambda_min;
    } else {
      throw config_error("config: unknown rule '" + rule +
                         "' (expected general, no-inertia2 or classical)");
    }
    p.lambda_const = lambda_const;
    p.lambda_fraction = lambda_fraction;
    p.ramp_iters = ramp_iters;
    p.equal_start = equal_start;
    p.relaxed_sum_monotonicity = relaxed_sum;
    p.validate();
    return p;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw config_error("config: cannot parse '" + key + " = " + value + "' as a number");
  }
}

inline long parse_long(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const long n = static_cast<long>(v);
  if (static_cast<double>(n) != v) {
    throw config_error("config: '" + key + "' must be an integer, got " + value);
  }
  return n;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw config_error("config: cannot parse '" + key + " = " + value + "' as a boolean");
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in, const std::string& origin = "<stream>") {
  RunConfig cfg;
  std::string section;
  std::string line;
  long lineno = 0;
  bool have_solver = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw config_error("config: unterminated section at " + where);
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "run" && section != "problem" && section != "params") {
        throw config_error("config: unknown section [" + section + "] at " + where);
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("config: expected 'key = value' at " + where);
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw config_error("config: empty key or value at " + where);
    }

    if (section == "problem") {
      if (key == "name") {
        cfg.problem_name = value;
      } else {
        if (cfg.problem_params.count(key)) {
          throw config_error("config: duplicate problem parameter '" + key + "' at " + where);
        }
        cfg.problem_params[key] = value;
      }
      continue;
    }
    if (section == "run") {
      if (key == "solver") {
        have_solver = true;
        if (value == "fbf") cfg.solver = SolverKind::fbf;
        else if (value == "inertial_ppa") cfg.solver = SolverKind::inertial_ppa;
        else if (value == "primal_dual") cfg.solver = SolverKind::primal_dual;
        else if (value == "convex") cfg.solver = SolverKind::convex;
        else throw config_error("config: unknown solver '" + value + "' at " + where);
      } else if (key == "tol") {
        cfg.tol = detail::parse_double(key, value);
      } else if (key == "max_iters") {
        cfg.max_iters = detail::parse_long(key, value);
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(detail::parse_long(key, value));
      } else if (key == "trace") {
        cfg.trace_path = value;
      } else if (key == "format") {
        if (value == "csv") cfg.trace_format = TraceFormat::csv;
        else if (value == "json") cfg.trace_format = TraceFormat::json;
        else throw config_error("config: unknown trace format '" + value + "' at " + where);
      } else if (key == "stride") {
        cfg.stride = detail::parse_long(key, value);
        if (cfg.stride < 1) throw config_error("config: stride must be >= 1 at " + where);
      } else {
        throw config_error("config: unknown key '" + key + "' in [run] at " + where);
      }
      continue;
    }
    if (section == "params") {
      if (key == "alpha1") cfg.alpha1 = detail::parse_double(key, value);
      else if (key == "alpha2") cfg.alpha2 = detail::parse_double(key, value);
      else if (key == "sigma") cfg.sigma = detail::parse_double(key, value);
      else if (key == "lambda") {
        if (value == "auto") cfg.lambda_const.reset();
        else cfg.lambda_const = detail::parse_double(key, value);
      } else if (key == "lambda_fraction") cfg.lambda_fraction = detail::parse_double(key, value);
      else if (key == "lambda_min") cfg.lambda_min = detail::parse_double(key, value);
      else if (key == "rule") cfg.rule = value;
      else if (key == "epsilon") cfg.epsilon = detail::parse_double(key, value);
      else if (key == "ramp_iters") cfg.ramp_iters = detail::parse_long(key, value);
      else if (key == "equal_start") cfg.equal_start = detail::parse_bool(key, value);
      else if (key == "relaxed_sum") cfg.relaxed_sum = detail::parse_bool(key, value);
      else throw config_error("config: unknown key '" + key + "' in [params] at " + where);
      continue;
    }
    throw config_error("config: key '" + key + "' outside any section at " + where);
  }
  if (cfg.problem_name.empty()) {
    throw config_error("config: missing problem name ([problem] section, key 'name')");
  }
  if (!have_solver) {
    throw config_error("config: missing solver ([run] section, key 'solver')");
  }
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  return parse_config(in, path);
}

}  // namespace ifbf
