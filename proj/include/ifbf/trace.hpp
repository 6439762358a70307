#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "errors.hpp"
#include "fbf.hpp"

namespace ifbf {

// One trace record per (strided) iteration. Objective columns are present
// only for runs whose problem registers the needed value evaluators, and
// only when finite.
struct TraceRow {
  long n = 0;
  double residual = 0.0;
  double step_sq_partial = 0.0;
  double gap_sq_partial = 0.0;
  std::optional<double> primal_value;
  std::optional<double> dual_value;
  std::optional<double> objective_gap;
};

struct TraceSummary {
  std::string termination;
  long iterations = 0;
  double final_residual = 0.0;
};

inline constexpr const char* kTraceCsvHeader =
    "n,residual,step_sq_partial,gap_sq_partial,primal_value,dual_value,objective_gap";

namespace detail {

inline std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string csv_cell(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return "";
  return fmt_full(*v);
}

}  // namespace detail

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows,
                            const TraceSummary& summary) {
  os << kTraceCsvHeader << "\n";
  for (const TraceRow& r : rows) {
    os << r.n << ',' << detail::fmt_full(r.residual) << ',' << detail::fmt_full(r.step_sq_partial)
       << ',' << detail::fmt_full(r.gap_sq_partial) << ',' << detail::csv_cell(r.primal_value)
       << ',' << detail::csv_cell(r.dual_value) << ',' << detail::csv_cell(r.objective_gap)
       << "\n";
  }
  os << "# termination=" << summary.termination << " iterations=" << summary.iterations
     << " final_residual=" << detail::fmt_full(summary.final_residual) << "\n";
}

inline void write_trace_json(std::ostream& os, const std::vector<TraceRow>& rows,
                             const TraceSummary& summary) {
  nlohmann::json doc;
  doc["rows"] = nlohmann::json::array();
  for (const TraceRow& r : rows) {
    nlohmann::json jr;
    jr["n"] = r.n;
    jr["residual"] = r.residual;
    jr["step_sq_partial"] = r.step_sq_partial;
    jr["gap_sq_partial"] = r.gap_sq_partial;
    auto put = [&jr](const char* key, const std::optional<double>& v) {
      if (v && std::isfinite(*v)) jr[key] = *v;
      else jr[key] = nullptr;
    };
    put("primal_value", r.primal_value);
    put("dual_value", r.dual_value);
    put("objective_gap", r.objective_gap);
    doc["rows"].push_back(std::move(jr));
  }
  doc["summary"] = {{"termination", summary.termination},
                    {"iterations", summary.iterations},
                    {"final_residual", summary.final_residual}};
  os << doc.dump(2) << "\n";
}

inline void write_trace_file(const std::string& path, TraceFormat format,
                             const std::vector<TraceRow>& rows, const TraceSummary& summary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("trace: cannot open '" + path + "' for writing");
  if (format == TraceFormat::csv) {
    write_trace_csv(out, rows, summary);
  } else {
    write_trace_json(out, rows, summary);
  }
}

// Builds the strided row list from a solve report; the final iteration is
// always included.
inline std::vector<TraceRow> rows_from_report(
    const SolveReport& report, long stride,
    const std::vector<std::optional<double>>& primal_values = {},
    const std::vector<std::optional<double>>& dual_values = {}) {
  std::vector<TraceRow> rows;
  const std::size_t k = report.residual_history.size();
  for (std::size_t i = 0; i < k; ++i) {
    const bool last = (i + 1 == k);
    if (!last && (i % static_cast<std::size_t>(stride)) != 0) continue;
    TraceRow r;
    r.n = static_cast<long>(i + 1);
    r.residual = report.residual_history[i];
    r.step_sq_partial = report.sq_step_partial_sums[i];
    r.gap_sq_partial = report.sq_gap_partial_sums[i];
    if (i < primal_values.size()) r.primal_value = primal_values[i];
    if (i < dual_values.size()) r.dual_value = dual_values[i];
    if (r.primal_value && r.dual_value && std::isfinite(*r.primal_value) &&
        std::isfinite(*r.dual_value)) {
      r.objective_gap = *r.primal_value - *r.dual_value;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace ifbf
