#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cellform/analysis.hpp"
#include "cellform/formulations.hpp"

namespace cellform {

/// Everything a solution report may carry. Pointers may be null when the run
/// produced no solution (infeasible, limit without incumbent).
struct ReportInputs {
  const Instance* instance = nullptr;
  EffectiveConfig config;
  std::string engine; ///< "bb", "oracle", or "both"
  milp::SolveStatus status = milp::SolveStatus::Infeasible;
  std::optional<double> objective;
  const GroupingSolution* solution = nullptr;
  std::optional<ModelStats> model_stats;
  std::optional<milp::Certificate> certificate;
  std::vector<std::string> disagreements;
};

/// Canonical structured artifact: status, objective, configuration echo,
/// plan selection, assignments, allocation, movements, costs, model size,
/// solver certificate, and the disagreement log.
nlohmann::ordered_json solution_report(const ReportInputs& in);

/// Text rendering of a structured report: an operation-by-part grid of
/// "machine, cell" entries, a machine-by-cell allocation grid, and summary
/// lines. Consumes exactly what solution_report produces.
std::string render_tables(const nlohmann::ordered_json& report);

} // namespace cellform
