#include "cellform/report.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace cellform {

using nlohmann::ordered_json;

namespace {

ordered_json json_or_null(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

ordered_json movements_json(const MovementCounts& c) {
  return ordered_json{{"intercell", c.intercell},
                      {"intracell", c.intracell},
                      {"no_movement", c.no_movement}};
}

} // namespace

ordered_json solution_report(const ReportInputs& in) {
  ordered_json out;
  out["formulation"] = to_string(in.config.kind);
  out["engine"] = in.engine;
  out["status"] = milp::to_string(in.status);
  out["objective"] = json_or_null(in.objective);

  ordered_json config;
  config["cells"] = in.config.cell_count;
  config["min_per_cell"] = in.config.min_per_cell;
  config["max_per_cell"] =
      in.config.max_per_cell ? ordered_json(*in.config.max_per_cell) : nullptr;
  config["operating_limit"] = json_or_null(in.config.operating_limit);
  config["investment_budget"] = json_or_null(in.config.investment_budget);
  config["weights"] = ordered_json{{"same_cell", in.config.weight_same_cell},
                                   {"same_machine", in.config.weight_same_machine}};
  out["config"] = std::move(config);

  if (in.solution && in.instance) {
    const GroupingSolution& g = *in.solution;
    const Instance& inst = *in.instance;

    ordered_json plans = ordered_json::object();
    for (const auto& [part, plan] : g.plan_selection) {
      plans[std::to_string(part)] = plan;
    }
    out["plan_selection"] = std::move(plans);

    ordered_json assignments = ordered_json::array();
    for (const auto& [key, where] : g.assignment) {
      assignments.push_back(ordered_json{{"part", std::get<0>(key)},
                                         {"plan", std::get<1>(key)},
                                         {"operation", std::get<2>(key)},
                                         {"machine", where.first},
                                         {"cell", where.second}});
    }
    out["assignments"] = std::move(assignments);

    ordered_json allocation = ordered_json::array();
    for (const auto& [key, copies] : g.allocation) {
      allocation.push_back(ordered_json{
          {"machine", key.first}, {"cell", key.second}, {"copies", copies}});
    }
    out["allocation"] = std::move(allocation);

    ordered_json families = ordered_json::object();
    for (const auto& [part, cell] : g.family) families[std::to_string(part)] = cell;
    out["families"] = std::move(families);

    const MovementReport moves = movements(g, inst);
    ordered_json mv;
    mv["total"] = movements_json(moves.total);
    mv["total"]["pairs"] = moves.total_pairs;
    ordered_json per_part = ordered_json::object();
    for (const auto& [part, counts] : moves.per_part) {
      per_part[std::to_string(part)] = movements_json(counts);
    }
    mv["per_part"] = std::move(per_part);
    out["movements"] = std::move(mv);

    const CostReport costs = cost_breakdown(g, inst);
    ordered_json cj;
    cj["investment"] = costs.investment;
    cj["amortized"] = costs.amortized;
    cj["operating"] = costs.operating;
    ordered_json opp = ordered_json::object();
    for (const auto& [part, value] : costs.operating_per_part) {
      opp[std::to_string(part)] = value;
    }
    cj["operating_per_part"] = std::move(opp);
    ordered_json loads = ordered_json::array();
    for (const auto& [key, load] : costs.load) {
      ordered_json entry{{"machine", key.first}, {"cell", key.second}, {"load", load}};
      auto util = costs.utilization.find(key);
      entry["utilization"] =
          util == costs.utilization.end() ? ordered_json(nullptr) : ordered_json(util->second);
      loads.push_back(std::move(entry));
    }
    cj["loads"] = std::move(loads);
    out["costs"] = std::move(cj);
  } else {
    out["plan_selection"] = nullptr;
    out["assignments"] = nullptr;
    out["allocation"] = nullptr;
    out["families"] = nullptr;
    out["movements"] = nullptr;
    out["costs"] = nullptr;
  }

  if (in.model_stats) {
    out["model_stats"] = ordered_json{{"binary", in.model_stats->binary_count},
                                      {"integer", in.model_stats->integer_count},
                                      {"continuous", in.model_stats->continuous_count},
                                      {"constraints", in.model_stats->constraint_count}};
  } else {
    out["model_stats"] = nullptr;
  }
  if (in.certificate) {
    out["certificate"] = ordered_json{{"best_bound", in.certificate->best_bound},
                                      {"node_count", in.certificate->node_count},
                                      {"wall_time_sec", in.certificate->wall_time_sec}};
  } else {
    out["certificate"] = nullptr;
  }
  out["disagreements"] = in.disagreements;
  return out;
}

namespace {

std::string number_text(const ordered_json& v) {
  if (v.is_null()) return "-";
  std::ostringstream out;
  const double d = v.get<double>();
  if (d == static_cast<long long>(d) && std::abs(d) < 1e15) {
    out << static_cast<long long>(d);
  } else {
    out << std::setprecision(6) << d;
  }
  return out.str();
}

void render_grid(std::ostringstream& out, const std::string& corner,
                 const std::vector<std::string>& col_labels,
                 const std::vector<std::string>& row_labels,
                 const std::vector<std::vector<std::string>>& cells) {
  std::vector<size_t> width(col_labels.size() + 1, 0);
  width[0] = corner.size();
  for (const auto& label : row_labels) width[0] = std::max(width[0], label.size());
  for (size_t c = 0; c < col_labels.size(); ++c) {
    width[c + 1] = col_labels[c].size();
    for (const auto& row : cells) width[c + 1] = std::max(width[c + 1], row[c].size());
  }
  auto pad = [&](const std::string& text, size_t w) {
    out << std::left << std::setw(static_cast<int>(w) + 2) << text;
  };
  pad(corner, width[0]);
  for (size_t c = 0; c < col_labels.size(); ++c) pad(col_labels[c], width[c + 1]);
  out << "\n";
  for (size_t r = 0; r < row_labels.size(); ++r) {
    pad(row_labels[r], width[0]);
    for (size_t c = 0; c < col_labels.size(); ++c) pad(cells[r][c], width[c + 1]);
    out << "\n";
  }
}

} // namespace

std::string render_tables(const ordered_json& report) {
  std::ostringstream out;
  out << "Formulation " << report.at("formulation").get<std::string>() << " ("
      << report.at("engine").get<std::string>() << ")\n";
  out << "Status: " << report.at("status").get<std::string>()
      << "   Objective: " << number_text(report.at("objective")) << "\n";

  const auto& assignments = report.at("assignments");
  if (assignments.is_null()) {
    out << "No solution to display.\n";
  } else {
    // operation x part grid of "machine, cell" entries
    std::map<int, int> part_plan;
    for (const auto& [part, plan] : report.at("plan_selection").items()) {
      part_plan[std::stoi(part)] = plan.get<int>();
    }
    std::set<int> op_ids;
    std::map<std::pair<int, int>, std::string> entry; // (op, part) -> text
    for (const auto& a : assignments) {
      const int part = a.at("part").get<int>();
      const int op = a.at("operation").get<int>();
      op_ids.insert(op);
      entry[{op, part}] = "m" + std::to_string(a.at("machine").get<int>()) + ", c" +
                          std::to_string(a.at("cell").get<int>());
    }
    std::vector<std::string> cols;
    std::vector<int> part_order;
    for (const auto& [part, plan] : part_plan) {
      part_order.push_back(part);
      cols.push_back("k" + std::to_string(part) + " (p" + std::to_string(plan) + ")");
    }
    std::vector<std::string> rows;
    std::vector<std::vector<std::string>> grid;
    for (int op : op_ids) {
      rows.push_back("s" + std::to_string(op));
      std::vector<std::string> line;
      for (int part : part_order) {
        auto it = entry.find({op, part});
        line.push_back(it == entry.end() ? "-" : it->second);
      }
      grid.push_back(std::move(line));
    }
    out << "\nOperation assignment (machine, cell) by part:\n";
    render_grid(out, "op", cols, rows, grid);

    // machine x cell allocation grid
    const int cells = report.at("config").at("cells").get<int>();
    std::map<int, std::vector<int>> copies; // machine -> per-cell
    for (const auto& a : report.at("allocation")) {
      auto& row = copies[a.at("machine").get<int>()];
      row.resize(static_cast<size_t>(cells), 0);
      row[static_cast<size_t>(a.at("cell").get<int>() - 1)] = a.at("copies").get<int>();
    }
    std::vector<std::string> cell_labels;
    for (int c = 1; c <= cells; ++c) cell_labels.push_back("c" + std::to_string(c));
    std::vector<std::string> machine_labels;
    std::vector<std::vector<std::string>> alloc_grid;
    for (const auto& [machine, row] : copies) {
      machine_labels.push_back("m" + std::to_string(machine));
      std::vector<std::string> line;
      for (int c = 0; c < cells; ++c) {
        line.push_back(std::to_string(c < static_cast<int>(row.size())
                                          ? row[static_cast<size_t>(c)]
                                          : 0));
      }
      alloc_grid.push_back(std::move(line));
    }
    out << "\nMachine allocation (copies) by cell:\n";
    render_grid(out, "machine", cell_labels, machine_labels, alloc_grid);

    const auto& mv = report.at("movements").at("total");
    out << "\nMovements: intercell " << mv.at("intercell").get<long long>()
        << ", intracell " << mv.at("intracell").get<long long>() << ", none "
        << mv.at("no_movement").get<long long>() << " (of "
        << mv.at("pairs").get<long long>() << " consecutive pairs)\n";
    const auto& costs = report.at("costs");
    out << "Costs: investment " << number_text(costs.at("investment")) << ", amortized "
        << number_text(costs.at("amortized")) << ", operating "
        << number_text(costs.at("operating")) << "\n";
  }

  const auto& stats = report.at("model_stats");
  if (!stats.is_null()) {
    out << "Model: " << stats.at("binary").get<long long>() << " binary, "
        << stats.at("integer").get<long long>() << " integer, "
        << stats.at("continuous").get<long long>() << " continuous, "
        << stats.at("constraints").get<long long>() << " constraints\n";
  }
  const auto& cert = report.at("certificate");
  if (!cert.is_null()) {
    out << "Certificate: bound " << number_text(cert.at("best_bound")) << ", "
        << cert.at("node_count").get<long long>() << " nodes, "
        << std::setprecision(3) << cert.at("wall_time_sec").get<double>() << " s\n";
  }
  const auto& disagreements = report.at("disagreements");
  if (!disagreements.empty()) {
    out << "Disagreements:\n";
    for (const auto& d : disagreements) out << "  - " << d.get<std::string>() << "\n";
  }
  return out.str();
}

} // namespace cellform
