#include "cellform/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cellform {
namespace {

constexpr double kIntTol = 1e-6;
constexpr double kFeasTol = 1e-6;

std::string y_label(const VarIndex::YKey& k) {
  auto [part, plan, cell] = k;
  std::ostringstream out;
  out << "Y[k" << part << ".p" << plan;
  if (cell > 0) out << ".c" << cell;
  out << "]";
  return out.str();
}

std::string x_label(const VarIndex::XKey& k) {
  auto [part, plan, op, machine, cell] = k;
  std::ostringstream out;
  out << "X[k" << part << ".p" << plan << ".s" << op << ".m" << machine << ".c"
      << cell << "]";
  return out.str();
}

std::string n_label(int machine, int cell) {
  return "N[m" + std::to_string(machine) + ".c" + std::to_string(cell) + "]";
}

long long round_integral(double value, const std::string& label) {
  const double rounded = std::round(value);
  if (std::fabs(value - rounded) > kIntTol) {
    std::ostringstream out;
    out << label << " has non-integral value " << value;
    throw std::invalid_argument(out.str());
  }
  return static_cast<long long>(rounded);
}

/// Fill z, family, and visits from the primary fields.
void derive_membership(GroupingSolution& g, const Instance& inst) {
  g.z.clear();
  g.family.clear();
  g.visits.clear();
  for (const auto& [key, copies] : g.allocation) g.z[key] = copies > 0 ? 1 : 0;
  std::map<int, std::map<int, int>> ops_per_cell; // part -> cell -> count
  for (const auto& [key, where] : g.assignment) {
    const int part = std::get<0>(key);
    g.visits[part].insert(where.second);
    ops_per_cell[part][where.second] += 1;
  }
  for (const Part& part : inst.parts) {
    auto it = ops_per_cell.find(part.id);
    if (it == ops_per_cell.end()) continue;
    int best_cell = 0;
    int best_count = -1;
    for (const auto& [cell, count] : it->second) {
      if (count > best_count) { // ties keep the lowest cell, map order is ascending
        best_cell = cell;
        best_count = count;
      }
    }
    g.family[part.id] = best_cell;
  }
}

const ProcessPlan& selected_plan(const GroupingSolution& g, const Part& part) {
  auto it = g.plan_selection.find(part.id);
  if (it == g.plan_selection.end()) {
    throw std::invalid_argument("no plan selected for part k" + std::to_string(part.id));
  }
  const ProcessPlan* plan = part.plan_by_id(it->second);
  if (!plan) {
    throw std::invalid_argument("part k" + std::to_string(part.id) +
                                " has no plan p" + std::to_string(it->second));
  }
  return *plan;
}

std::pair<int, int> assignment_of(const GroupingSolution& g, int part, int plan,
                                  int op) {
  auto it = g.assignment.find({part, plan, op});
  if (it == g.assignment.end()) {
    std::ostringstream out;
    out << "operation s" << op << " of part k" << part << " (plan p" << plan
        << ") is not assigned";
    throw std::invalid_argument(out.str());
  }
  return it->second;
}

} // namespace

GroupingSolution decode(const milp::MilpSolution& sol, const VarIndex& index,
                        const Instance& inst) {
  if (sol.values.empty()) {
    throw std::invalid_argument("solution carries no values to decode");
  }
  auto value_of = [&](int var, const std::string& label) -> double {
    if (var < 0 || var >= static_cast<int>(sol.values.size())) {
      throw std::invalid_argument(label + " is out of range of the solution values");
    }
    return sol.values[static_cast<size_t>(var)];
  };

  GroupingSolution g;
  std::map<int, int> chosen_cell; // part -> cell, plan-per-cell variants only
  for (const auto& [key, var] : index.y) {
    const std::string label = y_label(key);
    const long long v = round_integral(value_of(var, label), label);
    if (v == 0) continue;
    if (v != 1) throw std::invalid_argument(label + " is not a 0/1 value");
    auto [part, plan, cell] = key;
    if (g.plan_selection.count(part)) {
      throw std::invalid_argument("part k" + std::to_string(part) +
                                  " has more than one active plan indicator");
    }
    g.plan_selection[part] = plan;
    if (index.plan_per_cell) chosen_cell[part] = cell;
  }
  for (const Part& part : inst.parts) {
    if (!g.plan_selection.count(part.id)) {
      throw std::invalid_argument("no plan selected for part k" + std::to_string(part.id));
    }
  }

  for (const auto& [key, var] : index.x) {
    const std::string label = x_label(key);
    const long long v = round_integral(value_of(var, label), label);
    if (v == 0) continue;
    if (v != 1) throw std::invalid_argument(label + " is not a 0/1 value");
    auto [part, plan, op, machine, cell] = key;
    auto sel = g.plan_selection.find(part);
    if (sel == g.plan_selection.end() || sel->second != plan) {
      throw std::invalid_argument(label + " is active without its plan indicator");
    }
    if (index.plan_per_cell && chosen_cell[part] != cell) {
      throw std::invalid_argument(label + " lies outside the cell of its plan indicator");
    }
    auto [it, inserted] = g.assignment.emplace(
        std::tuple<int, int, int>{part, plan, op}, std::pair<int, int>{machine, cell});
    if (!inserted) {
      throw std::invalid_argument(label + " assigns an operation twice");
    }
  }
  for (const Part& part : inst.parts) {
    const ProcessPlan& plan = selected_plan(g, part);
    for (const OperationSpec& op : plan.operations) {
      assignment_of(g, part.id, plan.id, op.id); // throws when missing
    }
  }

  for (const auto& [key, var] : index.n) {
    const std::string label = n_label(key.first, key.second);
    const long long copies = round_integral(value_of(var, label), label);
    if (copies < 0) throw std::invalid_argument(label + " is negative");
    g.allocation[key] = static_cast<int>(copies);
  }

  derive_membership(g, inst);
  return g;
}

MovementReport movements(const GroupingSolution& g, const Instance& inst) {
  MovementReport rep;
  for (const Part& part : inst.parts) {
    const ProcessPlan& plan = selected_plan(g, part);
    MovementCounts& mine = rep.per_part[part.id];
    for (const auto& [a, b] : consecutive_pairs(plan)) {
      const auto at_a = assignment_of(g, part.id, plan.id, a);
      const auto at_b = assignment_of(g, part.id, plan.id, b);
      rep.total_pairs += 1;
      if (at_a.second != at_b.second) {
        mine.intercell += 1;
        rep.total.intercell += 1;
      } else if (at_a.first != at_b.first) {
        mine.intracell += 1;
        rep.total.intracell += 1;
      } else {
        mine.no_movement += 1;
        rep.total.no_movement += 1;
      }
    }
  }
  return rep;
}

CostReport cost_breakdown(const GroupingSolution& g, const Instance& inst) {
  CostReport rep;
  for (const auto& [key, copies] : g.allocation) {
    const MachineType* mt = inst.machine_by_id(key.first);
    if (!mt) {
      throw std::invalid_argument("allocation names unknown machine m" +
                                  std::to_string(key.first));
    }
    rep.investment += copies * mt->invest_cost.value_or(0.0);
    rep.amortized += copies * mt->amortized_cost.value_or(0.0);
  }
  for (const Part& part : inst.parts) {
    const ProcessPlan& plan = selected_plan(g, part);
    double subtotal = 0.0;
    for (const OperationSpec& op : plan.operations) {
      const auto [machine, cell] = assignment_of(g, part.id, plan.id, op.id);
      const Eligibility* elig = op.eligibility_for(machine);
      if (!elig) {
        std::ostringstream out;
        out << "operation s" << op.id << " of part k" << part.id
            << " is assigned to ineligible machine m" << machine;
        throw std::invalid_argument(out.str());
      }
      rep.load[{machine, cell}] += part.demand * elig->time;
      rep.machine_time_per_part[{part.id, machine}] += elig->time;
      subtotal += part.demand * elig->op_cost;
    }
    rep.operating_per_part[part.id] = subtotal;
    rep.operating += subtotal;
  }
  for (const auto& [key, copies] : g.allocation) {
    if (copies <= 0) continue;
    const MachineType* mt = inst.machine_by_id(key.first);
    auto it = rep.load.find(key);
    const double load = it == rep.load.end() ? 0.0 : it->second;
    rep.utilization[key] = load / (mt->capacity * copies);
  }
  return rep;
}

FeasibilityReport verify_solution(const GroupingSolution& g, const Instance& inst,
                                  FormulationKind kind,
                                  const FormulationOptions& opts) {
  const EffectiveConfig cfg = resolve_config(inst, kind, opts);
  FeasibilityReport rep;
  auto violate = [&](std::string row, double slack, std::string detail) {
    rep.violations.push_back({std::move(row), slack, std::move(detail)});
  };
  const bool single_cell_plans = kind == FormulationKind::II ||
                                 kind == FormulationKind::III ||
                                 kind == FormulationKind::Phase1;

  std::map<std::pair<int, int>, double> load; // (machine, cell) -> time
  double operating_total = 0.0;
  double pair_score = 0.0;

  for (const Part& part : inst.parts) {
    auto sel = g.plan_selection.find(part.id);
    const ProcessPlan* plan =
        sel == g.plan_selection.end() ? nullptr : part.plan_by_id(sel->second);
    if (!plan) {
      violate("plan-choice[k" + std::to_string(part.id) + "]", -1.0,
              "no valid plan selected");
      continue;
    }
    std::set<int> cells_used;
    bool complete = true;
    for (const OperationSpec& op : plan->operations) {
      std::ostringstream row;
      row << "op-assignment[k" << part.id << ".p" << plan->id << ".s" << op.id << "]";
      auto it = g.assignment.find({part.id, plan->id, op.id});
      if (it == g.assignment.end()) {
        violate(row.str(), -1.0, "operation is not assigned");
        complete = false;
        continue;
      }
      const auto [machine, cell] = it->second;
      const Eligibility* elig = op.eligibility_for(machine);
      if (!elig) {
        violate(row.str(), -1.0,
                "machine m" + std::to_string(machine) + " cannot run this operation");
        complete = false;
        continue;
      }
      if (cell < 1 || cell > cfg.cell_count) {
        violate(row.str(), -1.0, "cell c" + std::to_string(cell) + " is out of range");
        complete = false;
        continue;
      }
      cells_used.insert(cell);
      load[{machine, cell}] += part.demand * elig->time;
      operating_total += part.demand * elig->op_cost;
    }
    if (single_cell_plans && cells_used.size() > 1) {
      std::ostringstream detail;
      detail << "operations spread over " << cells_used.size()
             << " cells but the whole plan must stay in one";
      violate("op-assignment[k" + std::to_string(part.id) + "]",
              -static_cast<double>(cells_used.size() - 1), detail.str());
    }
    if (complete) {
      for (const auto& [a, b] : consecutive_pairs(*plan)) {
        const auto at_a = g.assignment.at({part.id, plan->id, a});
        const auto at_b = g.assignment.at({part.id, plan->id, b});
        if (at_a.second != at_b.second) continue;
        pair_score += at_a.first == at_b.first ? cfg.weight_same_machine
                                               : cfg.weight_same_cell;
      }
    }
  }

  auto copies_at = [&](int machine, int cell) {
    auto it = g.allocation.find({machine, cell});
    return it == g.allocation.end() ? 0 : it->second;
  };
  for (const auto& [key, copies] : g.allocation) {
    if (copies < 0) {
      violate("copy-bounds[m" + std::to_string(key.first) + ".c" +
                  std::to_string(key.second) + "]",
              static_cast<double>(copies), "machine copies cannot be negative");
    }
  }
  for (const MachineType& mt : inst.machines) {
    for (int c = 1; c <= cfg.cell_count; ++c) {
      auto it = load.find({mt.id, c});
      const double used = it == load.end() ? 0.0 : it->second;
      const double slack = mt.capacity * copies_at(mt.id, c) - used;
      if (slack < -kFeasTol) {
        std::ostringstream detail;
        detail << "load " << used << " exceeds capacity "
               << mt.capacity * copies_at(mt.id, c);
        violate("machine-load[m" + std::to_string(mt.id) + ".c" + std::to_string(c) + "]",
                slack, detail.str());
      }
    }
  }

  std::vector<long long> cell_size(static_cast<size_t>(cfg.cell_count) + 1, 0);
  for (const auto& [key, copies] : g.allocation) {
    if (key.second >= 1 && key.second <= cfg.cell_count) {
      cell_size[static_cast<size_t>(key.second)] += copies;
    }
  }
  if (kind == FormulationKind::I) {
    for (int c = 1; c <= cfg.cell_count; ++c) {
      const double slack = static_cast<double>(cell_size[static_cast<size_t>(c)]) -
                           cfg.min_at(c);
      if (slack < -kFeasTol) {
        violate("cell-min[c" + std::to_string(c) + "]", slack,
                "cell holds fewer machines than the minimum " +
                    std::to_string(cfg.min_at(c)));
      }
    }
    for (const MachineType& mt : inst.machines) {
      if (!mt.available_copies) continue;
      long long used = 0;
      for (int c = 1; c <= cfg.cell_count; ++c) used += copies_at(mt.id, c);
      const double slack = static_cast<double>(*mt.available_copies - used);
      if (slack < -kFeasTol) {
        violate("availability[m" + std::to_string(mt.id) + "]", slack,
                "more copies allocated than the " +
                    std::to_string(*mt.available_copies) + " available");
      }
    }
  }
  if (cfg.max_per_cell) {
    for (int c = 1; c <= cfg.cell_count; ++c) {
      const double slack = static_cast<double>(*cfg.max_at(c)) -
                           static_cast<double>(cell_size[static_cast<size_t>(c)]);
      if (slack < -kFeasTol) {
        violate("cell-max[c" + std::to_string(c) + "]", slack,
                "cell holds more machines than the maximum " +
                    std::to_string(*cfg.max_at(c)));
      }
    }
  }

  double invest_total = 0.0;
  double amortized_total = 0.0;
  for (const auto& [key, copies] : g.allocation) {
    const MachineType* mt = inst.machine_by_id(key.first);
    if (!mt) continue;
    invest_total += copies * mt->invest_cost.value_or(0.0);
    amortized_total += copies * mt->amortized_cost.value_or(0.0);
  }
  const bool wants_operating_cap =
      kind == FormulationKind::II || kind == FormulationKind::IV;
  if (wants_operating_cap && cfg.operating_limit) {
    const double slack = *cfg.operating_limit - operating_total;
    if (slack < -kFeasTol) {
      violate("operating-limit", slack,
              "operating cost " + std::to_string(operating_total) +
                  " exceeds the cap");
    }
  }
  if (kind == FormulationKind::IV && cfg.investment_budget) {
    const double slack = *cfg.investment_budget - invest_total;
    if (slack < -kFeasTol) {
      violate("investment-budget", slack,
              "investment " + std::to_string(invest_total) + " exceeds the budget");
    }
  }

  switch (kind) {
    case FormulationKind::I:
    case FormulationKind::IV:
      rep.objective = pair_score;
      break;
    case FormulationKind::II:
      rep.objective = invest_total;
      break;
    case FormulationKind::III:
    case FormulationKind::Phase1:
      rep.objective = amortized_total + operating_total;
      break;
  }
  return rep;
}

namespace {

/// One fully specified way to run a part: a plan plus machine/cell choices
/// for every operation, with the leaf-invariant pieces precomputed.
struct PartChoice {
  const ProcessPlan* plan = nullptr;
  std::vector<std::tuple<int, int, int>> ops; ///< (op id, machine, cell)
  std::vector<std::pair<int, double>> load_terms; ///< (machine*C+cell-1, demand*time)
  double operating = 0.0;  ///< demand-weighted operating cost
  double pair_score = 0.0; ///< weighted same-cell consecutive pairs
};

struct OracleSetup {
  std::vector<std::vector<PartChoice>> choices; // one list per part
  std::vector<int> machine_ids;
  std::map<int, int> machine_slot; // machine id -> dense index
  std::vector<int> pad_order;      // machine slots, cheapest investment first
};

void finish_choice(const Instance& inst, const Part& part, const EffectiveConfig& cfg,
                   const std::map<int, int>& machine_slot, PartChoice& choice) {
  std::map<int, size_t> op_pos;
  for (size_t i = 0; i < choice.ops.size(); ++i) {
    op_pos[std::get<0>(choice.ops[i])] = i;
  }
  for (const auto& [op_id, machine, cell] : choice.ops) {
    const OperationSpec* op = choice.plan->operation_by_id(op_id);
    const Eligibility* elig = op->eligibility_for(machine);
    const int slot =
        machine_slot.at(machine) * cfg.cell_count + (cell - 1);
    choice.load_terms.push_back({slot, part.demand * elig->time});
    choice.operating += part.demand * elig->op_cost;
  }
  for (const auto& [a, b] : consecutive_pairs(*choice.plan)) {
    const auto& at_a = choice.ops[op_pos.at(a)];
    const auto& at_b = choice.ops[op_pos.at(b)];
    if (std::get<2>(at_a) != std::get<2>(at_b)) continue;
    choice.pair_score += std::get<1>(at_a) == std::get<1>(at_b)
                             ? cfg.weight_same_machine
                             : cfg.weight_same_cell;
  }
  (void)inst;
}

/// Enumerate each part's choices in a fixed order: plans as listed, then for
/// free-cell kinds every operation's (machine, cell) with machines ascending
/// and cells innermost; for single-cell kinds the cell first, then machines
/// per operation. Earlier entries are lexicographically smaller.
std::vector<PartChoice> part_choices(const Instance& inst, const Part& part,
                                     const EffectiveConfig& cfg, bool single_cell,
                                     const std::map<int, int>& machine_slot) {
  std::vector<PartChoice> out;
  for (const ProcessPlan& plan : part.plans) {
    const size_t op_count = plan.operations.size();
    std::vector<std::vector<int>> machines(op_count);
    for (size_t i = 0; i < op_count; ++i) machines[i] = plan.operations[i].machines();
    if (single_cell) {
      for (int c = 1; c <= cfg.cell_count; ++c) {
        std::vector<size_t> pick(op_count, 0);
        while (true) {
          PartChoice choice;
          choice.plan = &plan;
          for (size_t i = 0; i < op_count; ++i) {
            choice.ops.push_back({plan.operations[i].id, machines[i][pick[i]], c});
          }
          finish_choice(inst, part, cfg, machine_slot, choice);
          out.push_back(std::move(choice));
          size_t i = op_count;
          while (i > 0 && ++pick[i - 1] == machines[i - 1].size()) pick[--i] = 0;
          if (i == 0) break;
        }
      }
    } else {
      // joint (machine, cell) selector per operation, cell varies fastest
      std::vector<size_t> pick(op_count, 0);
      std::vector<size_t> width(op_count);
      for (size_t i = 0; i < op_count; ++i) {
        width[i] = machines[i].size() * static_cast<size_t>(cfg.cell_count);
      }
      while (true) {
        PartChoice choice;
        choice.plan = &plan;
        for (size_t i = 0; i < op_count; ++i) {
          const int machine =
              machines[i][pick[i] / static_cast<size_t>(cfg.cell_count)];
          const int cell = static_cast<int>(pick[i] % static_cast<size_t>(cfg.cell_count)) + 1;
          choice.ops.push_back({plan.operations[i].id, machine, cell});
        }
        finish_choice(inst, part, cfg, machine_slot, choice);
        out.push_back(std::move(choice));
        size_t i = op_count;
        while (i > 0 && ++pick[i - 1] == width[i - 1]) pick[--i] = 0;
        if (i == 0) break;
      }
    }
  }
  return out;
}

/// Evaluate one leaf: minimal copy counts from load ceilings, kind-specific
/// feasibility, and the objective. Returns false when infeasible.
bool evaluate_leaf(const OracleSetup& setup, const Instance& inst,
                   const EffectiveConfig& cfg, const std::vector<int>& pick,
                   std::vector<int>& copies, double& objective) {
  const int cells = cfg.cell_count;
  const size_t slots = setup.machine_ids.size() * static_cast<size_t>(cells);
  static thread_local std::vector<double> load;
  load.assign(slots, 0.0);
  copies.assign(slots, 0);

  double operating = 0.0;
  double pair_score = 0.0;
  for (size_t k = 0; k < pick.size(); ++k) {
    const PartChoice& choice = setup.choices[k][static_cast<size_t>(pick[k])];
    for (const auto& [slot, amount] : choice.load_terms) load[static_cast<size_t>(slot)] += amount;
    operating += choice.operating;
    pair_score += choice.pair_score;
  }
  for (size_t mi = 0; mi < setup.machine_ids.size(); ++mi) {
    const double cap = inst.machines[mi].capacity;
    for (int c = 0; c < cells; ++c) {
      const size_t slot = mi * static_cast<size_t>(cells) + static_cast<size_t>(c);
      if (load[slot] > 0.0) {
        copies[slot] = static_cast<int>(std::ceil(load[slot] / cap - 1e-9));
      }
    }
  }

  const FormulationKind kind = cfg.kind;
  if (kind == FormulationKind::I) {
    std::vector<int> remaining(setup.machine_ids.size());
    for (size_t mi = 0; mi < setup.machine_ids.size(); ++mi) {
      const auto& avail = inst.machines[mi].available_copies;
      int used = 0;
      for (int c = 0; c < cells; ++c) used += copies[mi * static_cast<size_t>(cells) + static_cast<size_t>(c)];
      const int cap = avail ? *avail : std::numeric_limits<int>::max();
      if (used > cap) return false;
      remaining[mi] = cap - used;
    }
    for (int c = 1; c <= cells; ++c) {
      int size = 0;
      for (size_t mi = 0; mi < setup.machine_ids.size(); ++mi) {
        size += copies[mi * static_cast<size_t>(cells) + static_cast<size_t>(c - 1)];
      }
      const auto limit = cfg.max_at(c);
      if (limit && size > *limit) return false;
      // pad undersized cells with the cheapest machines still available
      while (size < cfg.min_at(c)) {
        bool padded = false;
        for (int mi : setup.pad_order) {
          if (remaining[static_cast<size_t>(mi)] <= 0) continue;
          remaining[static_cast<size_t>(mi)] -= 1;
          copies[static_cast<size_t>(mi) * static_cast<size_t>(cells) +
                 static_cast<size_t>(c - 1)] += 1;
          size += 1;
          padded = true;
          break;
        }
        if (!padded) return false;
      }
    }
  } else if (cfg.max_per_cell) {
    for (int c = 1; c <= cells; ++c) {
      int size = 0;
      for (size_t mi = 0; mi < setup.machine_ids.size(); ++mi) {
        size += copies[mi * static_cast<size_t>(cells) + static_cast<size_t>(c - 1)];
      }
      if (size > *cfg.max_at(c)) return false;
    }
  }

  double invest = 0.0;
  double amortized = 0.0;
  if (kind != FormulationKind::I) {
    for (size_t mi = 0; mi < setup.machine_ids.size(); ++mi) {
      int total = 0;
      for (int c = 0; c < cells; ++c) total += copies[mi * static_cast<size_t>(cells) + static_cast<size_t>(c)];
      invest += total * inst.machines[mi].invest_cost.value_or(0.0);
      amortized += total * inst.machines[mi].amortized_cost.value_or(0.0);
    }
  }

  const bool wants_operating_cap =
      kind == FormulationKind::II || kind == FormulationKind::IV;
  if (wants_operating_cap && cfg.operating_limit &&
      operating > *cfg.operating_limit + kFeasTol) {
    return false;
  }
  if (kind == FormulationKind::IV && cfg.investment_budget &&
      invest > *cfg.investment_budget + kFeasTol) {
    return false;
  }

  switch (kind) {
    case FormulationKind::I:
    case FormulationKind::IV:
      objective = pair_score;
      break;
    case FormulationKind::II:
      objective = invest;
      break;
    case FormulationKind::III:
    case FormulationKind::Phase1:
      objective = amortized + operating;
      break;
  }
  return true;
}

} // namespace

OracleResult semantic_oracle(const Instance& inst, FormulationKind kind,
                             const FormulationOptions& opts, long long guard) {
  const ValidationReport check = validate_instance(inst);
  if (!check.clean()) {
    std::string msg = "instance is not valid:";
    for (const auto& issue : check.issues) msg += "\n  " + issue.message;
    throw std::invalid_argument(msg);
  }
  const EffectiveConfig cfg = resolve_config(inst, kind, opts);
  const bool single_cell = kind == FormulationKind::II ||
                           kind == FormulationKind::III ||
                           kind == FormulationKind::Phase1;
  for (const MachineType& mt : inst.machines) {
    const std::string who = "machine m" + std::to_string(mt.id);
    if (kind == FormulationKind::I && !mt.available_copies) {
      throw std::invalid_argument(who + " has no available copy count");
    }
    if ((kind == FormulationKind::II ||
         (kind == FormulationKind::IV && cfg.investment_budget)) &&
        !mt.invest_cost) {
      throw std::invalid_argument(who + " has no investment cost");
    }
    if ((kind == FormulationKind::III || kind == FormulationKind::Phase1) &&
        !mt.amortized_cost) {
      throw std::invalid_argument(who + " has no amortized cost");
    }
  }

  OracleSetup setup;
  for (const MachineType& mt : inst.machines) {
    setup.machine_slot[mt.id] = static_cast<int>(setup.machine_ids.size());
    setup.machine_ids.push_back(mt.id);
  }
  setup.pad_order.resize(setup.machine_ids.size());
  std::iota(setup.pad_order.begin(), setup.pad_order.end(), 0);
  std::sort(setup.pad_order.begin(), setup.pad_order.end(), [&](int a, int b) {
    const double ca = inst.machines[static_cast<size_t>(a)].invest_cost.value_or(0.0);
    const double cb = inst.machines[static_cast<size_t>(b)].invest_cost.value_or(0.0);
    if (ca != cb) return ca < cb;
    return inst.machines[static_cast<size_t>(a)].id < inst.machines[static_cast<size_t>(b)].id;
  });

  long double total = 1.0L;
  for (const Part& part : inst.parts) {
    setup.choices.push_back(part_choices(inst, part, cfg, single_cell, setup.machine_slot));
    total *= static_cast<long double>(setup.choices.back().size());
  }
  if (total > static_cast<long double>(guard)) {
    const long double clamp = std::min(total, 9.0e18L);
    throw milp::GuardExceeded(static_cast<long long>(clamp), guard);
  }

  OracleResult result;
  if (total <= 0.0L) {
    result.status = milp::SolveStatus::Infeasible;
    return result;
  }

  const size_t parts = setup.choices.size();
  std::vector<int> pick(parts, 0);
  std::vector<int> best_pick;
  std::vector<int> copies;
  const bool maximize = kind == FormulationKind::I || kind == FormulationKind::IV;
  bool found = false;
  double best = 0.0;
  while (true) {
    result.leaf_count += 1;
    double objective = 0.0;
    if (evaluate_leaf(setup, inst, cfg, pick, copies, objective)) {
      const bool better = !found || (maximize ? objective > best + kIntTol
                                              : objective < best - kIntTol);
      if (better) {
        best = objective;
        best_pick = pick;
        found = true;
      }
    }
    size_t i = parts;
    while (i > 0 && ++pick[i - 1] == static_cast<int>(setup.choices[i - 1].size())) {
      pick[--i] = 0;
    }
    if (i == 0) break;
  }

  if (!found) {
    result.status = milp::SolveStatus::Infeasible;
    return result;
  }
  result.status = milp::SolveStatus::Optimal;
  result.objective = best;

  double objective = 0.0;
  evaluate_leaf(setup, inst, cfg, best_pick, copies, objective);
  GroupingSolution& g = result.solution;
  for (size_t k = 0; k < parts; ++k) {
    const Part& part = inst.parts[k];
    const PartChoice& choice = setup.choices[k][static_cast<size_t>(best_pick[k])];
    g.plan_selection[part.id] = choice.plan->id;
    for (const auto& [op_id, machine, cell] : choice.ops) {
      g.assignment[{part.id, choice.plan->id, op_id}] = {machine, cell};
    }
  }
  for (size_t mi = 0; mi < setup.machine_ids.size(); ++mi) {
    for (int c = 1; c <= cfg.cell_count; ++c) {
      g.allocation[{setup.machine_ids[mi], c}] =
          copies[mi * static_cast<size_t>(cfg.cell_count) + static_cast<size_t>(c - 1)];
    }
  }
  derive_membership(g, inst);
  return result;
}

} // namespace cellform
