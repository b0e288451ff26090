#include "cellform/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cellform {

using nlohmann::ordered_json;

std::vector<int> OperationSpec::machines() const {
  std::vector<int> ids;
  ids.reserve(eligibilities.size());
  for (const auto& e : eligibilities) ids.push_back(e.machine);
  std::sort(ids.begin(), ids.end());
  return ids;
}

const Eligibility* OperationSpec::eligibility_for(int machine) const {
  for (const auto& e : eligibilities)
    if (e.machine == machine) return &e;
  return nullptr;
}

std::string to_string(SequenceMode mode) {
  switch (mode) {
    case SequenceMode::Strict: return "strict";
    case SequenceMode::Unordered: return "unordered";
    case SequenceMode::Explicit: return "explicit";
  }
  return "strict";
}

SequenceMode sequence_mode_from_string(const std::string& text) {
  if (text == "strict") return SequenceMode::Strict;
  if (text == "unordered") return SequenceMode::Unordered;
  if (text == "explicit") return SequenceMode::Explicit;
  throw std::invalid_argument("unknown sequence mode \"" + text + "\"");
}

const OperationSpec* ProcessPlan::operation_by_id(int op_id) const {
  for (const auto& op : operations)
    if (op.id == op_id) return &op;
  return nullptr;
}

PairSet consecutive_pairs(const ProcessPlan& plan) {
  std::set<std::pair<int, int>> pairs;
  auto add = [&pairs](int a, int b) {
    if (a > b) std::swap(a, b);
    pairs.emplace(a, b);
  };
  switch (plan.sequence) {
    case SequenceMode::Strict:
      for (size_t i = 0; i + 1 < plan.operations.size(); ++i)
        add(plan.operations[i].id, plan.operations[i + 1].id);
      break;
    case SequenceMode::Unordered:
      for (size_t i = 0; i < plan.operations.size(); ++i)
        for (size_t j = i + 1; j < plan.operations.size(); ++j)
          add(plan.operations[i].id, plan.operations[j].id);
      break;
    case SequenceMode::Explicit:
      for (const auto& [op, succs] : plan.successors) {
        if (!plan.operation_by_id(op))
          throw std::invalid_argument("successor map entry for operation " +
                                      std::to_string(op) +
                                      " which is not part of the plan");
        for (int next : succs) {
          if (!plan.operation_by_id(next))
            throw std::invalid_argument("operation " + std::to_string(op) +
                                        " lists successor " + std::to_string(next) +
                                        " which is not part of the plan");
          if (next == op)
            throw std::invalid_argument("operation " + std::to_string(op) +
                                        " lists itself as successor");
          add(op, next);
        }
      }
      break;
  }
  return PairSet(pairs.begin(), pairs.end());
}

const ProcessPlan* Part::plan_by_id(int plan_id) const {
  for (const auto& p : plans)
    if (p.id == plan_id) return &p;
  return nullptr;
}

std::optional<int> CellConfig::min_at(int cell) const {
  if (!min_per_cell) return std::nullopt;
  return (*min_per_cell)[static_cast<size_t>(cell - 1)];
}

std::optional<int> CellConfig::max_at(int cell) const {
  if (!max_per_cell) return std::nullopt;
  return (*max_per_cell)[static_cast<size_t>(cell - 1)];
}

const MachineType* Instance::machine_by_id(int id) const {
  for (const auto& m : machines)
    if (m.id == id) return &m;
  return nullptr;
}

const Part* Instance::part_by_id(int id) const {
  for (const auto& p : parts)
    if (p.id == id) return &p;
  return nullptr;
}

ParseError::ParseError(std::string path, const std::string& message)
    : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

namespace {

// --- parsing helpers -------------------------------------------------------

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path, msg);
}

const ordered_json& require(const ordered_json& obj, const std::string& key,
                            const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing required field \"" + key + "\"");
  return *it;
}

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& known,
                         const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) fail(path + "." + it.key(), "unknown field");
}

double as_number(const ordered_json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

int as_int(const ordered_json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

std::optional<double> as_optional_number(const ordered_json& obj, const std::string& key,
                                         const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return as_number(*it, path + "." + key);
}

std::optional<int> as_optional_int(const ordered_json& obj, const std::string& key,
                                   const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return as_int(*it, path + "." + key);
}

// Cell size limits may be a scalar (applies to every cell) or a list with one
// entry per cell.
std::optional<std::vector<int>> parse_cell_limit(const ordered_json& obj,
                                                 const std::string& key, int cell_count,
                                                 const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  const std::string where = path + "." + key;
  if (it->is_number_integer())
    return std::vector<int>(static_cast<size_t>(std::max(cell_count, 0)),
                            it->get<int>());
  if (it->is_array()) {
    if (static_cast<int>(it->size()) != cell_count)
      fail(where, "expected " + std::to_string(cell_count) +
                      " entries, one per cell, got " + std::to_string(it->size()));
    std::vector<int> values;
    for (size_t i = 0; i < it->size(); ++i)
      values.push_back(as_int((*it)[i], where + "[" + std::to_string(i) + "]"));
    return values;
  }
  fail(where, "expected an integer or a per-cell list");
}

OperationSpec parse_operation(const ordered_json& j, const Instance& inst,
                              const std::string& path) {
  reject_unknown_keys(j, {"id", "eligible"}, path);
  OperationSpec op;
  op.id = as_int(require(j, "id", path), path + ".id");
  const auto& elig = require(j, "eligible", path);
  if (!elig.is_array()) fail(path + ".eligible", "expected an array");
  for (size_t i = 0; i < elig.size(); ++i) {
    const std::string epath = path + ".eligible[" + std::to_string(i) + "]";
    const auto& ej = elig[i];
    reject_unknown_keys(ej, {"machine", "time", "cost"}, epath);
    Eligibility e;
    e.machine = as_int(require(ej, "machine", epath), epath + ".machine");
    e.time = as_number(require(ej, "time", epath), epath + ".time");
    e.op_cost = as_number(require(ej, "cost", epath), epath + ".cost");
    if (!inst.machine_by_id(e.machine))
      fail(epath + ".machine",
           "references machine " + std::to_string(e.machine) + " which does not exist");
    op.eligibilities.push_back(e);
  }
  return op;
}

ProcessPlan parse_plan(const ordered_json& j, const Instance& inst,
                       const std::string& path) {
  reject_unknown_keys(j, {"id", "sequence", "operations", "successors"}, path);
  ProcessPlan plan;
  plan.id = as_int(require(j, "id", path), path + ".id");
  if (auto it = j.find("sequence"); it != j.end()) {
    if (!it->is_string()) fail(path + ".sequence", "expected a string");
    try {
      plan.sequence = sequence_mode_from_string(it->get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(path + ".sequence", e.what());
    }
  }
  const auto& ops = require(j, "operations", path);
  if (!ops.is_array()) fail(path + ".operations", "expected an array");
  std::set<int> op_ids;
  for (size_t i = 0; i < ops.size(); ++i) {
    const std::string opath = path + ".operations[" + std::to_string(i) + "]";
    OperationSpec op = parse_operation(ops[i], inst, opath);
    if (!op_ids.insert(op.id).second)
      fail(opath + ".id", "duplicate operation id " + std::to_string(op.id));
    plan.operations.push_back(std::move(op));
  }
  if (auto it = j.find("successors"); it != j.end() && !it->is_null()) {
    const std::string spath = path + ".successors";
    if (plan.sequence != SequenceMode::Explicit)
      fail(spath, "successors are only valid with \"explicit\" sequence mode");
    if (!it->is_object()) fail(spath, "expected an object");
    for (auto sit = it->begin(); sit != it->end(); ++sit) {
      int from = 0;
      try {
        size_t pos = 0;
        from = std::stoi(sit.key(), &pos);
        if (pos != sit.key().size()) throw std::invalid_argument("");
      } catch (...) {
        fail(spath + "." + sit.key(), "key must be an operation id");
      }
      if (!op_ids.count(from))
        fail(spath + "." + sit.key(),
             "operation " + sit.key() + " is not part of the plan");
      if (!sit->is_array()) fail(spath + "." + sit.key(), "expected an array");
      std::vector<int> succs;
      for (size_t i = 0; i < sit->size(); ++i) {
        int to = as_int((*sit)[i], spath + "." + sit.key() + "[" + std::to_string(i) + "]");
        if (!op_ids.count(to))
          fail(spath + "." + sit.key() + "[" + std::to_string(i) + "]",
               "successor " + std::to_string(to) + " is not part of the plan");
        succs.push_back(to);
      }
      plan.successors[from] = std::move(succs);
    }
  } else if (plan.sequence == SequenceMode::Explicit) {
    fail(path, "explicit sequence mode requires a successors map");
  }
  return plan;
}

} // namespace

Instance parse_instance(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail("$", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("$", "expected a top-level object");
  reject_unknown_keys(doc, {"machines", "parts", "cells", "budgets"}, "$");

  Instance inst;

  const auto& machines = require(doc, "machines", "machines");
  if (!machines.is_array()) fail("machines", "expected an array");
  std::set<int> machine_ids;
  for (size_t i = 0; i < machines.size(); ++i) {
    const std::string mpath = "machines[" + std::to_string(i) + "]";
    const auto& mj = machines[i];
    reject_unknown_keys(mj, {"id", "capacity", "available", "invest_cost", "amortized_cost"},
                        mpath);
    MachineType m;
    m.id = as_int(require(mj, "id", mpath), mpath + ".id");
    m.capacity = as_number(require(mj, "capacity", mpath), mpath + ".capacity");
    m.available_copies = as_optional_int(mj, "available", mpath);
    m.invest_cost = as_optional_number(mj, "invest_cost", mpath);
    m.amortized_cost = as_optional_number(mj, "amortized_cost", mpath);
    if (!machine_ids.insert(m.id).second)
      fail(mpath + ".id", "duplicate machine id " + std::to_string(m.id));
    inst.machines.push_back(m);
  }

  const auto& cells = require(doc, "cells", "cells");
  reject_unknown_keys(cells, {"count", "min_per_cell", "max_per_cell"}, "cells");
  inst.cells.count = as_int(require(cells, "count", "cells"), "cells.count");
  inst.cells.min_per_cell = parse_cell_limit(cells, "min_per_cell", inst.cells.count, "cells");
  inst.cells.max_per_cell = parse_cell_limit(cells, "max_per_cell", inst.cells.count, "cells");

  if (auto it = doc.find("budgets"); it != doc.end() && !it->is_null()) {
    reject_unknown_keys(*it, {"operating", "investment"}, "budgets");
    inst.budgets.operating_limit = as_optional_number(*it, "operating", "budgets");
    inst.budgets.investment_limit = as_optional_number(*it, "investment", "budgets");
  }

  const auto& parts = require(doc, "parts", "parts");
  if (!parts.is_array()) fail("parts", "expected an array");
  std::set<int> part_ids;
  for (size_t i = 0; i < parts.size(); ++i) {
    const std::string ppath = "parts[" + std::to_string(i) + "]";
    const auto& pj = parts[i];
    reject_unknown_keys(pj, {"id", "demand", "plans"}, ppath);
    Part part;
    part.id = as_int(require(pj, "id", ppath), ppath + ".id");
    part.demand = as_number(require(pj, "demand", ppath), ppath + ".demand");
    if (!part_ids.insert(part.id).second)
      fail(ppath + ".id", "duplicate part id " + std::to_string(part.id));
    const auto& plans = require(pj, "plans", ppath);
    if (!plans.is_array()) fail(ppath + ".plans", "expected an array");
    std::set<int> plan_ids;
    for (size_t k = 0; k < plans.size(); ++k) {
      const std::string plpath = ppath + ".plans[" + std::to_string(k) + "]";
      ProcessPlan plan = parse_plan(plans[k], inst, plpath);
      if (!plan_ids.insert(plan.id).second)
        fail(plpath + ".id", "duplicate plan id " + std::to_string(plan.id));
      part.plans.push_back(std::move(plan));
    }
    inst.parts.push_back(std::move(part));
  }

  return inst;
}

namespace {

ordered_json render_cell_limit(const std::vector<int>& values) {
  // Collapse uniform per-cell limits back to the scalar form.
  if (!values.empty() &&
      std::all_of(values.begin(), values.end(), [&](int v) { return v == values.front(); }))
    return values.front();
  return values;
}

} // namespace

std::string render_instance(const Instance& inst) {
  ordered_json doc;

  ordered_json machines = ordered_json::array();
  for (const auto& m : inst.machines) {
    ordered_json mj;
    mj["id"] = m.id;
    mj["capacity"] = m.capacity;
    if (m.available_copies) mj["available"] = *m.available_copies;
    if (m.invest_cost) mj["invest_cost"] = *m.invest_cost;
    if (m.amortized_cost) mj["amortized_cost"] = *m.amortized_cost;
    machines.push_back(std::move(mj));
  }
  doc["machines"] = std::move(machines);

  ordered_json parts = ordered_json::array();
  for (const auto& part : inst.parts) {
    ordered_json pj;
    pj["id"] = part.id;
    pj["demand"] = part.demand;
    ordered_json plans = ordered_json::array();
    for (const auto& plan : part.plans) {
      ordered_json plj;
      plj["id"] = plan.id;
      plj["sequence"] = to_string(plan.sequence);
      ordered_json ops = ordered_json::array();
      for (const auto& op : plan.operations) {
        ordered_json oj;
        oj["id"] = op.id;
        ordered_json elig = ordered_json::array();
        for (const auto& e : op.eligibilities) {
          ordered_json ej;
          ej["machine"] = e.machine;
          ej["time"] = e.time;
          ej["cost"] = e.op_cost;
          elig.push_back(std::move(ej));
        }
        oj["eligible"] = std::move(elig);
        ops.push_back(std::move(oj));
      }
      plj["operations"] = std::move(ops);
      if (plan.sequence == SequenceMode::Explicit) {
        ordered_json succ = ordered_json::object();
        for (const auto& [from, tos] : plan.successors)
          succ[std::to_string(from)] = tos;
        plj["successors"] = std::move(succ);
      }
      plans.push_back(std::move(plj));
    }
    pj["plans"] = std::move(plans);
    parts.push_back(std::move(pj));
  }
  doc["parts"] = std::move(parts);

  ordered_json cells;
  cells["count"] = inst.cells.count;
  if (inst.cells.min_per_cell) cells["min_per_cell"] = render_cell_limit(*inst.cells.min_per_cell);
  if (inst.cells.max_per_cell) cells["max_per_cell"] = render_cell_limit(*inst.cells.max_per_cell);
  doc["cells"] = std::move(cells);

  ordered_json budgets;
  budgets["operating"] =
      inst.budgets.operating_limit ? ordered_json(*inst.budgets.operating_limit) : nullptr;
  budgets["investment"] =
      inst.budgets.investment_limit ? ordered_json(*inst.budgets.investment_limit) : nullptr;
  doc["budgets"] = std::move(budgets);

  return doc.dump(2) + "\n";
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto flag = [&report](std::string path, std::string message) {
    report.issues.push_back({std::move(path), std::move(message)});
  };

  if (inst.machines.empty()) flag("machines", "at least one machine type is required");
  if (inst.parts.empty()) flag("parts", "at least one part is required");

  for (const auto& m : inst.machines) {
    const std::string mpath = "machines[" + std::to_string(m.id) + "]";
    if (!(m.capacity > 0)) flag(mpath + ".capacity", "capacity must be positive");
    if (m.available_copies && *m.available_copies < 0)
      flag(mpath + ".available", "available copies must be nonnegative");
    if (m.invest_cost && *m.invest_cost < 0)
      flag(mpath + ".invest_cost", "investment cost must be nonnegative");
    if (m.amortized_cost && *m.amortized_cost < 0)
      flag(mpath + ".amortized_cost", "amortized cost must be nonnegative");
  }

  for (const auto& part : inst.parts) {
    const std::string ppath = "parts[" + std::to_string(part.id) + "]";
    if (!(part.demand > 0)) flag(ppath + ".demand", "demand must be positive");
    if (part.plans.empty()) flag(ppath + ".plans", "at least one process plan is required");
    for (const auto& plan : part.plans) {
      const std::string plpath = ppath + ".plans[" + std::to_string(plan.id) + "]";
      if (plan.operations.empty())
        flag(plpath + ".operations", "a plan must contain at least one operation");
      for (const auto& op : plan.operations) {
        const std::string opath = plpath + ".operations[" + std::to_string(op.id) + "]";
        if (op.eligibilities.empty())
          flag(opath + ".eligible", "an operation needs at least one eligible machine");
        std::set<int> seen;
        for (size_t i = 0; i < op.eligibilities.size(); ++i) {
          const auto& e = op.eligibilities[i];
          const std::string epath = opath + ".eligible[" + std::to_string(i) + "]";
          if (!seen.insert(e.machine).second)
            flag(epath + ".machine",
                 "machine " + std::to_string(e.machine) + " listed twice for one operation");
          if (!inst.machine_by_id(e.machine))
            flag(epath + ".machine",
                 "references machine " + std::to_string(e.machine) + " which does not exist");
          if (!(e.time > 0)) flag(epath + ".time", "processing time must be positive");
          if (e.op_cost < 0) flag(epath + ".cost", "operating cost must be nonnegative");
        }
      }
      if (plan.sequence == SequenceMode::Explicit) {
        try {
          consecutive_pairs(plan);
        } catch (const std::invalid_argument& e) {
          flag(plpath + ".successors", e.what());
        }
      }
    }
  }

  if (inst.cells.count < 1) flag("cells.count", "cell count must be at least 1");
  for (int c = 1; c <= inst.cells.count; ++c) {
    auto lo = inst.cells.min_at(c);
    auto hi = inst.cells.max_at(c);
    if (lo && *lo < 0)
      flag("cells.min_per_cell", "minimum cell size must be nonnegative (cell " +
                                     std::to_string(c) + ")");
    if (hi && *hi < 0)
      flag("cells.max_per_cell", "maximum cell size must be nonnegative (cell " +
                                     std::to_string(c) + ")");
    if (lo && hi && *lo > *hi)
      flag("cells", "minimum cell size exceeds maximum (cell " + std::to_string(c) + ")");
  }

  if (inst.budgets.operating_limit && *inst.budgets.operating_limit < 0)
    flag("budgets.operating", "operating budget must be nonnegative");
  if (inst.budgets.investment_limit && *inst.budgets.investment_limit < 0)
    flag("budgets.investment", "investment budget must be nonnegative");

  return report;
}

InstanceStats derived_stats(const Instance& inst) {
  InstanceStats stats;
  stats.part_count = inst.part_count();
  stats.machine_count = inst.machine_count();

  std::set<int> labels;
  for (const auto& part : inst.parts) {
    stats.plans_per_part.push_back(static_cast<int>(part.plans.size()));
    for (const auto& plan : part.plans) {
      PlanStats ps;
      ps.part = part.id;
      ps.plan = plan.id;
      ps.op_count = plan.op_count();
      ps.pair_count = static_cast<int>(consecutive_pairs(plan).size());
      std::set<int> reachable;
      ps.fixed_route = true;
      for (const auto& op : plan.operations) {
        labels.insert(op.id);
        ps.eligible_counts.push_back(op.machine_count());
        if (op.machine_count() != 1) ps.fixed_route = false;
        for (const auto& e : op.eligibilities) reachable.insert(e.machine);
        stats.total_eligibilities += op.machine_count();
      }
      ps.machine_requirement.assign(reachable.begin(), reachable.end());
      stats.total_operations += ps.op_count;
      stats.total_pairs += ps.pair_count;
      stats.plans.push_back(std::move(ps));
    }
  }
  stats.distinct_operations = static_cast<int>(labels.size());
  return stats;
}

} // namespace cellform
