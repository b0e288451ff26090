#include "cellform/formulations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cellform {

namespace {

using milp::Model;
using milp::Relation;
using milp::Sense;

void require_valid(const Instance& inst) {
  const auto report = validate_instance(inst);
  if (report.clean()) return;
  std::ostringstream msg;
  msg << "invalid instance:";
  for (const auto& issue : report.issues)
    msg << "\n  " << issue.path << ": " << issue.message;
  throw std::invalid_argument(msg.str());
}

std::string y_name(int part, int plan, int cell) {
  std::string s = "Y[k" + std::to_string(part) + ".p" + std::to_string(plan);
  if (cell > 0) s += ".c" + std::to_string(cell);
  return s + "]";
}

std::string x_name(int part, int plan, int op, int machine, int cell) {
  return "X[k" + std::to_string(part) + ".p" + std::to_string(plan) + ".s" +
         std::to_string(op) + ".m" + std::to_string(machine) + ".c" +
         std::to_string(cell) + "]";
}

std::string n_name(int machine, int cell) {
  return "N[m" + std::to_string(machine) + ".c" + std::to_string(cell) + "]";
}

std::string v_name(int part, int plan, int op_i, int op_j, int mi, int mj, int cell) {
  return "V[k" + std::to_string(part) + ".p" + std::to_string(plan) + "." +
         std::to_string(op_i) + "-" + std::to_string(op_j) + ".m" + std::to_string(mi) +
         ".m" + std::to_string(mj) + ".c" + std::to_string(cell) + "]";
}

/// Copies of machine `m` beyond which no additional copy can ever be loaded:
/// every part picks its heaviest plan for m and runs every eligible operation
/// on m. Valid as a variable bound wherever some optimum uses no more copies
/// than the loads require (all builds without a minimum cell size).
int derived_copy_bound(const Instance& inst, const MachineType& m) {
  double worst = 0.0;
  for (const auto& part : inst.parts) {
    double heaviest = 0.0;
    for (const auto& plan : part.plans) {
      double load = 0.0;
      for (const auto& op : plan.operations) {
        const Eligibility* e = op.eligibility_for(m.id);
        if (e) load += part.demand * e->time;
      }
      heaviest = std::max(heaviest, load);
    }
    worst += heaviest;
  }
  return static_cast<int>(std::max(0.0, std::ceil(worst / m.capacity - 1e-9)));
}

std::vector<int> resolve_cell_limits(const std::optional<int>& override_scalar,
                                     const std::optional<std::vector<int>>& instance_list,
                                     int cell_count, int fallback, const char* what) {
  if (override_scalar) {
    if (*override_scalar < 0)
      throw std::invalid_argument(std::string(what) + " override must be nonnegative");
    return std::vector<int>(static_cast<size_t>(cell_count), *override_scalar);
  }
  if (instance_list) {
    const auto& list = *instance_list;
    if (static_cast<int>(list.size()) == cell_count) return list;
    const bool uniform = std::all_of(list.begin(), list.end(),
                                     [&](int v) { return v == list.front(); });
    if (uniform && !list.empty())
      return std::vector<int>(static_cast<size_t>(cell_count), list.front());
    throw std::invalid_argument(std::string(what) +
                                " list in the instance does not match the requested "
                                "cell count and is not uniform");
  }
  return std::vector<int>(static_cast<size_t>(cell_count), fallback);
}

struct Builder {
  const Instance& inst;
  EffectiveConfig cfg;
  Model model;
  VarIndex index;

  Builder(const Instance& i, EffectiveConfig c) : inst(i), cfg(std::move(c)) {}

  int cells() const { return cfg.cell_count; }

  void require_available_copies() const {
    for (const auto& m : inst.machines)
      if (!m.available_copies)
        throw std::invalid_argument("machine " + std::to_string(m.id) +
                                    " has no available copy count; reorganizing existing "
                                    "machines needs one per machine");
  }
  void require_invest_costs() const {
    for (const auto& m : inst.machines)
      if (!m.invest_cost)
        throw std::invalid_argument("machine " + std::to_string(m.id) +
                                    " has no investment cost");
  }
  void require_amortized_costs() const {
    for (const auto& m : inst.machines)
      if (!m.amortized_cost)
        throw std::invalid_argument("machine " + std::to_string(m.id) +
                                    " has no amortized cost");
  }

  void add_plan_vars() {
    for (const auto& part : inst.parts)
      for (const auto& plan : part.plans)
        index.y[{part.id, plan.id, 0}] = model.add_binary(y_name(part.id, plan.id, 0));
  }

  void add_plan_cell_vars() {
    index.plan_per_cell = true;
    for (const auto& part : inst.parts)
      for (const auto& plan : part.plans)
        for (int c = 1; c <= cells(); ++c)
          index.y[{part.id, plan.id, c}] = model.add_binary(y_name(part.id, plan.id, c));
  }

  void add_assignment_vars() {
    for (const auto& part : inst.parts)
      for (const auto& plan : part.plans)
        for (const auto& op : plan.operations)
          for (int m : op.machines())
            for (int c = 1; c <= cells(); ++c)
              index.x[{part.id, plan.id, op.id, m, c}] =
                  model.add_binary(x_name(part.id, plan.id, op.id, m, c));
  }

  /// `cap_by_availability` additionally caps each N by the machine's copy
  /// count; `cap_by_loads` caps it by the worst load any schedule can put on
  /// the machine (sound only without minimum cell sizes).
  void add_allocation_vars(bool cap_by_availability, bool cap_by_loads) {
    for (const auto& m : inst.machines) {
      int ub = std::numeric_limits<int>::max();
      if (cap_by_availability) ub = std::min(ub, *m.available_copies);
      if (cap_by_loads) ub = std::min(ub, derived_copy_bound(inst, m));
      for (int c = 1; c <= cells(); ++c) {
        int cell_ub = ub;
        if (const auto mx = cfg.max_at(c)) cell_ub = std::min(cell_ub, *mx);
        index.n[{m.id, c}] =
            model.add_integer(n_name(m.id, c), 0.0, static_cast<double>(cell_ub));
      }
    }
  }

  void row_plan_choice() {
    for (const auto& part : inst.parts) {
      milp::LinearExpr expr;
      for (const auto& plan : part.plans) {
        if (index.plan_per_cell) {
          for (int c = 1; c <= cells(); ++c)
            expr.push_back({index.y.at({part.id, plan.id, c}), 1.0});
        } else {
          expr.push_back({index.y.at({part.id, plan.id, 0}), 1.0});
        }
      }
      model.add_constraint("plan-choice[k" + std::to_string(part.id) + "]",
                           std::move(expr), Relation::Equal, 1.0);
    }
  }

  /// One row per operation: its assignments across all machines and cells
  /// sum to the plan indicator.
  void row_op_assignment_free() {
    for (const auto& part : inst.parts)
      for (const auto& plan : part.plans)
        for (const auto& op : plan.operations) {
          milp::LinearExpr expr;
          for (int m : op.machines())
            for (int c = 1; c <= cells(); ++c)
              expr.push_back({index.x.at({part.id, plan.id, op.id, m, c}), 1.0});
          expr.push_back({index.y.at({part.id, plan.id, 0}), -1.0});
          model.add_constraint("op-assignment[k" + std::to_string(part.id) + ".p" +
                                   std::to_string(plan.id) + ".s" + std::to_string(op.id) +
                                   "]",
                               std::move(expr), Relation::Equal, 0.0);
        }
  }

  /// One row per operation and cell: assignments within the cell sum to the
  /// plan-in-cell indicator, pinning every operation of a chosen plan to the
  /// plan's cell.
  void row_op_assignment_per_cell() {
    for (const auto& part : inst.parts)
      for (const auto& plan : part.plans)
        for (const auto& op : plan.operations)
          for (int c = 1; c <= cells(); ++c) {
            milp::LinearExpr expr;
            for (int m : op.machines())
              expr.push_back({index.x.at({part.id, plan.id, op.id, m, c}), 1.0});
            expr.push_back({index.y.at({part.id, plan.id, c}), -1.0});
            model.add_constraint("op-assignment[k" + std::to_string(part.id) + ".p" +
                                     std::to_string(plan.id) + ".s" +
                                     std::to_string(op.id) + ".c" + std::to_string(c) + "]",
                                 std::move(expr), Relation::Equal, 0.0);
          }
  }

  void row_machine_load() {
    for (const auto& m : inst.machines)
      for (int c = 1; c <= cells(); ++c) {
        milp::LinearExpr expr;
        for (const auto& part : inst.parts)
          for (const auto& plan : part.plans)
            for (const auto& op : plan.operations)
              if (const Eligibility* e = op.eligibility_for(m.id))
                expr.push_back({index.x.at({part.id, plan.id, op.id, m.id, c}),
                                part.demand * e->time});
        expr.push_back({index.n.at({m.id, c}), -m.capacity});
        model.add_constraint("machine-load[m" + std::to_string(m.id) + ".c" +
                                 std::to_string(c) + "]",
                             std::move(expr), Relation::LessEq, 0.0);
      }
  }

  void row_cell_min() {
    for (int c = 1; c <= cells(); ++c) {
      milp::LinearExpr expr;
      for (const auto& m : inst.machines) expr.push_back({index.n.at({m.id, c}), 1.0});
      model.add_constraint("cell-min[c" + std::to_string(c) + "]", std::move(expr),
                           Relation::GreaterEq, static_cast<double>(cfg.min_at(c)));
    }
  }

  void row_cell_max() {
    if (!cfg.max_per_cell) return;
    for (int c = 1; c <= cells(); ++c) {
      milp::LinearExpr expr;
      for (const auto& m : inst.machines) expr.push_back({index.n.at({m.id, c}), 1.0});
      model.add_constraint("cell-max[c" + std::to_string(c) + "]", std::move(expr),
                           Relation::LessEq, static_cast<double>(*cfg.max_at(c)));
    }
  }

  void row_availability() {
    for (const auto& m : inst.machines) {
      milp::LinearExpr expr;
      for (int c = 1; c <= cells(); ++c) expr.push_back({index.n.at({m.id, c}), 1.0});
      model.add_constraint("availability[m" + std::to_string(m.id) + "]", std::move(expr),
                           Relation::LessEq, static_cast<double>(*m.available_copies));
    }
  }

  void row_operating_limit() {
    if (!cfg.operating_limit) return;
    milp::LinearExpr expr;
    for (const auto& part : inst.parts)
      for (const auto& plan : part.plans)
        for (const auto& op : plan.operations)
          for (const auto& e : op.eligibilities)
            for (int c = 1; c <= cells(); ++c)
              expr.push_back({index.x.at({part.id, plan.id, op.id, e.machine, c}),
                              part.demand * e.op_cost});
    model.add_constraint("operating-limit", std::move(expr), Relation::LessEq,
                         *cfg.operating_limit);
  }

  void row_investment_budget() {
    if (!cfg.investment_budget) return;
    milp::LinearExpr expr;
    for (const auto& m : inst.machines)
      for (int c = 1; c <= cells(); ++c)
        expr.push_back({index.n.at({m.id, c}), *m.invest_cost});
    model.add_constraint("investment-budget", std::move(expr), Relation::LessEq,
                         *cfg.investment_budget);
  }

  void objective_investment() {
    for (const auto& m : inst.machines)
      for (int c = 1; c <= cells(); ++c)
        model.add_objective_term(index.n.at({m.id, c}), *m.invest_cost);
  }

  void objective_amortized_plus_operating() {
    for (const auto& m : inst.machines)
      for (int c = 1; c <= cells(); ++c)
        model.add_objective_term(index.n.at({m.id, c}), *m.amortized_cost);
    for (const auto& part : inst.parts)
      for (const auto& plan : part.plans)
        for (const auto& op : plan.operations)
          for (const auto& e : op.eligibilities)
            for (int c = 1; c <= cells(); ++c)
              model.add_objective_term(index.x.at({part.id, plan.id, op.id, e.machine, c}),
                                       part.demand * e.op_cost);
  }

  /// Same-cell consecutive-pair products, linearized. A pair on one machine
  /// weighs weight_same_machine, on two machines of one cell weight_same_cell.
  void objective_movement() {
    std::vector<ProductTerm> products;
    std::vector<VarIndex::VKey> keys;
    for (const auto& part : inst.parts)
      for (const auto& plan : part.plans)
        for (const auto& [i, j] : consecutive_pairs(plan)) {
          const OperationSpec* op_i = plan.operation_by_id(i);
          const OperationSpec* op_j = plan.operation_by_id(j);
          for (int m : op_i->machines())
            for (int n : op_j->machines())
              for (int c = 1; c <= cells(); ++c) {
                const double w =
                    m == n ? cfg.weight_same_machine : cfg.weight_same_cell;
                products.push_back({index.x.at({part.id, plan.id, i, m, c}),
                                    index.x.at({part.id, plan.id, j, n, c}), w,
                                    v_name(part.id, plan.id, i, j, m, n, c)});
                keys.push_back({part.id, plan.id, i, j, m, n, c});
              }
        }
    const auto ids = linearize_products(model, products);
    for (size_t i = 0; i < ids.size(); ++i)
      if (ids[i] >= 0) index.v[keys[i]] = ids[i];
  }

  BuiltFormulation finish() {
    index.var_count = model.var_count();
    return {std::move(model), std::move(index), std::move(cfg)};
  }
};

} // namespace

std::string to_string(FormulationKind kind) {
  switch (kind) {
    case FormulationKind::I: return "I";
    case FormulationKind::II: return "II";
    case FormulationKind::III: return "III";
    case FormulationKind::IV: return "IV";
    case FormulationKind::Phase1: return "phase1";
  }
  return "?";
}

FormulationKind formulation_kind_from_string(const std::string& text) {
  if (text == "I") return FormulationKind::I;
  if (text == "II") return FormulationKind::II;
  if (text == "III") return FormulationKind::III;
  if (text == "IV") return FormulationKind::IV;
  if (text == "phase1") return FormulationKind::Phase1;
  throw std::invalid_argument("unknown formulation '" + text +
                              "' (expected I, II, III, IV, or phase1)");
}

FormulationOptions FormulationOptions::prefer_same_machine() {
  FormulationOptions opts;
  opts.weight_same_cell = 1.0;
  opts.weight_same_machine = 2.0;
  return opts;
}

EffectiveConfig resolve_config(const Instance& inst, FormulationKind kind,
                               const FormulationOptions& opts) {
  if (opts.weight_same_cell < 0.0 || opts.weight_same_machine < 0.0)
    throw std::invalid_argument("objective weights must be nonnegative");
  if (opts.weight_same_cell == 0.0 && opts.weight_same_machine == 0.0)
    throw std::invalid_argument("at least one objective weight must be positive");

  EffectiveConfig cfg;
  cfg.kind = kind;
  cfg.weight_same_cell = opts.weight_same_cell;
  cfg.weight_same_machine = opts.weight_same_machine;

  int c = opts.cell_count.value_or(inst.cells.count);
  if (c < 1) throw std::invalid_argument("cell count must be at least 1");
  if (kind == FormulationKind::Phase1) c = 1;
  cfg.cell_count = c;

  if (kind == FormulationKind::Phase1) {
    // The aggregate drops cell structure entirely: no size limits.
    cfg.min_per_cell.assign(1, 0);
    cfg.max_per_cell = std::nullopt;
  } else {
    const int min_fallback = kind == FormulationKind::I ? 1 : 0;
    cfg.min_per_cell = resolve_cell_limits(opts.min_per_cell, inst.cells.min_per_cell, c,
                                           min_fallback, "min_per_cell");
    const bool have_max = opts.max_per_cell.has_value() || inst.cells.max_per_cell.has_value();
    if (have_max)
      cfg.max_per_cell = resolve_cell_limits(opts.max_per_cell, inst.cells.max_per_cell, c,
                                             0, "max_per_cell");
    if (cfg.max_per_cell)
      for (int i = 1; i <= c; ++i)
        if (cfg.min_at(i) > *cfg.max_at(i))
          throw std::invalid_argument("min_per_cell exceeds max_per_cell for cell " +
                                      std::to_string(i));
  }

  cfg.operating_limit =
      opts.operating_limit ? opts.operating_limit : inst.budgets.operating_limit;
  cfg.investment_budget =
      opts.investment_budget ? opts.investment_budget : inst.budgets.investment_limit;
  if (cfg.operating_limit && *cfg.operating_limit < 0.0)
    throw std::invalid_argument("operating limit must be nonnegative");
  if (cfg.investment_budget && *cfg.investment_budget < 0.0)
    throw std::invalid_argument("investment budget must be nonnegative");
  return cfg;
}

std::vector<int> linearize_products(Model& model,
                                    const std::vector<ProductTerm>& products) {
  if (products.empty()) return {};
  if (model.sense != Sense::Maximize)
    throw std::invalid_argument(
        "product linearization without the product floor row is only exact under "
        "maximization");
  std::vector<int> ids;
  ids.reserve(products.size());
  for (const auto& p : products) {
    if (p.var_a < 0 || p.var_a >= model.var_count() || p.var_b < 0 ||
        p.var_b >= model.var_count())
      throw std::invalid_argument("product references an undeclared variable");
    for (int parent : {p.var_a, p.var_b})
      if (model.variables[static_cast<size_t>(parent)].kind != milp::VarKind::Binary)
        throw std::invalid_argument(
            "product parent '" + model.variables[static_cast<size_t>(parent)].name +
            "' is not binary");
    if (p.coeff < 0.0)
      throw std::invalid_argument(
          "negative product coefficient under maximization is unsound here");
    if (p.coeff == 0.0) {
      ids.push_back(-1);
      continue;
    }
    const std::string name =
        p.name.empty() ? "V#" + std::to_string(model.var_count()) : p.name;
    const int v = model.add_continuous(name, 0.0, 1.0);
    model.add_constraint(name + ".le.a", {{v, 1.0}, {p.var_a, -1.0}}, Relation::LessEq,
                         0.0);
    model.add_constraint(name + ".le.b", {{v, 1.0}, {p.var_b, -1.0}}, Relation::LessEq,
                         0.0);
    model.add_objective_term(v, p.coeff);
    ids.push_back(v);
  }
  return ids;
}

BuiltFormulation build_formulation_I(const Instance& inst, const FormulationOptions& opts) {
  require_valid(inst);
  Builder b(inst, resolve_config(inst, FormulationKind::I, opts));
  b.require_available_copies();
  b.model.sense = Sense::Maximize;
  b.add_plan_vars();
  b.add_assignment_vars();
  b.add_allocation_vars(/*cap_by_availability=*/true, /*cap_by_loads=*/false);
  b.row_plan_choice();
  b.row_op_assignment_free();
  b.row_machine_load();
  b.row_cell_min();
  b.row_cell_max();
  b.row_availability();
  b.objective_movement();
  return b.finish();
}

BuiltFormulation build_formulation_II(const Instance& inst, const FormulationOptions& opts) {
  require_valid(inst);
  Builder b(inst, resolve_config(inst, FormulationKind::II, opts));
  b.require_invest_costs();
  b.model.sense = Sense::Minimize;
  b.add_plan_cell_vars();
  b.add_assignment_vars();
  b.add_allocation_vars(/*cap_by_availability=*/false, /*cap_by_loads=*/true);
  b.row_plan_choice();
  b.row_op_assignment_per_cell();
  b.row_operating_limit();
  b.row_machine_load();
  b.row_cell_max();
  b.objective_investment();
  return b.finish();
}

BuiltFormulation build_formulation_III(const Instance& inst,
                                       const FormulationOptions& opts) {
  require_valid(inst);
  Builder b(inst, resolve_config(inst, FormulationKind::III, opts));
  b.require_amortized_costs();
  b.model.sense = Sense::Minimize;
  b.add_plan_cell_vars();
  b.add_assignment_vars();
  b.add_allocation_vars(/*cap_by_availability=*/false, /*cap_by_loads=*/true);
  b.row_plan_choice();
  b.row_op_assignment_per_cell();
  b.row_machine_load();
  b.row_cell_max();
  b.objective_amortized_plus_operating();
  return b.finish();
}

BuiltFormulation build_phase1_aggregate(const Instance& inst,
                                        const FormulationOptions& opts) {
  require_valid(inst);
  Builder b(inst, resolve_config(inst, FormulationKind::Phase1, opts));
  b.require_amortized_costs();
  b.model.sense = Sense::Minimize;
  b.add_plan_cell_vars();
  b.add_assignment_vars();
  b.add_allocation_vars(/*cap_by_availability=*/false, /*cap_by_loads=*/true);
  b.row_plan_choice();
  b.row_op_assignment_per_cell();
  b.row_machine_load();
  b.objective_amortized_plus_operating();
  return b.finish();
}

BuiltFormulation build_formulation_IV(const Instance& inst, const FormulationOptions& opts) {
  require_valid(inst);
  Builder b(inst, resolve_config(inst, FormulationKind::IV, opts));
  if (b.cfg.investment_budget) b.require_invest_costs();
  b.model.sense = Sense::Maximize;
  b.add_plan_vars();
  b.add_assignment_vars();
  b.add_allocation_vars(/*cap_by_availability=*/false, /*cap_by_loads=*/true);
  b.row_plan_choice();
  b.row_op_assignment_free();
  b.row_operating_limit();
  b.row_machine_load();
  b.row_cell_max();
  b.row_investment_budget();
  b.objective_movement();
  return b.finish();
}

BuiltFormulation build_formulation(const Instance& inst, FormulationKind kind,
                                   const FormulationOptions& opts) {
  switch (kind) {
    case FormulationKind::I: return build_formulation_I(inst, opts);
    case FormulationKind::II: return build_formulation_II(inst, opts);
    case FormulationKind::III: return build_formulation_III(inst, opts);
    case FormulationKind::IV: return build_formulation_IV(inst, opts);
    case FormulationKind::Phase1: return build_phase1_aggregate(inst, opts);
  }
  throw std::invalid_argument("unknown formulation kind");
}

ModelStats measure(const Model& model) {
  ModelStats s;
  for (const auto& v : model.variables) {
    switch (v.kind) {
      case milp::VarKind::Binary: ++s.binary_count; break;
      case milp::VarKind::Integer: ++s.integer_count; break;
      case milp::VarKind::Continuous: ++s.continuous_count; break;
    }
  }
  s.constraint_count = model.constraint_count();
  return s;
}

ModelStats formulation_stats(const Instance& inst, FormulationKind kind) {
  require_valid(inst);
  if (kind != FormulationKind::II) return measure(build_formulation(inst, kind).model);

  const auto stats = derived_stats(inst);
  const long long k = stats.part_count;
  const long long m = stats.machine_count;
  const long long c = inst.cells.count;
  long long sum_tpp = 0;
  for (int tpp : stats.plans_per_part) sum_tpp += tpp;
  const long long sum_ts = stats.total_operations;
  const long long sum_tm = stats.total_eligibilities;

  ModelStats s;
  s.binary_count = c * (sum_tpp + sum_tm);
  s.integer_count = m * c;
  s.continuous_count = 0;
  s.constraint_count = k + c * sum_ts + 1 + m * c + c;
  return s;
}

ModelStats rajamani_stats(const Instance& inst) {
  require_valid(inst);
  const auto stats = derived_stats(inst);
  const long long k = stats.part_count;
  const long long m = stats.machine_count;
  const long long c = inst.cells.count;
  long long sum_tpp = 0;
  for (int tpp : stats.plans_per_part) sum_tpp += tpp;
  const long long sum_ts = stats.total_operations;
  const long long sum_tm = stats.total_eligibilities;

  ModelStats s;
  s.binary_count = sum_tpp + sum_tm + k * c;
  s.integer_count = m * c;
  s.continuous_count = c * sum_tm;
  s.constraint_count = 2 * k + sum_ts + m * c + 1 + c + 2 * c * sum_tm + k * c;
  return s;
}

} // namespace cellform
