#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cellform/instance.hpp"
#include "cellform/milp/model.hpp"

namespace cellform {

/// The five model builds: same-cell movement maximization with existing
/// machines (I), investment minimization (II), amortized-plus-operating cost
/// minimization (III), movement maximization under an investment budget (IV),
/// and the single-cell aggregate used as the first phase of a hierarchical
/// cost study (Phase1).
enum class FormulationKind { I, II, III, IV, Phase1 };

std::string to_string(FormulationKind kind);
FormulationKind formulation_kind_from_string(const std::string& text);

/// Build-time knobs. Every optional field, when set, overrides the
/// corresponding instance value; unset fields fall back to the instance and
/// then to the documented defaults.
struct FormulationOptions {
  /// Objective weight of a same-cell, different-machine consecutive pair.
  double weight_same_cell = 1.0;
  /// Objective weight of a same-machine consecutive pair.
  double weight_same_machine = 1.0;
  std::optional<double> operating_limit;
  std::optional<double> investment_budget;
  std::optional<int> cell_count;
  std::optional<int> min_per_cell;
  std::optional<int> max_per_cell;

  /// Weights (1, 2): strictly prefer putting consecutive operations on the
  /// same machine over merely the same cell.
  static FormulationOptions prefer_same_machine();
};

/// Instance values and overrides folded into the numbers a build actually
/// uses. Cells are indexed 1..cell_count throughout.
struct EffectiveConfig {
  FormulationKind kind = FormulationKind::I;
  int cell_count = 1;
  std::vector<int> min_per_cell;                ///< one entry per cell, 0 = none
  std::optional<std::vector<int>> max_per_cell; ///< absent = no size cap
  std::optional<double> operating_limit;
  std::optional<double> investment_budget;
  double weight_same_cell = 1.0;
  double weight_same_machine = 1.0;

  int min_at(int cell) const { return min_per_cell[static_cast<size_t>(cell - 1)]; }
  std::optional<int> max_at(int cell) const {
    if (!max_per_cell) return std::nullopt;
    return (*max_per_cell)[static_cast<size_t>(cell - 1)];
  }
};

/// Resolve overrides against the instance for one formulation kind.
/// Throws std::invalid_argument on malformed combinations (cell count < 1,
/// negative weights, both weights zero, min above max, per-cell limit lists
/// whose length does not match an overridden cell count).
EffectiveConfig resolve_config(const Instance& inst, FormulationKind kind,
                               const FormulationOptions& opts);

/// Bidirectional map between model variables and their grouping semantics.
/// Keys hold instance ids, not positions; `cell` is 0 in Y keys when the
/// formulation selects plans without tying them to a cell (I and IV).
struct VarIndex {
  using YKey = std::tuple<int, int, int>;                ///< part, plan, cell
  using XKey = std::tuple<int, int, int, int, int>;      ///< part, plan, op, machine, cell
  using NKey = std::pair<int, int>;                      ///< machine, cell
  using VKey = std::tuple<int, int, int, int, int, int, int>;
  ///< part, plan, op_i, op_j, machine_i, machine_j, cell

  std::map<YKey, int> y;
  std::map<XKey, int> x;
  std::map<NKey, int> n;
  std::map<VKey, int> v;
  bool plan_per_cell = false; ///< true when Y keys carry a real cell index
  int var_count = 0;          ///< variables in the built model
};

struct BuiltFormulation {
  milp::Model model;
  VarIndex index;
  EffectiveConfig config;
};

/// One product of two binary variables awaiting linearization.
struct ProductTerm {
  int var_a = -1;
  int var_b = -1;
  double coeff = 0.0;
  std::string name; ///< name of the created variable; auto-generated if empty
};

/// Replace each product with a continuous variable V in [0,1] capped by both
/// parents (V <= a, V <= b) and add coeff*V to the objective. Sound only for
/// maximization with nonnegative coefficients, where the optimum pushes each
/// V up to the product value; both are enforced. Zero-coefficient products
/// are dropped. Returns the created variable ids, -1 for dropped entries.
/// Throws std::invalid_argument on non-binary parents, negative coefficients,
/// or a minimizing model.
std::vector<int> linearize_products(milp::Model& model,
                                    const std::vector<ProductTerm>& products);

BuiltFormulation build_formulation_I(const Instance& inst,
                                     const FormulationOptions& opts = {});
BuiltFormulation build_formulation_II(const Instance& inst,
                                      const FormulationOptions& opts = {});
BuiltFormulation build_formulation_III(const Instance& inst,
                                       const FormulationOptions& opts = {});
BuiltFormulation build_formulation_IV(const Instance& inst,
                                      const FormulationOptions& opts = {});
BuiltFormulation build_phase1_aggregate(const Instance& inst,
                                        const FormulationOptions& opts = {});

/// Dispatch on kind.
BuiltFormulation build_formulation(const Instance& inst, FormulationKind kind,
                                   const FormulationOptions& opts = {});

struct ModelStats {
  long long binary_count = 0;
  long long integer_count = 0;
  long long continuous_count = 0;
  long long constraint_count = 0;

  bool operator==(const ModelStats&) const = default;
};

/// Count a built model's variables by kind plus its constraint rows.
ModelStats measure(const milp::Model& model);

/// Size of the formulation on this instance. For kind II this evaluates the
/// closed-form counting formulas (which assume an operating-cost cap row is
/// present); for the other kinds it measures a default-options build.
ModelStats formulation_stats(const Instance& inst, FormulationKind kind);

/// Closed-form size of the earlier linearized machine-assignment model this
/// toolkit's investment formulation is compared against. Formula evaluation
/// only; that model is never built.
ModelStats rajamani_stats(const Instance& inst);

} // namespace cellform
