#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cellform {

/// One (machine, time, cost) option for performing an operation.
struct Eligibility {
  int machine = 0;      ///< machine type id
  double time = 0.0;    ///< processing time per unit, time units
  double op_cost = 0.0; ///< operating cost per unit, currency

  bool operator==(const Eligibility&) const = default;
};

/// A single operation of a process plan together with its eligible machines.
struct OperationSpec {
  int id = 0;
  std::vector<Eligibility> eligibilities;

  /// Eligible machine ids, ascending.
  std::vector<int> machines() const;
  /// Number of eligible machine types.
  int machine_count() const { return static_cast<int>(eligibilities.size()); }
  /// Eligibility entry for a machine, or nullptr if the machine cannot do it.
  const Eligibility* eligibility_for(int machine) const;

  bool operator==(const OperationSpec&) const = default;
};

enum class SequenceMode { Strict, Unordered, Explicit };

std::string to_string(SequenceMode mode);
SequenceMode sequence_mode_from_string(const std::string& text);

/// An admissible way of manufacturing a part: an operation list plus the
/// precedence structure that defines which operation pairs are consecutive.
struct ProcessPlan {
  int id = 0;
  SequenceMode sequence = SequenceMode::Strict;
  std::vector<OperationSpec> operations; ///< processing order for strict plans
  /// Explicit mode only: operation id -> ids of operations that may follow it.
  std::map<int, std::vector<int>> successors;

  int op_count() const { return static_cast<int>(operations.size()); }
  const OperationSpec* operation_by_id(int op_id) const;

  bool operator==(const ProcessPlan&) const = default;
};

/// Unordered consecutive-operation pairs, each as (low id, high id),
/// sorted lexicographically.
using PairSet = std::vector<std::pair<int, int>>;

/// Derive the consecutive-operation pairs of a plan.
/// Strict: adjacent list entries. Unordered: all operation pairs.
/// Explicit: one pair per successor edge, deduplicated, order ignored.
/// Throws std::invalid_argument if an explicit successor references an
/// operation that is not part of the plan.
PairSet consecutive_pairs(const ProcessPlan& plan);

struct Part {
  int id = 0;
  double demand = 0.0; ///< units per planning horizon
  std::vector<ProcessPlan> plans;

  const ProcessPlan* plan_by_id(int plan_id) const;

  bool operator==(const Part&) const = default;
};

struct MachineType {
  int id = 0;
  double capacity = 0.0;                 ///< time units available per copy
  std::optional<int> available_copies;   ///< absent = unbounded at design level
  std::optional<double> invest_cost;     ///< currency per copy
  std::optional<double> amortized_cost;  ///< currency per copy per horizon

  bool operator==(const MachineType&) const = default;
};

/// Cell count plus optional per-cell size limits. Scalar limits in the
/// instance document are expanded to one entry per cell.
struct CellConfig {
  int count = 1;
  std::optional<std::vector<int>> min_per_cell;
  std::optional<std::vector<int>> max_per_cell;

  std::optional<int> min_at(int cell) const; ///< cell is 1-based
  std::optional<int> max_at(int cell) const;

  bool operator==(const CellConfig&) const = default;
};

struct Budgets {
  std::optional<double> operating_limit;  ///< TOC; absent = unbounded
  std::optional<double> investment_limit; ///< B; absent = unbounded

  bool operator==(const Budgets&) const = default;
};

struct Instance {
  std::vector<MachineType> machines;
  std::vector<Part> parts;
  CellConfig cells;
  Budgets budgets;

  int machine_count() const { return static_cast<int>(machines.size()); }
  int part_count() const { return static_cast<int>(parts.size()); }
  const MachineType* machine_by_id(int id) const;
  const Part* part_by_id(int id) const;

  bool operator==(const Instance&) const = default;
};

/// Parse failure; `path` points at the offending document location,
/// e.g. "parts[2].plans[1].operations[0].eligible[1].machine".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Parse the canonical instance document (JSON). Structural problems —
/// schema violations, dangling machine references, duplicate ids — throw
/// ParseError. Value-level invariant violations (zero demand, inverted cell
/// bounds, ...) parse fine and are reported by validate_instance.
Instance parse_instance(const std::string& text);

/// Render the canonical document. parse_instance(render_instance(x)) == x.
std::string render_instance(const Instance& inst);

struct ValidationIssue {
  std::string path;
  std::string message;

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool clean() const { return issues.empty(); }
};

/// Check every type invariant; one issue per violation, located by path.
ValidationReport validate_instance(const Instance& inst);

/// Per-plan counting table entry.
struct PlanStats {
  int part = 0;
  int plan = 0;
  int op_count = 0;                      ///< TS
  int pair_count = 0;                    ///< TO
  std::vector<int> eligible_counts;      ///< TM per operation, plan order
  std::vector<int> machine_requirement;  ///< machines the plan can touch, ascending
  bool fixed_route = false;              ///< every operation has one eligible machine

  int requirement_count() const { return static_cast<int>(machine_requirement.size()); }

  bool operator==(const PlanStats&) const = default;
};

struct InstanceStats {
  int part_count = 0;           ///< K
  int machine_count = 0;        ///< M
  int distinct_operations = 0;  ///< S, distinct operation labels instance-wide
  long long total_operations = 0;
  long long total_pairs = 0;
  long long total_eligibilities = 0; ///< sum of TM over all operations
  std::vector<int> plans_per_part;   ///< TPP, instance part order
  std::vector<PlanStats> plans;

  bool operator==(const InstanceStats&) const = default;
};

/// Derive all counting tables and per-plan machine-requirement sets.
InstanceStats derived_stats(const Instance& inst);

} // namespace cellform
