#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cellform/formulations.hpp"
#include "cellform/instance.hpp"
#include "cellform/milp/model.hpp"

namespace cellform {

/// Solver output translated back into grouping terms.
struct GroupingSolution {
  std::map<int, int> plan_selection; ///< part -> chosen plan
  /// (part, plan, operation) -> (machine, cell) for the chosen plans.
  std::map<std::tuple<int, int, int>, std::pair<int, int>> assignment;
  std::map<std::pair<int, int>, int> allocation; ///< (machine, cell) -> copies
  std::map<std::pair<int, int>, int> z;          ///< (machine, cell) -> 1 iff copies > 0
  std::map<int, int> family;                     ///< part -> home cell
  std::map<int, std::set<int>> visits;           ///< part -> cells it touches
};

struct MovementCounts {
  long long intercell = 0;
  long long intracell = 0;
  long long no_movement = 0;

  bool operator==(const MovementCounts&) const = default;
};

/// Consecutive-operation pairs classified by where their two operations run.
struct MovementReport {
  MovementCounts total;
  std::map<int, MovementCounts> per_part;
  long long total_pairs = 0;
};

struct CostReport {
  double investment = 0.0; ///< copies priced at invest_cost
  double amortized = 0.0;  ///< copies priced at amortized_cost
  double operating = 0.0;  ///< demand-weighted operating cost of assigned operations
  std::map<int, double> operating_per_part;
  std::map<std::pair<int, int>, double> load;        ///< (machine, cell) -> time units
  std::map<std::pair<int, int>, double> utilization; ///< load/(capacity*copies), copies > 0
  /// (part, machine) -> per-unit processing time of the part's operations
  /// assigned to that machine.
  std::map<std::pair<int, int>, double> machine_time_per_part;
};

struct FeasibilityIssue {
  std::string constraint; ///< role-based id, e.g. "machine-load[m2.c1]"
  double slack = 0.0;     ///< negative = violated amount
  std::string detail;
};

struct FeasibilityReport {
  std::vector<FeasibilityIssue> violations;
  double objective = 0.0; ///< recomputed from the solution, never from the model

  bool clean() const { return violations.empty(); }
};

/// Translate a solver point back into grouping semantics. Requires an optimal
/// or limit-reached solution carrying values. Throws std::invalid_argument on
/// values beyond integrality tolerance, assignments without a matching plan
/// indicator, or unassigned operations; messages name the variable key.
GroupingSolution decode(const milp::MilpSolution& sol, const VarIndex& index,
                        const Instance& inst);

/// Classify every consecutive pair of the selected plans: same machine and
/// cell = no movement, same cell on two machines = intracell, two cells =
/// intercell.
MovementReport movements(const GroupingSolution& g, const Instance& inst);

/// Investment, amortized, and operating totals plus loads and utilization.
/// Machines without a configured cost contribute zero to that total.
CostReport cost_breakdown(const GroupingSolution& g, const Instance& inst);

/// Re-check every constraint of the formulation directly from instance data
/// (independently of any Model) and recompute the objective from the
/// solution. Empty violation list iff feasible.
FeasibilityReport verify_solution(const GroupingSolution& g, const Instance& inst,
                                  FormulationKind kind,
                                  const FormulationOptions& opts = {});

struct OracleResult {
  milp::SolveStatus status = milp::SolveStatus::Infeasible;
  GroupingSolution solution; ///< meaningful when status is optimal
  double objective = 0.0;
  long long leaf_count = 0;
};

/// Exhaustive ground-truth engine: enumerates every plan selection and
/// operation assignment, allocates machine copies minimally from load
/// ceilings (padding undersized cells with the cheapest available machines
/// where a minimum cell size applies), evaluates the objective directly, and
/// returns the first optimum in enumeration order. Never samples; throws
/// GuardExceeded when the assignment count exceeds `guard`.
OracleResult semantic_oracle(const Instance& inst, FormulationKind kind,
                             const FormulationOptions& opts, long long guard);

} // namespace cellform
