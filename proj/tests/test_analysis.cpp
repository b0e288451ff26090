#include "doctest.h"

#include <cmath>
#include <random>

#include "cellform/analysis.hpp"
#include "test_util.hpp"

using namespace cellform;

namespace {

bool close(double a, double b, double tol = 1e-6) { return std::fabs(a - b) <= tol; }

milp::MilpSolution solve_kind(const BuiltFormulation& built) {
  return milp::solve_bb(built.model);
}

/// Every linearization variable must equal the product of its parent
/// assignment variables in a decoded-and-polished solution.
void check_products_exact(const BuiltFormulation& built,
                          const milp::MilpSolution& sol) {
  for (const auto& [key, var] : built.index.v) {
    const auto& [part, plan, op_i, op_j, machine_i, machine_j, cell] = key;
    const int xa = built.index.x.at({part, plan, op_i, machine_i, cell});
    const int xb = built.index.x.at({part, plan, op_j, machine_j, cell});
    const double product = sol.values[static_cast<size_t>(xa)] *
                           sol.values[static_cast<size_t>(xb)];
    CHECK(close(sol.values[static_cast<size_t>(var)], product, 1e-6));
  }
}

} // namespace

TEST_CASE("decode turns a per-cell optimum into grouping terms") {
  const Instance inst = testutil::load_fixture();
  const BuiltFormulation built = build_formulation(inst, FormulationKind::II, {});
  const milp::MilpSolution sol = solve_kind(built);
  REQUIRE(sol.status == milp::SolveStatus::Optimal);

  const GroupingSolution g = decode(sol, built.index, inst);
  CHECK(g.plan_selection.size() == 4);
  for (const Part& part : inst.parts) {
    REQUIRE(g.plan_selection.count(part.id));
    const ProcessPlan* plan = part.plan_by_id(g.plan_selection.at(part.id));
    REQUIRE(plan != nullptr);
    for (const OperationSpec& op : plan->operations) {
      CHECK(g.assignment.count({part.id, plan->id, op.id}));
    }
    // the per-cell formulation keeps every part inside one cell
    CHECK(g.visits.at(part.id).size() == 1);
    CHECK(g.family.at(part.id) == *g.visits.at(part.id).begin());
  }
  for (const auto& [key, copies] : g.allocation) {
    CHECK(copies >= 0);
    CHECK(g.z.at(key) == (copies > 0 ? 1 : 0));
  }
}

TEST_CASE("decode rejects broken solver points") {
  const Instance inst = testutil::load_fixture();
  const BuiltFormulation built = build_formulation(inst, FormulationKind::II, {});
  milp::MilpSolution sol = solve_kind(built);
  REQUIRE(sol.status == milp::SolveStatus::Optimal);

  SUBCASE("no values at all") {
    milp::MilpSolution empty;
    empty.status = milp::SolveStatus::Optimal;
    CHECK_THROWS_AS(decode(empty, built.index, inst), std::invalid_argument);
  }
  SUBCASE("value beyond integrality tolerance") {
    sol.values[static_cast<size_t>(built.index.y.begin()->second)] = 0.4;
    CHECK_THROWS_WITH_AS(decode(sol, built.index, inst),
                         doctest::Contains("non-integral"), std::invalid_argument);
  }
  SUBCASE("assignment without its plan indicator") {
    // activate an X that belongs to a plan nobody selected
    for (const auto& [key, var] : built.index.x) {
      const auto& [part, plan, op, machine, cell] = key;
      const int y = built.index.y.at({part, plan, cell});
      if (sol.values[static_cast<size_t>(y)] < 0.5) {
        sol.values[static_cast<size_t>(var)] = 1.0;
        break;
      }
    }
    CHECK_THROWS_AS(decode(sol, built.index, inst), std::invalid_argument);
  }
}

TEST_CASE("movement accounting identity and classification") {
  const Instance inst = testutil::load_fixture();
  for (FormulationKind kind :
       {FormulationKind::I, FormulationKind::II, FormulationKind::Phase1}) {
    CAPTURE(to_string(kind));
    const BuiltFormulation built = build_formulation(inst, kind, {});
    const milp::MilpSolution sol = solve_kind(built);
    REQUIRE(sol.status == milp::SolveStatus::Optimal);
    const GroupingSolution g = decode(sol, built.index, inst);
    const MovementReport moves = movements(g, inst);
    CHECK(moves.total.intercell + moves.total.intracell + moves.total.no_movement ==
          moves.total_pairs);
    long long expected_pairs = 0;
    for (const auto& [part, plan] : g.plan_selection) {
      const ProcessPlan* p = inst.part_by_id(part)->plan_by_id(plan);
      expected_pairs += static_cast<long long>(consecutive_pairs(*p).size());
    }
    CHECK(moves.total_pairs == expected_pairs);
    MovementCounts sum;
    for (const auto& [part, counts] : moves.per_part) {
      sum.intercell += counts.intercell;
      sum.intracell += counts.intracell;
      sum.no_movement += counts.no_movement;
    }
    CHECK(sum == moves.total);
  }
}

TEST_CASE("cost breakdown prices the per-cell optimum") {
  const Instance inst = testutil::load_fixture();
  const BuiltFormulation built = build_formulation(inst, FormulationKind::II, {});
  const milp::MilpSolution sol = solve_kind(built);
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  const GroupingSolution g = decode(sol, built.index, inst);
  const CostReport costs = cost_breakdown(g, inst);

  CHECK(close(costs.investment, sol.objective_value));
  double operating = 0;
  for (const auto& [part, value] : costs.operating_per_part) operating += value;
  CHECK(close(costs.operating, operating));
  for (const auto& [key, value] : costs.utilization) {
    CHECK(value >= 0.0);
    CHECK(value <= 1.0 + 1e-9);
  }
  // loads must be covered by allocated capacity
  for (const auto& [key, load] : costs.load) {
    const MachineType* mt = inst.machine_by_id(key.first);
    const auto it = g.allocation.find(key);
    const int copies = it == g.allocation.end() ? 0 : it->second;
    CHECK(load <= mt->capacity * copies + 1e-6);
  }
}

TEST_CASE("verification recomputes objectives and flags tampering") {
  const Instance inst = testutil::load_fixture();
  const BuiltFormulation built = build_formulation(inst, FormulationKind::II, {});
  const milp::MilpSolution sol = solve_kind(built);
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  GroupingSolution g = decode(sol, built.index, inst);

  SUBCASE("clean solution passes with the model objective") {
    const FeasibilityReport rep = verify_solution(g, inst, FormulationKind::II, {});
    CHECK(rep.clean());
    CHECK(close(rep.objective, sol.objective_value));
  }
  SUBCASE("a part moved across cells breaks the single-cell rule") {
    const int part = 1;
    const int plan = g.plan_selection.at(part);
    const ProcessPlan* p = inst.part_by_id(part)->plan_by_id(plan);
    auto& slot = g.assignment.at({part, plan, p->operations.front().id});
    slot.second = slot.second == 1 ? 2 : 1;
    const FeasibilityReport rep = verify_solution(g, inst, FormulationKind::II, {});
    REQUIRE_FALSE(rep.clean());
    bool named = false;
    for (const auto& v : rep.violations) {
      if (v.constraint.find("op-assignment[k1]") != std::string::npos) named = true;
    }
    CHECK(named);
  }
  SUBCASE("an ineligible machine is flagged by row") {
    const int part = 1;
    const int plan = g.plan_selection.at(part);
    const ProcessPlan* p = inst.part_by_id(part)->plan_by_id(plan);
    const OperationSpec& op = p->operations.front();
    auto& slot = g.assignment.at({part, plan, op.id});
    for (const MachineType& mt : inst.machines) {
      if (!op.eligibility_for(mt.id)) {
        slot.first = mt.id;
        break;
      }
    }
    const FeasibilityReport rep = verify_solution(g, inst, FormulationKind::II, {});
    REQUIRE_FALSE(rep.clean());
    CHECK(rep.violations.front().constraint.find("op-assignment") == 0);
  }
  SUBCASE("removing a machine copy overloads the cell") {
    for (auto& [key, copies] : g.allocation) {
      if (copies > 0) {
        copies = 0;
        break;
      }
    }
    const FeasibilityReport rep = verify_solution(g, inst, FormulationKind::II, {});
    REQUIRE_FALSE(rep.clean());
    bool load_row = false;
    for (const auto& v : rep.violations) {
      if (v.constraint.find("machine-load") == 0 && v.slack < 0) load_row = true;
    }
    CHECK(load_row);
  }
}

TEST_CASE("verification checks kind-specific rows") {
  const Instance inst = testutil::load_fixture();
  SUBCASE("availability and cell bounds for the movement build") {
    const BuiltFormulation built = build_formulation(inst, FormulationKind::I, {});
    const milp::MilpSolution sol = solve_kind(built);
    REQUIRE(sol.status == milp::SolveStatus::Optimal);
    GroupingSolution g = decode(sol, built.index, inst);
    REQUIRE(verify_solution(g, inst, FormulationKind::I, {}).clean());

    GroupingSolution greedy = g;
    for (auto& [key, copies] : greedy.allocation) copies = 2;
    const FeasibilityReport rep = verify_solution(greedy, inst, FormulationKind::I, {});
    REQUIRE_FALSE(rep.clean());
    bool availability = false;
    bool cell_max = false;
    for (const auto& v : rep.violations) {
      if (v.constraint.find("availability") == 0) availability = true;
      if (v.constraint.find("cell-max") == 0) cell_max = true;
    }
    CHECK(availability);
    CHECK(cell_max);
  }
  SUBCASE("budget row for the constrained movement build") {
    FormulationOptions opts;
    opts.investment_budget = 550;
    const BuiltFormulation built = build_formulation(inst, FormulationKind::IV, opts);
    const milp::MilpSolution sol = solve_kind(built);
    REQUIRE(sol.status == milp::SolveStatus::Optimal);
    GroupingSolution g = decode(sol, built.index, inst);
    REQUIRE(verify_solution(g, inst, FormulationKind::IV, opts).clean());

    for (auto& [key, copies] : g.allocation) copies += 1;
    FormulationOptions tight;
    tight.investment_budget = 550;
    const FeasibilityReport rep = verify_solution(g, inst, FormulationKind::IV, tight);
    REQUIRE_FALSE(rep.clean());
    bool budget = false;
    for (const auto& v : rep.violations) {
      if (v.constraint == "investment-budget") budget = true;
    }
    CHECK(budget);
  }
}

TEST_CASE("linearization variables equal their products at the optimum") {
  const Instance inst = testutil::load_fixture();
  for (FormulationKind kind : {FormulationKind::I, FormulationKind::IV}) {
    CAPTURE(to_string(kind));
    const BuiltFormulation built = build_formulation(inst, kind, {});
    const milp::MilpSolution sol = solve_kind(built);
    REQUIRE(sol.status == milp::SolveStatus::Optimal);
    check_products_exact(built, sol);
  }
}

TEST_CASE("oracle handles edge cases") {
  const Instance inst = testutil::load_fixture();
  SUBCASE("tiny guard refuses the sweep") {
    CHECK_THROWS_AS(semantic_oracle(inst, FormulationKind::I, {}, 1000),
                    milp::GuardExceeded);
  }
  SUBCASE("hopeless budget is infeasible on both engines") {
    FormulationOptions opts;
    opts.investment_budget = 10; // below any machine price
    const OracleResult oracle =
        semantic_oracle(inst, FormulationKind::IV, opts, 100000000LL);
    CHECK(oracle.status == milp::SolveStatus::Infeasible);
    const BuiltFormulation built = build_formulation(inst, FormulationKind::IV, opts);
    CHECK(solve_kind(built).status == milp::SolveStatus::Infeasible);
  }
  SUBCASE("leaf count matches the choice structure") {
    // per-cell kinds enumerate plan x cell x machines per operation
    const OracleResult oracle =
        semantic_oracle(inst, FormulationKind::II, {}, 100000000LL);
    CHECK(oracle.leaf_count == 294912);
  }
}

TEST_CASE("phase-1 aggregate relaxes the amortized build") {
  const Instance inst = testutil::load_fixture();
  const OracleResult one = semantic_oracle(inst, FormulationKind::Phase1, {}, 100000000LL);
  const OracleResult full = semantic_oracle(inst, FormulationKind::III, {}, 100000000LL);
  REQUIRE(one.status == milp::SolveStatus::Optimal);
  REQUIRE(full.status == milp::SolveStatus::Optimal);
  CHECK(one.objective <= full.objective + 1e-6);
}

TEST_CASE("both engines agree on random instances") {
  std::mt19937 rng(testutil::test_seed() + 20);
  for (int round = 0; round < 15; ++round) {
    const Instance inst = testutil::random_instance(rng);
    CAPTURE(round);
    for (FormulationKind kind :
         {FormulationKind::I, FormulationKind::II, FormulationKind::III,
          FormulationKind::IV, FormulationKind::Phase1}) {
      CAPTURE(to_string(kind));
      const BuiltFormulation built = build_formulation(inst, kind, {});
      const milp::MilpSolution bb = milp::solve_bb(built.model);
      const OracleResult oracle = semantic_oracle(inst, kind, {}, 100000000LL);
      REQUIRE(bb.status == oracle.status);
      if (bb.status == milp::SolveStatus::Optimal) {
        CHECK(close(bb.objective_value, oracle.objective));
        const GroupingSolution g = decode(bb, built.index, inst);
        const FeasibilityReport rep = verify_solution(g, inst, kind, {});
        CHECK(rep.clean());
        CHECK(close(rep.objective, bb.objective_value));
        const FeasibilityReport oracle_rep =
            verify_solution(oracle.solution, inst, kind, {});
        CHECK(oracle_rep.clean());
        CHECK(close(oracle_rep.objective, oracle.objective));
      }
    }
  }
}
