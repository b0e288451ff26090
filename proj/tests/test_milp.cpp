#include "doctest.h"

#include <cmath>
#include <random>

#include "cellform/milp/model.hpp"
#include "test_util.hpp"

using namespace cellform::milp;

namespace {

bool close(double a, double b, double tol = 1e-6) { return std::fabs(a - b) <= tol; }

/// Small random MILP: binaries plus narrow general integers, a few rows of
/// each relation, and sometimes a linearization pattern (continuous v with
/// rows v <= a and v <= b) to exercise the product handling of both engines.
Model random_model(std::mt19937& rng) {
  auto pick = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  Model model;
  model.sense = pick(0, 1) ? Sense::Maximize : Sense::Minimize;
  const int binaries = pick(1, 6);
  const int integers = pick(0, 2);
  for (int j = 0; j < binaries; ++j) {
    const int var = model.add_binary("b" + std::to_string(j));
    model.add_objective_term(var, pick(-5, 5));
  }
  for (int j = 0; j < integers; ++j) {
    const int var = model.add_integer("i" + std::to_string(j), 0, pick(1, 3));
    model.add_objective_term(var, pick(-5, 5));
  }
  const int rows = pick(1, 5);
  for (int r = 0; r < rows; ++r) {
    LinearExpr expr;
    const int terms = pick(1, binaries + integers);
    for (int t = 0; t < terms; ++t) {
      expr.push_back({pick(0, binaries + integers - 1),
                            static_cast<double>(pick(-4, 4))});
    }
    const Relation rel = r == 0 ? Relation::LessEq
                                : static_cast<Relation>(pick(0, 2));
    // keep right-hand sides loose enough that feasibility is common
    const double rhs = rel == Relation::Equal ? pick(0, 3) : pick(-2, 8);
    model.add_constraint("row" + std::to_string(r), expr, rel, rhs);
  }
  if (model.sense == Sense::Maximize && pick(0, 1)) {
    const int parent_a = pick(0, binaries - 1);
    const int parent_b = pick(0, binaries - 1);
    const int v = model.add_continuous("v", 0.0, 1.0);
    model.add_constraint("v.le.a", LinearExpr{{{v, 1.0}, {parent_a, -1.0}}},
                         Relation::LessEq, 0.0);
    model.add_constraint("v.le.b", LinearExpr{{{v, 1.0}, {parent_b, -1.0}}},
                         Relation::LessEq, 0.0);
    model.add_objective_term(v, pick(0, 4));
  }
  return model;
}

} // namespace

TEST_CASE("branch and bound solves a knapsack exactly") {
  Model model;
  model.sense = Sense::Maximize;
  const double values[] = {10, 13, 7, 11, 4};
  const double weights[] = {5, 7, 4, 6, 2};
  LinearExpr weight;
  for (int j = 0; j < 5; ++j) {
    const int var = model.add_binary("x" + std::to_string(j));
    model.add_objective_term(var, values[j]);
    weight.push_back({var, weights[j]});
  }
  model.add_constraint("weight", weight, Relation::LessEq, 12.0);

  const MilpSolution bb = solve_bb(model);
  REQUIRE(bb.status == SolveStatus::Optimal);
  const MilpSolution brute = brute_force_model(model, 1000);
  REQUIRE(brute.status == SolveStatus::Optimal);
  CHECK(close(bb.objective_value, brute.objective_value));
  CHECK(close(bb.objective_value, 23.0)); // items 0 and 1 fill the capacity exactly
  CHECK(bb.certificate.best_bound >= bb.objective_value - 1e-9);
  CHECK(relaxation_bound(model) >= bb.objective_value - 1e-9);
}

TEST_CASE("infeasible and unbounded models are reported") {
  SUBCASE("contradictory rows") {
    Model model;
    const int x = model.add_binary("x");
    model.add_constraint("one", LinearExpr{{{x, 1.0}}}, Relation::GreaterEq, 2.0);
    model.add_objective_term(x, 1.0);
    CHECK(solve_bb(model).status == SolveStatus::Infeasible);
    CHECK(brute_force_model(model, 100).status == SolveStatus::Infeasible);
  }
  SUBCASE("unbounded ray") {
    Model model;
    model.sense = Sense::Maximize;
    const int x = model.add_continuous("x", 0.0, kInfinity);
    // continuous-only model, no integral variables to branch on
    model.add_objective_term(x, 1.0);
    const int y = model.add_binary("y");
    model.add_constraint("tie", LinearExpr{{{y, 1.0}}}, Relation::LessEq, 1.0);
    CHECK(solve_bb(model).status == SolveStatus::Unbounded);
  }
}

TEST_CASE("node limit yields a usable bound") {
  // same data as the node-log case below; its root relaxation is fractional,
  // so one node cannot prove optimality
  Model model;
  model.sense = Sense::Maximize;
  LinearExpr weight;
  for (int j = 0; j < 9; ++j) {
    const int var = model.add_binary("x" + std::to_string(j));
    model.add_objective_term(var, 2 + (j * 5) % 7);
    weight.push_back({var, 1.0 + (j * 2) % 5});
  }
  model.add_constraint("weight", weight, Relation::LessEq, 9.0);

  const MilpSolution full = solve_bb(model);
  REQUIRE(full.status == SolveStatus::Optimal);

  SolverOptions limited;
  limited.node_limit = 1;
  const MilpSolution cut = solve_bb(model, limited);
  CHECK(cut.status == SolveStatus::LimitReached);
  CHECK(cut.certificate.node_count <= 1);
  // the reported bound must stay on the optimal side
  CHECK(cut.certificate.best_bound >= full.objective_value - 1e-9);
}

TEST_CASE("node log records sound pruning decisions") {
  Model model;
  model.sense = Sense::Maximize;
  LinearExpr weight;
  for (int j = 0; j < 9; ++j) {
    const int var = model.add_binary("x" + std::to_string(j));
    model.add_objective_term(var, 2 + (j * 5) % 7);
    weight.push_back({var, 1.0 + (j * 2) % 5});
  }
  model.add_constraint("weight", weight, Relation::LessEq, 9.0);

  std::vector<NodeLogEntry> log;
  SolverOptions options;
  options.node_log = &log;
  const MilpSolution sol = solve_bb(model, options);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(log.size() == static_cast<size_t>(sol.certificate.node_count));

  bool pruned_somewhere = false;
  for (const NodeLogEntry& entry : log) {
    if (entry.action == NodeLogEntry::Action::PrunedByBound) {
      pruned_somewhere = true;
      // pruning is only sound when the admissible bound cannot beat the optimum
      CHECK(entry.admissible_bound <= sol.objective_value + 1e-6);
    }
    if (entry.action == NodeLogEntry::Action::Branched) {
      CHECK(entry.branch_var >= 0);
    }
  }
  CHECK(pruned_somewhere);
}

TEST_CASE("brute force refuses oversized enumerations") {
  Model model;
  for (int j = 0; j < 40; ++j) model.add_binary("x" + std::to_string(j));
  model.add_objective_term(0, 1.0);
  CHECK_THROWS_AS(brute_force_model(model, 1000000), GuardExceeded);
  try {
    brute_force_model(model, 1000000);
  } catch (const GuardExceeded& e) {
    CHECK(e.guard() == 1000000);
    CHECK(e.size() > e.guard());
  }
}

TEST_CASE("branch and bound matches brute force on random models") {
  std::mt19937 rng(testutil::test_seed());
  int optimal_cases = 0;
  for (int round = 0; round < 120; ++round) {
    const Model model = random_model(rng);
    CAPTURE(round);
    const MilpSolution bb = solve_bb(model);
    const MilpSolution brute = brute_force_model(model, 1 << 22);
    REQUIRE(bb.status == brute.status);
    if (bb.status == SolveStatus::Optimal) {
      ++optimal_cases;
      CHECK(close(bb.objective_value, brute.objective_value));
      // relaxation stays on the optimal side of the integer optimum
      const double bound = relaxation_bound(model);
      if (model.sense == Sense::Maximize) {
        CHECK(bound >= bb.objective_value - 1e-6);
      } else {
        CHECK(bound <= bb.objective_value + 1e-6);
      }
    }
  }
  CHECK(optimal_cases > 40); // the generator must not drown in infeasibility
}

TEST_CASE("solver output is deterministic") {
  std::mt19937 rng(testutil::test_seed() + 1);
  const Model model = random_model(rng);
  const MilpSolution first = solve_bb(model);
  const MilpSolution second = solve_bb(model);
  CHECK(first.status == second.status);
  CHECK(first.certificate.node_count == second.certificate.node_count);
  CHECK(first.values == second.values);
}

TEST_CASE("first-fractional branching reaches the same optimum") {
  std::mt19937 rng(testutil::test_seed() + 2);
  for (int round = 0; round < 20; ++round) {
    const Model model = random_model(rng);
    SolverOptions first_frac;
    first_frac.branching = BranchRule::FirstFractional;
    const MilpSolution a = solve_bb(model);
    const MilpSolution b = solve_bb(model, first_frac);
    REQUIRE(a.status == b.status);
    if (a.status == SolveStatus::Optimal) {
      CHECK(close(a.objective_value, b.objective_value));
    }
  }
}
