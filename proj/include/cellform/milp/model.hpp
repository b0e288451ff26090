#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellform::milp {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarKind { Binary, Integer, Continuous };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lb = 0.0;
  double ub = kInfinity;
};

enum class Relation { LessEq, Equal, GreaterEq };

struct Term {
  int var = 0;
  double coeff = 0.0;
};

using LinearExpr = std::vector<Term>;

struct Constraint {
  std::string name;
  LinearExpr terms;
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

enum class Sense { Minimize, Maximize };

/// A mixed-integer linear program. Variables and constraints keep their
/// creation order; variable ids are indices into `variables`.
struct Model {
  Sense sense = Sense::Minimize;
  LinearExpr objective;
  double objective_constant = 0.0;
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;

  int add_binary(std::string name);
  int add_integer(std::string name, double lb, double ub);
  int add_continuous(std::string name, double lb, double ub);
  void add_constraint(std::string name, LinearExpr terms, Relation rel, double rhs);
  void add_objective_term(int var, double coeff);

  int var_count() const { return static_cast<int>(variables.size()); }
  int constraint_count() const { return static_cast<int>(constraints.size()); }
  bool is_integral_kind(int var) const {
    return variables[static_cast<size_t>(var)].kind != VarKind::Continuous;
  }

  /// Structural checks: unique names, finite coefficients, sane bounds,
  /// in-range variable references. Empty result means well formed.
  std::vector<std::string> problems() const;
};

/// Plain-text dump in the common LP-file layout. A debugging aid, not a
/// compatibility promise.
void write_lp(const Model& model, std::ostream& out);

enum class SolveStatus { Optimal, Infeasible, Unbounded, LimitReached };

std::string to_string(SolveStatus status);

struct Certificate {
  double best_bound = 0.0;
  long long node_count = 0;
  double wall_time_sec = 0.0;
};

struct MilpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> values;  ///< one entry per model variable when a point exists
  double objective_value = 0.0;
  Certificate certificate;
};

enum class BranchRule {
  MostFractional,  ///< fractional part closest to 1/2, ties to the lowest index
  FirstFractional, ///< lowest-index fractional variable
};

/// What happened at one search node; collected when SolverOptions::node_log
/// is set so tests can audit pruning decisions.
struct NodeLogEntry {
  long long node = 0;
  int depth = 0;
  double lp_bound = 0.0;        ///< raw relaxation value
  double admissible_bound = 0.0;///< bound actually used for pruning decisions
  enum class Action { Branched, Integral, PrunedByBound, PrunedInfeasible, Limit } action =
      Action::Branched;
  int branch_var = -1;
};

struct SolverOptions {
  std::optional<long long> node_limit;
  std::optional<double> time_limit_sec;
  BranchRule branching = BranchRule::MostFractional;
  double tolerance = 1e-6;
  /// Worker count accepted for interface compatibility; the search itself is
  /// deterministic and single-threaded, which satisfies the certified-value
  /// contract for any worker count.
  int workers = 1;
  /// When set, receives one entry per explored node.
  std::vector<NodeLogEntry>* node_log = nullptr;
};

/// Deterministic LP-based branch and bound.
/// Throws std::invalid_argument when the model is malformed.
MilpSolution solve_bb(const Model& model, const SolverOptions& options = {});

/// Admissible bound from the linear relaxation (simplex), +/-infinity when the
/// relaxation is unbounded. An infeasible relaxation yields the sense-worst
/// value (-inf under maximize, +inf under minimize).
double relaxation_bound(const Model& model);

/// Thrown when an exact enumeration would exceed its guard.
class GuardExceeded : public std::runtime_error {
 public:
  GuardExceeded(long long size, long long guard)
      : std::runtime_error("exact enumeration of " + std::to_string(size) +
                           " assignments exceeds the guard of " + std::to_string(guard)),
        size_(size), guard_(guard) {}
  long long size() const { return size_; }
  long long guard() const { return guard_; }

 private:
  long long size_;
  long long guard_;
};

/// Exhaustive reference solver. Enumerates every assignment of the integral
/// variables (never samples); refuses with GuardExceeded when the domain
/// product exceeds `guard`. Continuous variables must be linearization
/// variables (bounded above only by parent binaries, nonnegative objective
/// coefficient under maximize); they are set to the minimum of their parents.
MilpSolution brute_force_model(const Model& model, long long guard);

} // namespace cellform::milp
