#pragma once

#include <vector>

#include "cellform/milp/model.hpp"

namespace cellform::milp {

/// Bounded-variable revised simplex over a Model's linear relaxation.
///
/// The solver keeps one evolving basis across calls. Variable bounds may be
/// changed between calls (that is how branch and bound drives it); the basis
/// matrix itself never changes, so a re-optimize after a bound change starts
/// dual-feasible and usually finishes in a handful of dual pivots.
///
/// Rows are stored as  a.x + s = rhs  with one logical variable s per row
/// whose bounds encode the relation. Extra rows appended at construction
/// participate like ordinary constraints (used for internally derived valid
/// inequalities); they are not part of the originating Model.
class LpSolver {
 public:
  enum class Status { Optimal, Infeasible, Unbounded, IterLimit };

  struct Result {
    Status status = Status::IterLimit;
    double objective = 0.0; ///< in the model's own sense, without the constant
  };

  LpSolver(const Model& model, const std::vector<Constraint>& extra_rows = {});

  /// Replace the working bounds of a structural variable.
  void set_bounds(int var, double lo, double ub);
  double lower_bound(int var) const { return lo_[static_cast<size_t>(var)]; }
  double upper_bound(int var) const { return hi_[static_cast<size_t>(var)]; }

  /// Optimize from the current basis and bounds.
  Result optimize();

  /// Structural variable values of the last optimal basis.
  const std::vector<double>& values() const { return solution_; }

  long long total_pivots() const { return total_pivots_; }

 private:
  enum class VStat : unsigned char { Basic, AtLower, AtUpper, FreeZero };

  int rows_ = 0;       // m
  int structurals_ = 0;// n
  int total_ = 0;      // n + m

  // column-wise matrix for the structural part
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> rhs_;
  std::vector<double> cost_;    // minimize form over all n+m variables
  std::vector<double> lo_, hi_; // working bounds, logicals included
  bool maximize_ = false;

  std::vector<int> head_;       // basic variable per row
  std::vector<VStat> vstat_;
  std::vector<double> binv_;    // dense m*m, row-major
  std::vector<double> xb_;      // basic variable values
  std::vector<double> d_;       // reduced costs, phase-2 objective
  std::vector<double> solution_;

  long long total_pivots_ = 0;
  int pivots_since_factor_ = 0;

  double nonbasic_value(int var) const;
  void reset_to_slack_basis();
  bool factorize();             // rebuild binv_ from head_; false if singular
  void compute_xb();
  void compute_reduced_costs(const std::vector<double>& cost, std::vector<double>& d) const;
  void ftran(int var, std::vector<double>& w) const;   // w = Binv * column(var)
  double column_dot(int var, const std::vector<double>& row_vec) const;
  void apply_pivot(int row, int entering, const std::vector<double>& w);

  bool make_dual_feasible();    // bound flips where possible
  Result dual_simplex();
  Result primal(const std::vector<double>& cost, bool phase_one, std::vector<double>& d);
  Result primal_phase_one();
  double infeasibility() const;
  void extract_solution();
  double objective_value() const;
};

} // namespace cellform::milp
