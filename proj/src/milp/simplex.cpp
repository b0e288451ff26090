#include "cellform/milp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cellform::milp {

namespace {

constexpr double kFeasTol = 1e-7;
constexpr double kDualTol = 1e-7;
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorInterval = 100;
constexpr long long kIterationLimit = 200000;

bool below(double v, double lo) { return v < lo - kFeasTol * std::max(1.0, std::abs(lo)); }
bool above(double v, double hi) { return v > hi + kFeasTol * std::max(1.0, std::abs(hi)); }

} // namespace

LpSolver::LpSolver(const Model& model, const std::vector<Constraint>& extra_rows) {
  structurals_ = model.var_count();
  rows_ = model.constraint_count() + static_cast<int>(extra_rows.size());
  total_ = structurals_ + rows_;
  maximize_ = model.sense == Sense::Maximize;

  cols_.assign(static_cast<size_t>(structurals_), {});
  rhs_.assign(static_cast<size_t>(rows_), 0.0);
  cost_.assign(static_cast<size_t>(total_), 0.0);
  lo_.resize(static_cast<size_t>(total_));
  hi_.resize(static_cast<size_t>(total_));

  for (const auto& term : model.objective)
    cost_[static_cast<size_t>(term.var)] += maximize_ ? -term.coeff : term.coeff;

  for (int j = 0; j < structurals_; ++j) {
    lo_[static_cast<size_t>(j)] = model.variables[static_cast<size_t>(j)].lb;
    hi_[static_cast<size_t>(j)] = model.variables[static_cast<size_t>(j)].ub;
  }

  auto add_row = [this](const Constraint& c, int r) {
    std::map<int, double> acc;
    for (const auto& term : c.terms) acc[term.var] += term.coeff;
    for (const auto& [var, coeff] : acc)
      if (coeff != 0.0) cols_[static_cast<size_t>(var)].push_back({r, coeff});
    rhs_[static_cast<size_t>(r)] = c.rhs;
    const int logical = structurals_ + r;
    switch (c.rel) {
      case Relation::LessEq:
        lo_[static_cast<size_t>(logical)] = 0.0;
        hi_[static_cast<size_t>(logical)] = kInfinity;
        break;
      case Relation::Equal:
        lo_[static_cast<size_t>(logical)] = 0.0;
        hi_[static_cast<size_t>(logical)] = 0.0;
        break;
      case Relation::GreaterEq:
        lo_[static_cast<size_t>(logical)] = -kInfinity;
        hi_[static_cast<size_t>(logical)] = 0.0;
        break;
    }
  };

  int r = 0;
  for (const auto& c : model.constraints) add_row(c, r++);
  for (const auto& c : extra_rows) add_row(c, r++);

  solution_.assign(static_cast<size_t>(structurals_), 0.0);
  reset_to_slack_basis();
}

void LpSolver::set_bounds(int var, double lo, double ub) {
  lo_[static_cast<size_t>(var)] = lo;
  hi_[static_cast<size_t>(var)] = ub;
}

double LpSolver::nonbasic_value(int var) const {
  switch (vstat_[static_cast<size_t>(var)]) {
    case VStat::AtLower: return lo_[static_cast<size_t>(var)];
    case VStat::AtUpper: return hi_[static_cast<size_t>(var)];
    case VStat::FreeZero: return 0.0;
    case VStat::Basic: break;
  }
  return 0.0;
}

void LpSolver::reset_to_slack_basis() {
  head_.resize(static_cast<size_t>(rows_));
  vstat_.assign(static_cast<size_t>(total_), VStat::AtLower);
  for (int j = 0; j < total_; ++j) {
    if (std::isfinite(lo_[static_cast<size_t>(j)]))
      vstat_[static_cast<size_t>(j)] = VStat::AtLower;
    else if (std::isfinite(hi_[static_cast<size_t>(j)]))
      vstat_[static_cast<size_t>(j)] = VStat::AtUpper;
    else
      vstat_[static_cast<size_t>(j)] = VStat::FreeZero;
  }
  for (int r = 0; r < rows_; ++r) {
    head_[static_cast<size_t>(r)] = structurals_ + r;
    vstat_[static_cast<size_t>(structurals_ + r)] = VStat::Basic;
  }
  binv_.assign(static_cast<size_t>(rows_) * static_cast<size_t>(rows_), 0.0);
  for (int i = 0; i < rows_; ++i) binv_[static_cast<size_t>(i) * rows_ + i] = 1.0;
  xb_.assign(static_cast<size_t>(rows_), 0.0);
  pivots_since_factor_ = 0;
}

bool LpSolver::factorize() {
  const int m = rows_;
  if (m == 0) return true;
  // Gauss-Jordan on [B | I] with partial pivoting.
  std::vector<double> work(static_cast<size_t>(m) * m, 0.0);
  for (int k = 0; k < m; ++k) {
    const int var = head_[static_cast<size_t>(k)];
    if (var >= structurals_) {
      work[static_cast<size_t>(var - structurals_) * m + k] = 1.0;
    } else {
      for (const auto& [row, coeff] : cols_[static_cast<size_t>(var)])
        work[static_cast<size_t>(row) * m + k] = coeff;
    }
  }
  std::vector<double> inv(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) inv[static_cast<size_t>(i) * m + i] = 1.0;

  for (int col = 0; col < m; ++col) {
    int piv = -1;
    double best = kPivotTol;
    for (int row = col; row < m; ++row) {
      double v = std::abs(work[static_cast<size_t>(row) * m + col]);
      if (v > best) {
        best = v;
        piv = row;
      }
    }
    if (piv < 0) return false;
    if (piv != col) {
      for (int j = 0; j < m; ++j) {
        std::swap(work[static_cast<size_t>(piv) * m + j], work[static_cast<size_t>(col) * m + j]);
        std::swap(inv[static_cast<size_t>(piv) * m + j], inv[static_cast<size_t>(col) * m + j]);
      }
    }
    const double scale = 1.0 / work[static_cast<size_t>(col) * m + col];
    for (int j = 0; j < m; ++j) {
      work[static_cast<size_t>(col) * m + j] *= scale;
      inv[static_cast<size_t>(col) * m + j] *= scale;
    }
    for (int row = 0; row < m; ++row) {
      if (row == col) continue;
      const double f = work[static_cast<size_t>(row) * m + col];
      if (f == 0.0) continue;
      for (int j = 0; j < m; ++j) {
        work[static_cast<size_t>(row) * m + j] -= f * work[static_cast<size_t>(col) * m + j];
        inv[static_cast<size_t>(row) * m + j] -= f * inv[static_cast<size_t>(col) * m + j];
      }
    }
  }
  binv_ = std::move(inv);
  pivots_since_factor_ = 0;
  return true;
}

void LpSolver::compute_xb() {
  const int m = rows_;
  std::vector<double> adj(rhs_);
  for (int j = 0; j < total_; ++j) {
    if (vstat_[static_cast<size_t>(j)] == VStat::Basic) continue;
    const double v = nonbasic_value(j);
    if (v == 0.0) continue;
    if (j >= structurals_) {
      adj[static_cast<size_t>(j - structurals_)] -= v;
    } else {
      for (const auto& [row, coeff] : cols_[static_cast<size_t>(j)])
        adj[static_cast<size_t>(row)] -= coeff * v;
    }
  }
  for (int i = 0; i < m; ++i) {
    double sum = 0.0;
    const double* row = binv_.data() + static_cast<size_t>(i) * m;
    for (int r = 0; r < m; ++r) sum += row[r] * adj[static_cast<size_t>(r)];
    xb_[static_cast<size_t>(i)] = sum;
  }
}

void LpSolver::compute_reduced_costs(const std::vector<double>& cost,
                                     std::vector<double>& d) const {
  const int m = rows_;
  d.assign(static_cast<size_t>(total_), 0.0);
  std::vector<double> y(static_cast<size_t>(m), 0.0);
  // y = Binv^T * c_B
  for (int i = 0; i < m; ++i) {
    const double cb = cost[static_cast<size_t>(head_[static_cast<size_t>(i)])];
    if (cb == 0.0) continue;
    const double* row = binv_.data() + static_cast<size_t>(i) * m;
    for (int r = 0; r < m; ++r) y[static_cast<size_t>(r)] += cb * row[r];
  }
  for (int j = 0; j < total_; ++j) {
    if (vstat_[static_cast<size_t>(j)] == VStat::Basic) continue;
    double dj = cost[static_cast<size_t>(j)];
    if (j >= structurals_) {
      dj -= y[static_cast<size_t>(j - structurals_)];
    } else {
      for (const auto& [row, coeff] : cols_[static_cast<size_t>(j)])
        dj -= coeff * y[static_cast<size_t>(row)];
    }
    d[static_cast<size_t>(j)] = dj;
  }
}

void LpSolver::ftran(int var, std::vector<double>& w) const {
  const int m = rows_;
  w.assign(static_cast<size_t>(m), 0.0);
  if (var >= structurals_) {
    const int r = var - structurals_;
    for (int i = 0; i < m; ++i) w[static_cast<size_t>(i)] = binv_[static_cast<size_t>(i) * m + r];
    return;
  }
  for (const auto& [row, coeff] : cols_[static_cast<size_t>(var)])
    for (int i = 0; i < m; ++i)
      w[static_cast<size_t>(i)] += coeff * binv_[static_cast<size_t>(i) * m + row];
}

double LpSolver::column_dot(int var, const std::vector<double>& row_vec) const {
  if (var >= structurals_) return row_vec[static_cast<size_t>(var - structurals_)];
  double sum = 0.0;
  for (const auto& [row, coeff] : cols_[static_cast<size_t>(var)])
    sum += coeff * row_vec[static_cast<size_t>(row)];
  return sum;
}

void LpSolver::apply_pivot(int row, int entering, const std::vector<double>& w) {
  const int m = rows_;
  const double piv = w[static_cast<size_t>(row)];
  double* prow = binv_.data() + static_cast<size_t>(row) * m;
  const double inv_piv = 1.0 / piv;
  for (int j = 0; j < m; ++j) prow[j] *= inv_piv;
  for (int i = 0; i < m; ++i) {
    if (i == row) continue;
    const double f = w[static_cast<size_t>(i)];
    if (f == 0.0) continue;
    double* irow = binv_.data() + static_cast<size_t>(i) * m;
    for (int j = 0; j < m; ++j) irow[j] -= f * prow[j];
  }
  head_[static_cast<size_t>(row)] = entering;
  vstat_[static_cast<size_t>(entering)] = VStat::Basic;
  ++total_pivots_;
  ++pivots_since_factor_;
}

double LpSolver::infeasibility() const {
  double sum = 0.0;
  for (int i = 0; i < rows_; ++i) {
    const int var = head_[static_cast<size_t>(i)];
    const double v = xb_[static_cast<size_t>(i)];
    const double lo = lo_[static_cast<size_t>(var)];
    const double hi = hi_[static_cast<size_t>(var)];
    if (below(v, lo)) sum += lo - v;
    if (above(v, hi)) sum += v - hi;
  }
  return sum;
}

bool LpSolver::make_dual_feasible() {
  bool ok = true;
  for (int j = 0; j < total_; ++j) {
    if (vstat_[static_cast<size_t>(j)] == VStat::Basic) continue;
    const double dj = d_[static_cast<size_t>(j)];
    switch (vstat_[static_cast<size_t>(j)]) {
      case VStat::AtLower:
        if (dj < -kDualTol) {
          if (std::isfinite(hi_[static_cast<size_t>(j)]))
            vstat_[static_cast<size_t>(j)] = VStat::AtUpper;
          else
            ok = false;
        }
        break;
      case VStat::AtUpper:
        if (dj > kDualTol) {
          if (std::isfinite(lo_[static_cast<size_t>(j)]))
            vstat_[static_cast<size_t>(j)] = VStat::AtLower;
          else
            ok = false;
        }
        break;
      case VStat::FreeZero:
        if (std::abs(dj) > kDualTol) ok = false;
        break;
      case VStat::Basic:
        break;
    }
    if (!ok) return false;
  }
  return true;
}

LpSolver::Result LpSolver::optimize() {
  for (int j = 0; j < total_; ++j)
    if (lo_[static_cast<size_t>(j)] > hi_[static_cast<size_t>(j)] + kFeasTol)
      return {Status::Infeasible, 0.0};

  // Nonbasic variables pinned at a bound that has since become infinite need a
  // new status (can happen if a caller relaxes bounds between calls).
  for (int j = 0; j < total_; ++j) {
    if (vstat_[static_cast<size_t>(j)] == VStat::Basic) continue;
    if (vstat_[static_cast<size_t>(j)] == VStat::AtLower && !std::isfinite(lo_[static_cast<size_t>(j)]))
      vstat_[static_cast<size_t>(j)] =
          std::isfinite(hi_[static_cast<size_t>(j)]) ? VStat::AtUpper : VStat::FreeZero;
    else if (vstat_[static_cast<size_t>(j)] == VStat::AtUpper && !std::isfinite(hi_[static_cast<size_t>(j)]))
      vstat_[static_cast<size_t>(j)] =
          std::isfinite(lo_[static_cast<size_t>(j)]) ? VStat::AtLower : VStat::FreeZero;
  }

  if (rows_ == 0) {
    // Pure box problem.
    double obj = 0.0;
    for (int j = 0; j < structurals_; ++j) {
      const double c = cost_[static_cast<size_t>(j)];
      double v;
      if (c > 0.0)
        v = lo_[static_cast<size_t>(j)];
      else if (c < 0.0)
        v = hi_[static_cast<size_t>(j)];
      else
        v = std::isfinite(lo_[static_cast<size_t>(j)]) ? lo_[static_cast<size_t>(j)]
            : std::isfinite(hi_[static_cast<size_t>(j)]) ? hi_[static_cast<size_t>(j)]
                                                         : 0.0;
      if (!std::isfinite(v)) return {Status::Unbounded, 0.0};
      solution_[static_cast<size_t>(j)] = v;
      obj += c * v;
    }
    return {Status::Optimal, maximize_ ? -obj : obj};
  }

  compute_xb();
  compute_reduced_costs(cost_, d_);

  const bool dual_ok = make_dual_feasible();
  compute_xb(); // bound flips move nonbasic values
  if (dual_ok) return dual_simplex();

  if (infeasibility() > kFeasTol) {
    Result r1 = primal_phase_one();
    if (r1.status != Status::Optimal) return r1;
  }
  compute_reduced_costs(cost_, d_);
  return primal(cost_, false, d_);
}

LpSolver::Result LpSolver::dual_simplex() {
  const int m = rows_;
  std::vector<double> rho(static_cast<size_t>(m));
  std::vector<double> w;
  std::vector<double> alpha(static_cast<size_t>(total_));

  for (long long iter = 0; iter < kIterationLimit; ++iter) {
    // Leaving variable: worst primal bound violation.
    int r_out = -1;
    bool out_below = false;
    double worst = kFeasTol;
    for (int i = 0; i < m; ++i) {
      const int var = head_[static_cast<size_t>(i)];
      const double v = xb_[static_cast<size_t>(i)];
      const double lo = lo_[static_cast<size_t>(var)];
      const double hi = hi_[static_cast<size_t>(var)];
      double viol = 0.0;
      bool b = false;
      if (below(v, lo)) {
        viol = lo - v;
        b = true;
      } else if (above(v, hi)) {
        viol = v - hi;
      } else {
        continue;
      }
      if (viol > worst) {
        worst = viol;
        r_out = i;
        out_below = b;
      }
    }
    if (r_out < 0) {
      extract_solution();
      return {Status::Optimal, objective_value()};
    }

    const int leaving = head_[static_cast<size_t>(r_out)];
    const double* prow = binv_.data() + static_cast<size_t>(r_out) * m;
    for (int i = 0; i < m; ++i) rho[static_cast<size_t>(i)] = prow[i];

    // Entering variable: smallest dual ratio among sign-eligible nonbasics.
    int entering = -1;
    double best_ratio = kInfinity;
    double best_alpha = 0.0;
    for (int j = 0; j < total_; ++j) {
      const VStat st = vstat_[static_cast<size_t>(j)];
      if (st == VStat::Basic) continue;
      const double a = column_dot(j, rho);
      alpha[static_cast<size_t>(j)] = a;
      if (std::abs(a) <= kPivotTol) continue;
      bool eligible = false;
      if (out_below) {
        eligible = (st == VStat::AtLower && a < 0) || (st == VStat::AtUpper && a > 0) ||
                   st == VStat::FreeZero;
      } else {
        eligible = (st == VStat::AtLower && a > 0) || (st == VStat::AtUpper && a < 0) ||
                   st == VStat::FreeZero;
      }
      if (!eligible) continue;
      const double ratio = std::abs(d_[static_cast<size_t>(j)] / a);
      if (ratio < best_ratio - 1e-10 ||
          (ratio < best_ratio + 1e-10 && std::abs(a) > std::abs(best_alpha) + 1e-12)) {
        best_ratio = ratio;
        best_alpha = a;
        entering = j;
      }
    }
    if (entering < 0) return {Status::Infeasible, 0.0}; // dual unbounded

    const double a_e = alpha[static_cast<size_t>(entering)];
    const double target = out_below ? lo_[static_cast<size_t>(leaving)]
                                    : hi_[static_cast<size_t>(leaving)];
    const double delta = (xb_[static_cast<size_t>(r_out)] - target) / a_e;
    const double new_value = nonbasic_value(entering) + delta;

    ftran(entering, w);
    if (std::abs(w[static_cast<size_t>(r_out)]) <= kPivotTol) {
      // Numerically hopeless pivot; refactorize and retry once, otherwise bail
      // to the primal path.
      if (!factorize()) reset_to_slack_basis();
      compute_xb();
      compute_reduced_costs(cost_, d_);
      if (infeasibility() > kFeasTol) {
        Result r1 = primal_phase_one();
        if (r1.status != Status::Optimal) return r1;
        compute_reduced_costs(cost_, d_);
      }
      return primal(cost_, false, d_);
    }

    // Reduced-cost update: d_j -= theta * alpha_j, leaving picks up -theta.
    const double theta = d_[static_cast<size_t>(entering)] / a_e;
    for (int j = 0; j < total_; ++j) {
      if (vstat_[static_cast<size_t>(j)] == VStat::Basic) continue;
      if (j == entering) continue;
      d_[static_cast<size_t>(j)] -= theta * alpha[static_cast<size_t>(j)];
    }
    d_[static_cast<size_t>(entering)] = 0.0;

    for (int i = 0; i < m; ++i)
      if (i != r_out) xb_[static_cast<size_t>(i)] -= w[static_cast<size_t>(i)] * delta;
    apply_pivot(r_out, entering, w);
    xb_[static_cast<size_t>(r_out)] = new_value;
    vstat_[static_cast<size_t>(leaving)] = out_below ? VStat::AtLower : VStat::AtUpper;
    d_[static_cast<size_t>(leaving)] = -theta;

    if (pivots_since_factor_ >= kRefactorInterval) {
      if (!factorize()) reset_to_slack_basis();
      compute_xb();
      compute_reduced_costs(cost_, d_);
    }
  }
  return {Status::IterLimit, 0.0};
}

LpSolver::Result LpSolver::primal_phase_one() {
  std::vector<double> d1;
  return primal(cost_, true, d1);
}

// One primal simplex run. In phase one the cost vector penalizes bound
// violations of the current basics (+1 above, -1 below) and is re-derived at
// the top of every iteration; the `cost` argument is only read in phase two.
LpSolver::Result LpSolver::primal(const std::vector<double>& cost, bool phase_one,
                                  std::vector<double>& d) {
  const int m = rows_;
  std::vector<double> w;
  std::vector<double> c1;
  if (phase_one) c1.assign(static_cast<size_t>(total_), 0.0);
  long long stalled = 0;

  for (long long iter = 0; iter < kIterationLimit; ++iter) {
    if (phase_one) {
      if (infeasibility() <= kFeasTol) return {Status::Optimal, 0.0};
      std::fill(c1.begin(), c1.end(), 0.0);
      for (int i = 0; i < m; ++i) {
        const int var = head_[static_cast<size_t>(i)];
        const double v = xb_[static_cast<size_t>(i)];
        if (below(v, lo_[static_cast<size_t>(var)]))
          c1[static_cast<size_t>(var)] = -1.0;
        else if (above(v, hi_[static_cast<size_t>(var)]))
          c1[static_cast<size_t>(var)] = 1.0;
      }
      compute_reduced_costs(c1, d);
    } else {
      compute_reduced_costs(cost, d);
    }
    const bool bland = stalled > 500;

    int entering = -1;
    int dir = +1;
    double best_score = kDualTol;
    for (int j = 0; j < total_; ++j) {
      const VStat st = vstat_[static_cast<size_t>(j)];
      if (st == VStat::Basic) continue;
      const double dj = d[static_cast<size_t>(j)];
      int cand_dir = 0;
      if ((st == VStat::AtLower || st == VStat::FreeZero) && dj < -best_score) cand_dir = +1;
      else if ((st == VStat::AtUpper || st == VStat::FreeZero) && dj > best_score) cand_dir = -1;
      if (cand_dir == 0) continue;
      entering = j;
      dir = cand_dir;
      if (bland) break;
      best_score = std::abs(dj);
    }
    if (entering < 0) {
      // No improving direction. In phase one we only get here while still
      // infeasible (the feasible case returns at the top), so the LP has none.
      if (phase_one) return {Status::Infeasible, 0.0};
      extract_solution();
      return {Status::Optimal, objective_value()};
    }

    ftran(entering, w);

    double flip_limit = kInfinity;
    if (std::isfinite(lo_[static_cast<size_t>(entering)]) &&
        std::isfinite(hi_[static_cast<size_t>(entering)]))
      flip_limit = hi_[static_cast<size_t>(entering)] - lo_[static_cast<size_t>(entering)];

    int blocking = -1;
    bool block_at_lower = false;
    double best_t = flip_limit;
    for (int i = 0; i < m; ++i) {
      const double g = -dir * w[static_cast<size_t>(i)]; // d xb[i] / d t
      if (std::abs(g) <= kPivotTol) continue;
      const int var = head_[static_cast<size_t>(i)];
      const double v = xb_[static_cast<size_t>(i)];
      const double lo = lo_[static_cast<size_t>(var)];
      const double hi = hi_[static_cast<size_t>(var)];
      double limit = kInfinity;
      bool at_lower = false;
      if (phase_one && below(v, lo)) {
        if (g > 0) { limit = (lo - v) / g; at_lower = true; }
      } else if (phase_one && above(v, hi)) {
        if (g < 0) { limit = (v - hi) / (-g); at_lower = false; }
      } else {
        if (g > 0 && std::isfinite(hi)) { limit = (hi - v) / g; at_lower = false; }
        else if (g < 0 && std::isfinite(lo)) { limit = (v - lo) / (-g); at_lower = true; }
      }
      if (limit == kInfinity) continue;
      limit = std::max(limit, 0.0);
      if (limit < best_t - 1e-10 ||
          (limit < best_t + 1e-10 && blocking >= 0 &&
           var < head_[static_cast<size_t>(blocking)])) {
        best_t = limit;
        blocking = i;
        block_at_lower = at_lower;
      }
    }

    if (best_t == kInfinity)
      return {phase_one ? Status::IterLimit : Status::Unbounded, 0.0};

    if (best_t <= 1e-10) ++stalled; else stalled = 0;

    if (blocking < 0) {
      // Bound flip: entering jumps to its opposite bound.
      for (int i = 0; i < m; ++i)
        xb_[static_cast<size_t>(i)] -= dir * best_t * w[static_cast<size_t>(i)];
      vstat_[static_cast<size_t>(entering)] =
          dir > 0 ? VStat::AtUpper : VStat::AtLower;
    } else {
      const double new_value = nonbasic_value(entering) + dir * best_t;
      const int leaving = head_[static_cast<size_t>(blocking)];
      for (int i = 0; i < m; ++i)
        if (i != blocking) xb_[static_cast<size_t>(i)] -= dir * best_t * w[static_cast<size_t>(i)];
      apply_pivot(blocking, entering, w);
      xb_[static_cast<size_t>(blocking)] = new_value;
      vstat_[static_cast<size_t>(leaving)] = block_at_lower ? VStat::AtLower : VStat::AtUpper;
      if (pivots_since_factor_ >= kRefactorInterval) {
        if (!factorize()) reset_to_slack_basis();
        compute_xb();
      }
    }
  }
  return {Status::IterLimit, 0.0};
}

void LpSolver::extract_solution() {
  for (int j = 0; j < structurals_; ++j)
    if (vstat_[static_cast<size_t>(j)] != VStat::Basic)
      solution_[static_cast<size_t>(j)] = nonbasic_value(j);
  for (int i = 0; i < rows_; ++i) {
    const int var = head_[static_cast<size_t>(i)];
    if (var < structurals_) solution_[static_cast<size_t>(var)] = xb_[static_cast<size_t>(i)];
  }
}

double LpSolver::objective_value() const {
  double obj = 0.0;
  for (int j = 0; j < structurals_; ++j)
    obj += cost_[static_cast<size_t>(j)] * solution_[static_cast<size_t>(j)];
  return maximize_ ? -obj : obj;
}

} // namespace cellform::milp
