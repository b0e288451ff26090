#include "cellform/milp/model.hpp"
#include "cellform/milp/simplex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cellform::milp {

namespace {

constexpr double kIntTol = 1e-9;

struct LinVar {
  int var = -1;
  int parent_a = -1;
  int parent_b = -1;
  double obj_coeff = 0.0;
};

bool integral_kind(VarKind kind) { return kind != VarKind::Continuous; }

bool is_binary_like(const Variable& v) {
  return integral_kind(v.kind) && std::abs(v.lb) <= kIntTol &&
         std::abs(v.ub - 1.0) <= kIntTol;
}

std::vector<double> accumulated_objective(const Model& model) {
  std::vector<double> c(static_cast<size_t>(model.var_count()), 0.0);
  for (const auto& term : model.objective) c[static_cast<size_t>(term.var)] += term.coeff;
  return c;
}

// Rows of the shape v - x <= 0 (or x - v >= 0) with x binary mark v as the
// linearized product of the two x it is tied to. A qualifying v is continuous,
// has lower bound zero, and appears in exactly two such rows and nowhere else.
std::vector<LinVar> detect_linearization_vars(const Model& model) {
  const int n = model.var_count();
  std::vector<std::vector<int>> incidence(static_cast<size_t>(n));
  std::vector<std::map<int, double>> row_terms(model.constraints.size());
  for (size_t r = 0; r < model.constraints.size(); ++r) {
    for (const auto& term : model.constraints[r].terms)
      row_terms[r][term.var] += term.coeff;
    for (const auto& [var, coeff] : row_terms[r])
      if (coeff != 0.0) incidence[static_cast<size_t>(var)].push_back(static_cast<int>(r));
  }
  const auto obj = accumulated_objective(model);

  // Returns the binary partner if row r caps `v` by a single binary variable.
  auto parent_in_row = [&](int r, int v) -> int {
    const auto& c = model.constraints[static_cast<size_t>(r)];
    const auto& acc = row_terms[static_cast<size_t>(r)];
    if (std::abs(c.rhs) > kIntTol) return -1;
    if (acc.size() != 2) return -1;
    int other = -1;
    double cv = 0.0, co = 0.0;
    for (const auto& [var, coeff] : acc) {
      if (var == v) cv = coeff;
      else { other = var; co = coeff; }
    }
    if (other < 0) return -1;
    if (!is_binary_like(model.variables[static_cast<size_t>(other)])) return -1;
    const bool le_form = c.rel == Relation::LessEq && std::abs(cv - 1.0) <= kIntTol &&
                         std::abs(co + 1.0) <= kIntTol;
    const bool ge_form = c.rel == Relation::GreaterEq && std::abs(cv + 1.0) <= kIntTol &&
                         std::abs(co - 1.0) <= kIntTol;
    return (le_form || ge_form) ? other : -1;
  };

  std::vector<LinVar> out;
  for (int v = 0; v < n; ++v) {
    const auto& var = model.variables[static_cast<size_t>(v)];
    if (var.kind != VarKind::Continuous) continue;
    if (std::abs(var.lb) > kIntTol || var.ub < -kIntTol) continue;
    const auto& rows = incidence[static_cast<size_t>(v)];
    if (rows.size() != 2) continue;
    const int pa = parent_in_row(rows[0], v);
    const int pb = parent_in_row(rows[1], v);
    if (pa < 0 || pb < 0) continue;
    out.push_back({v, std::min(pa, pb), std::max(pa, pb), obj[static_cast<size_t>(v)]});
  }
  return out;
}

// Groups of binary variables of which at most one can be 1 in any
// integer-feasible point, read off rows of the shape
//   sum x <= 1, sum x = 1, or sum x - y <= 0 / = 0 with unit coefficients.
std::vector<std::vector<int>> detect_binary_cliques(const Model& model) {
  std::vector<std::vector<int>> cliques;
  for (const auto& c : model.constraints) {
    std::map<int, double> acc;
    for (const auto& term : c.terms) acc[term.var] += term.coeff;
    std::vector<int> plus;
    int minus = -1;
    bool ok = acc.size() >= 2;
    for (const auto& [var, coeff] : acc) {
      if (!is_binary_like(model.variables[static_cast<size_t>(var)])) { ok = false; break; }
      if (std::abs(coeff - 1.0) <= kIntTol) plus.push_back(var);
      else if (std::abs(coeff + 1.0) <= kIntTol && minus < 0) minus = var;
      else { ok = false; break; }
    }
    if (!ok || plus.size() < 2) continue;
    if (c.rel == Relation::GreaterEq) continue;
    const bool plain = minus < 0 && std::abs(c.rhs - 1.0) <= kIntTol;
    const bool gated = minus >= 0 && std::abs(c.rhs) <= kIntTol;
    if (!plain && !gated) continue;
    cliques.push_back(std::move(plus));
  }
  return cliques;
}

// For every group of product variables sharing a parent x whose other parents
// all lie in one clique, at most one of those other parents is 1, so at most
// one member of the group can be positive and each is capped by x. The row
// sum v - x <= 0 is therefore satisfied by every integer-feasible point; it
// only tightens the relaxation.
std::vector<Constraint> derive_aggregation_rows(const Model& model,
                                                const std::vector<LinVar>& linvars) {
  if (linvars.empty()) return {};
  const auto cliques = detect_binary_cliques(model);
  if (cliques.empty()) return {};

  std::map<int, std::vector<std::pair<int, int>>> by_parent; // parent -> (v, partner)
  for (const auto& lv : linvars) {
    by_parent[lv.parent_a].push_back({lv.var, lv.parent_b});
    if (lv.parent_b != lv.parent_a)
      by_parent[lv.parent_b].push_back({lv.var, lv.parent_a});
  }

  std::vector<Constraint> rows;
  std::set<std::pair<int, std::vector<int>>> seen;
  int counter = 0;
  for (const auto& clique : cliques) {
    const std::set<int> members(clique.begin(), clique.end());
    for (const auto& [parent, group] : by_parent) {
      std::vector<int> vs;
      for (const auto& [v, partner] : group)
        if (members.count(partner)) vs.push_back(v);
      if (vs.size() < 2) continue;
      std::sort(vs.begin(), vs.end());
      vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
      if (vs.size() < 2) continue;
      if (!seen.insert({parent, vs}).second) continue;
      Constraint row;
      row.name = "product-group#" + std::to_string(counter++);
      for (int v : vs) row.terms.push_back({v, 1.0});
      row.terms.push_back({parent, -1.0});
      row.rel = Relation::LessEq;
      row.rhs = 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void require_well_formed(const Model& model) {
  const auto problems = model.problems();
  if (problems.empty()) return;
  std::ostringstream msg;
  msg << "model is not well formed:";
  for (const auto& p : problems) msg << "\n  " << p;
  throw std::invalid_argument(msg.str());
}

bool is_near_integer(double v) { return std::abs(v - std::round(v)) <= 1e-9; }

// True when every attainable objective value is an integer multiple of 1, in
// which case a fractional relaxation bound can be rounded to the nearest
// admissible value before pruning.
bool objective_is_integral(const Model& model, const std::vector<double>& obj,
                           const std::vector<LinVar>& linvars) {
  if (!is_near_integer(model.objective_constant)) return false;
  std::set<int> lin;
  for (const auto& lv : linvars) lin.insert(lv.var);
  for (int j = 0; j < model.var_count(); ++j) {
    const double c = obj[static_cast<size_t>(j)];
    if (c == 0.0) continue;
    if (!is_near_integer(c)) return false;
    if (!integral_kind(model.variables[static_cast<size_t>(j)].kind) && !lin.count(j))
      return false;
  }
  return true;
}

// Product variables track min(parents) when the objective rewards pushing
// them up and sit at their lower bound otherwise.
bool pushes_up(Sense sense, double coeff) {
  return sense == Sense::Maximize ? coeff >= 0.0 : coeff <= 0.0;
}

double recompute_objective(const Model& model, const std::vector<double>& values) {
  double obj = model.objective_constant;
  for (const auto& term : model.objective)
    obj += term.coeff * values[static_cast<size_t>(term.var)];
  return obj;
}

void polish_values(const Model& model, const std::vector<LinVar>& linvars,
                   std::vector<double>& values) {
  for (int j = 0; j < model.var_count(); ++j)
    if (integral_kind(model.variables[static_cast<size_t>(j)].kind))
      values[static_cast<size_t>(j)] = std::round(values[static_cast<size_t>(j)]);
  for (const auto& lv : linvars) {
    if (pushes_up(model.sense, lv.obj_coeff))
      values[static_cast<size_t>(lv.var)] =
          std::min(values[static_cast<size_t>(lv.parent_a)],
                   values[static_cast<size_t>(lv.parent_b)]);
    else
      values[static_cast<size_t>(lv.var)] = model.variables[static_cast<size_t>(lv.var)].lb;
  }
}

} // namespace

MilpSolution solve_bb(const Model& model, const SolverOptions& options) {
  require_well_formed(model);
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const bool maximize = model.sense == Sense::Maximize;
  const double tol = options.tolerance;
  const double worst = maximize ? -kInfinity : kInfinity;
  const auto better_bound = [&](double a, double b) {
    return maximize ? std::max(a, b) : std::min(a, b);
  };

  const auto obj = accumulated_objective(model);
  const auto linvars = detect_linearization_vars(model);
  const auto extra = derive_aggregation_rows(model, linvars);
  const bool integral_obj = objective_is_integral(model, obj, linvars);
  const auto admissible = [&](double raw) {
    if (!integral_obj || !std::isfinite(raw)) return raw;
    return maximize ? std::floor(raw + 1e-6) : std::ceil(raw - 1e-6);
  };

  LpSolver lp(model, extra);

  std::vector<int> int_vars;
  for (int j = 0; j < model.var_count(); ++j)
    if (model.is_integral_kind(j)) int_vars.push_back(j);

  long long nodes = 0;
  bool aborted = false;
  bool unbounded = false;
  double frontier = worst;
  std::vector<double> best_values;
  bool have_incumbent = false;
  double best_obj = worst;

  const auto log = [&](long long node, int depth, double raw, double adm,
                       NodeLogEntry::Action action, int branch_var) {
    if (options.node_log)
      options.node_log->push_back({node, depth, raw, adm, action, branch_var});
  };

  std::function<void(int, double)> dive = [&](int depth, double parent_bound) {
    if (unbounded) return;
    if (aborted) {
      frontier = better_bound(frontier, parent_bound);
      return;
    }
    if ((options.node_limit && nodes >= *options.node_limit) ||
        (options.time_limit_sec && elapsed() >= *options.time_limit_sec)) {
      aborted = true;
      frontier = better_bound(frontier, parent_bound);
      log(nodes, depth, parent_bound, parent_bound, NodeLogEntry::Action::Limit, -1);
      return;
    }
    const long long node_id = ++nodes;

    const auto res = lp.optimize();
    if (res.status == LpSolver::Status::Infeasible) {
      log(node_id, depth, std::numeric_limits<double>::quiet_NaN(),
          std::numeric_limits<double>::quiet_NaN(), NodeLogEntry::Action::PrunedInfeasible, -1);
      return;
    }
    if (res.status == LpSolver::Status::IterLimit)
      throw std::runtime_error("simplex iteration limit hit; relaxation did not converge");
    if (res.status == LpSolver::Status::Unbounded) {
      unbounded = true;
      return;
    }

    const double raw = res.objective + model.objective_constant;
    const double adm = admissible(raw);
    if (have_incumbent &&
        (maximize ? adm <= best_obj + tol : adm >= best_obj - tol)) {
      log(node_id, depth, raw, adm, NodeLogEntry::Action::PrunedByBound, -1);
      return;
    }

    const auto& vals = lp.values();
    int branch_var = -1;
    double branch_val = 0.0;
    double best_frac = tol;
    for (int j : int_vars) {
      const double v = vals[static_cast<size_t>(j)];
      const double frac = std::abs(v - std::round(v));
      if (frac <= tol) continue;
      if (options.branching == BranchRule::FirstFractional) {
        branch_var = j;
        branch_val = v;
        break;
      }
      if (frac > best_frac) {
        best_frac = frac;
        branch_var = j;
        branch_val = v;
      }
    }

    if (branch_var < 0) {
      if (!have_incumbent ||
          (maximize ? raw > best_obj + tol : raw < best_obj - tol)) {
        have_incumbent = true;
        best_obj = raw;
        best_values = vals;
      }
      log(node_id, depth, raw, adm, NodeLogEntry::Action::Integral, -1);
      return;
    }

    log(node_id, depth, raw, adm, NodeLogEntry::Action::Branched, branch_var);
    const double lo = lp.lower_bound(branch_var);
    const double hi = lp.upper_bound(branch_var);
    const double down = std::floor(branch_val);
    const double up = down + 1.0;

    const auto explore = [&](double child_lo, double child_hi) {
      lp.set_bounds(branch_var, child_lo, child_hi);
      dive(depth + 1, adm);
      lp.set_bounds(branch_var, lo, hi);
    };
    if (maximize) {
      explore(up, hi);
      explore(lo, down);
    } else {
      explore(lo, down);
      explore(up, hi);
    }
  };

  dive(0, maximize ? kInfinity : -kInfinity);

  MilpSolution out;
  out.certificate.node_count = nodes;
  out.certificate.wall_time_sec = elapsed();

  if (unbounded) {
    out.status = SolveStatus::Unbounded;
    out.objective_value = maximize ? kInfinity : -kInfinity;
    out.certificate.best_bound = out.objective_value;
    return out;
  }
  if (have_incumbent) {
    polish_values(model, linvars, best_values);
    out.values = std::move(best_values);
    out.objective_value = recompute_objective(model, out.values);
    out.status = aborted ? SolveStatus::LimitReached : SolveStatus::Optimal;
    out.certificate.best_bound =
        aborted ? better_bound(frontier, out.objective_value) : out.objective_value;
    return out;
  }
  if (aborted) {
    out.status = SolveStatus::LimitReached;
    out.objective_value = std::numeric_limits<double>::quiet_NaN();
    out.certificate.best_bound = frontier;
    return out;
  }
  out.status = SolveStatus::Infeasible;
  out.objective_value = std::numeric_limits<double>::quiet_NaN();
  out.certificate.best_bound = worst;
  return out;
}

double relaxation_bound(const Model& model) {
  require_well_formed(model);
  const bool maximize = model.sense == Sense::Maximize;
  const auto linvars = detect_linearization_vars(model);
  const auto extra = derive_aggregation_rows(model, linvars);
  LpSolver lp(model, extra);
  const auto res = lp.optimize();
  switch (res.status) {
    case LpSolver::Status::Optimal:
      return res.objective + model.objective_constant;
    case LpSolver::Status::Unbounded:
      return maximize ? kInfinity : -kInfinity;
    case LpSolver::Status::Infeasible:
      return maximize ? -kInfinity : kInfinity;
    case LpSolver::Status::IterLimit:
      break;
  }
  throw std::runtime_error("simplex iteration limit hit; relaxation did not converge");
}

MilpSolution brute_force_model(const Model& model, long long guard) {
  require_well_formed(model);
  const auto start = std::chrono::steady_clock::now();
  const bool maximize = model.sense == Sense::Maximize;

  const auto linvars = detect_linearization_vars(model);
  std::vector<int> lin_index(static_cast<size_t>(model.var_count()), -1);
  for (size_t i = 0; i < linvars.size(); ++i)
    lin_index[static_cast<size_t>(linvars[i].var)] = static_cast<int>(i);

  struct IntVar {
    int var;
    long long lo;
    long long hi;
  };
  std::vector<IntVar> ints;
  bool empty_domain = false;
  for (int j = 0; j < model.var_count(); ++j) {
    const auto& v = model.variables[static_cast<size_t>(j)];
    if (integral_kind(v.kind)) {
      const long long lo = static_cast<long long>(std::ceil(v.lb - 1e-9));
      const long long hi = static_cast<long long>(std::floor(v.ub + 1e-9));
      if (lo > hi) empty_domain = true;
      ints.push_back({j, lo, hi});
    } else if (lin_index[static_cast<size_t>(j)] < 0) {
      throw std::invalid_argument(
          "variable '" + v.name +
          "' is continuous but not a linearized product; exhaustive enumeration "
          "cannot handle it");
    }
  }

  MilpSolution out;
  const auto finish = [&] {
    out.certificate.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  if (empty_domain) {
    out.status = SolveStatus::Infeasible;
    out.objective_value = std::numeric_limits<double>::quiet_NaN();
    out.certificate.best_bound = maximize ? -kInfinity : kInfinity;
    out.certificate.node_count = 0;
    finish();
    return out;
  }

  long double total_ld = 1.0L;
  for (const auto& iv : ints) total_ld *= static_cast<long double>(iv.hi - iv.lo + 1);
  if (total_ld > static_cast<long double>(guard)) {
    const long long clamped =
        total_ld > 9e18L ? std::numeric_limits<long long>::max()
                         : static_cast<long long>(total_ld);
    throw GuardExceeded(clamped, guard);
  }

  std::vector<double> values(static_cast<size_t>(model.var_count()), 0.0);
  std::vector<long long> cursor(ints.size());
  for (size_t i = 0; i < ints.size(); ++i) {
    cursor[i] = ints[i].lo;
    values[static_cast<size_t>(ints[i].var)] = static_cast<double>(ints[i].lo);
  }

  std::vector<std::pair<std::vector<Term>, std::pair<Relation, double>>> rows;
  rows.reserve(model.constraints.size());
  for (const auto& c : model.constraints) rows.push_back({c.terms, {c.rel, c.rhs}});

  bool found = false;
  double best = maximize ? -kInfinity : kInfinity;
  std::vector<double> best_values;
  long long leaves = 0;

  while (true) {
    ++leaves;
    for (const auto& lv : linvars)
      values[static_cast<size_t>(lv.var)] =
          pushes_up(model.sense, lv.obj_coeff)
              ? std::min(values[static_cast<size_t>(lv.parent_a)],
                         values[static_cast<size_t>(lv.parent_b)])
              : model.variables[static_cast<size_t>(lv.var)].lb;

    bool feasible = true;
    for (const auto& [terms, reln] : rows) {
      double sum = 0.0;
      for (const auto& term : terms) sum += term.coeff * values[static_cast<size_t>(term.var)];
      const auto [rel, rhs] = reln;
      if (rel == Relation::LessEq && sum > rhs + 1e-6) { feasible = false; break; }
      if (rel == Relation::GreaterEq && sum < rhs - 1e-6) { feasible = false; break; }
      if (rel == Relation::Equal && std::abs(sum - rhs) > 1e-6) { feasible = false; break; }
    }
    if (feasible) {
      const double obj = recompute_objective(model, values);
      if (!found || (maximize ? obj > best : obj < best)) {
        found = true;
        best = obj;
        best_values = values;
      }
    }

    size_t k = ints.size();
    while (k > 0) {
      --k;
      if (cursor[k] < ints[k].hi) {
        ++cursor[k];
        values[static_cast<size_t>(ints[k].var)] = static_cast<double>(cursor[k]);
        break;
      }
      cursor[k] = ints[k].lo;
      values[static_cast<size_t>(ints[k].var)] = static_cast<double>(cursor[k]);
      if (k == 0) { k = ints.size() + 1; break; }
    }
    if (ints.empty() || k == ints.size() + 1) break;
  }

  out.certificate.node_count = leaves;
  if (found) {
    out.status = SolveStatus::Optimal;
    out.values = std::move(best_values);
    out.objective_value = best;
    out.certificate.best_bound = best;
  } else {
    out.status = SolveStatus::Infeasible;
    out.objective_value = std::numeric_limits<double>::quiet_NaN();
    out.certificate.best_bound = maximize ? -kInfinity : kInfinity;
  }
  finish();
  return out;
}

} // namespace cellform::milp
