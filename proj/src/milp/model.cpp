#include "cellform/milp/model.hpp"

#include <cmath>
#include <ostream>
#include <set>

namespace cellform::milp {

int Model::add_binary(std::string name) {
  variables.push_back({std::move(name), VarKind::Binary, 0.0, 1.0});
  return var_count() - 1;
}

int Model::add_integer(std::string name, double lb, double ub) {
  variables.push_back({std::move(name), VarKind::Integer, lb, ub});
  return var_count() - 1;
}

int Model::add_continuous(std::string name, double lb, double ub) {
  variables.push_back({std::move(name), VarKind::Continuous, lb, ub});
  return var_count() - 1;
}

void Model::add_constraint(std::string name, LinearExpr terms, Relation rel, double rhs) {
  constraints.push_back({std::move(name), std::move(terms), rel, rhs});
}

void Model::add_objective_term(int var, double coeff) {
  objective.push_back({var, coeff});
}

namespace {

bool finite(double v) { return std::isfinite(v); }

void check_expr(const LinearExpr& expr, int var_count, const std::string& where,
                std::vector<std::string>& out) {
  for (const auto& term : expr) {
    if (term.var < 0 || term.var >= var_count)
      out.push_back(where + ": term references variable index " + std::to_string(term.var) +
                    " which does not exist");
    if (!finite(term.coeff))
      out.push_back(where + ": non-finite coefficient");
  }
}

} // namespace

std::vector<std::string> Model::problems() const {
  std::vector<std::string> out;
  std::set<std::string> names;
  for (const auto& v : variables) {
    if (!names.insert(v.name).second)
      out.push_back("variable \"" + v.name + "\": duplicate name");
    if (std::isnan(v.lb) || std::isnan(v.ub) || v.lb > v.ub)
      out.push_back("variable \"" + v.name + "\": empty or invalid bound range");
    if (v.kind == VarKind::Binary && (v.lb < -0.0 || v.ub > 1.0))
      out.push_back("variable \"" + v.name + "\": binary bounds outside [0,1]");
    if (v.kind != VarKind::Continuous && (!finite(v.lb) || !finite(v.ub)))
      out.push_back("variable \"" + v.name + "\": integral variables need finite bounds");
  }
  check_expr(objective, var_count(), "objective", out);
  if (!finite(objective_constant)) out.push_back("objective: non-finite constant");
  std::set<std::string> cnames;
  for (const auto& c : constraints) {
    if (!cnames.insert(c.name).second)
      out.push_back("constraint \"" + c.name + "\": duplicate name");
    check_expr(c.terms, var_count(), "constraint \"" + c.name + "\"", out);
    if (!finite(c.rhs))
      out.push_back("constraint \"" + c.name + "\": non-finite right-hand side");
  }
  return out;
}

namespace {

void write_expr(const LinearExpr& expr, const std::vector<Variable>& vars, std::ostream& out) {
  bool first = true;
  for (const auto& term : expr) {
    if (term.coeff == 0.0) continue;
    double c = term.coeff;
    if (first) {
      if (c < 0) out << "- ";
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    c = std::abs(c);
    if (c != 1.0) out << c << " ";
    out << vars[static_cast<size_t>(term.var)].name;
  }
  if (first) out << "0";
}

} // namespace

void write_lp(const Model& model, std::ostream& out) {
  out << (model.sense == Sense::Maximize ? "Maximize" : "Minimize") << "\n obj: ";
  write_expr(model.objective, model.variables, out);
  if (model.objective_constant != 0.0)
    out << (model.objective_constant > 0 ? " + " : " - ") << std::abs(model.objective_constant);
  out << "\nSubject To\n";
  for (const auto& c : model.constraints) {
    out << " " << c.name << ": ";
    write_expr(c.terms, model.variables, out);
    switch (c.rel) {
      case Relation::LessEq: out << " <= "; break;
      case Relation::Equal: out << " = "; break;
      case Relation::GreaterEq: out << " >= "; break;
    }
    out << c.rhs << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : model.variables) {
    if (v.kind == VarKind::Binary) continue;
    out << " ";
    if (std::isinf(v.lb))
      out << "-inf";
    else
      out << v.lb;
    out << " <= " << v.name << " <= ";
    if (std::isinf(v.ub))
      out << "+inf";
    else
      out << v.ub;
    out << "\n";
  }
  bool any_general = false;
  for (const auto& v : model.variables)
    if (v.kind == VarKind::Integer) {
      if (!any_general) out << "Generals\n";
      any_general = true;
      out << " " << v.name << "\n";
    }
  bool any_binary = false;
  for (const auto& v : model.variables)
    if (v.kind == VarKind::Binary) {
      if (!any_binary) out << "Binaries\n";
      any_binary = true;
      out << " " << v.name << "\n";
    }
  out << "End\n";
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::LimitReached: return "limit_reached";
  }
  return "unknown";
}

} // namespace cellform::milp
