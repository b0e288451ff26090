#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "cellform/analysis.hpp"
#include "cellform/formulations.hpp"
#include "cellform/instance.hpp"
#include "cellform/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitLimit = 4;
constexpr int kExitDisagree = 5;

/// Enumeration cap for the exhaustive engine; instances beyond desk scale
/// are out of its reach by design.
constexpr long long kOracleGuard = 500000000LL;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

cellform::Instance load_instance(const std::string& path) {
  return cellform::parse_instance(slurp(path));
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file '" + out_path + "'");
  out << text;
}

double now_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

struct SolveFlags {
  std::string file;
  std::string formulation;
  std::optional<int> cells;
  std::optional<int> min_per_cell;
  std::optional<int> max_per_cell;
  std::optional<double> budget_investment;
  std::optional<double> budget_operating;
  std::string weights;
  std::string engine = "bb";
  std::string format = "text";
  std::string out_path;
  int workers = 1;
};

cellform::FormulationOptions to_options(const SolveFlags& flags) {
  cellform::FormulationOptions opts;
  opts.cell_count = flags.cells;
  opts.min_per_cell = flags.min_per_cell;
  opts.max_per_cell = flags.max_per_cell;
  opts.investment_budget = flags.budget_investment;
  opts.operating_limit = flags.budget_operating;
  if (!flags.weights.empty()) {
    double wc = 0.0;
    double wm = 0.0;
    char extra = 0;
    if (std::sscanf(flags.weights.c_str(), "%lf,%lf%c", &wc, &wm, &extra) != 2) {
      throw std::invalid_argument("--weights expects two numbers 'wc,wm'");
    }
    opts.weight_same_cell = wc;
    opts.weight_same_machine = wm;
  }
  return opts;
}

int run_validate(const std::string& path) {
  const cellform::Instance inst = load_instance(path);
  const cellform::ValidationReport report = cellform::validate_instance(inst);
  if (report.clean()) {
    std::cout << "instance is valid (" << inst.part_count() << " parts, "
              << inst.machine_count() << " machine types)\n";
    return kExitOk;
  }
  std::cout << report.issues.size() << " validation issue(s):\n";
  for (const auto& issue : report.issues) {
    std::cout << "  " << issue.path << ": " << issue.message << "\n";
  }
  return kExitInvalid;
}

int run_solve(const SolveFlags& flags) {
  const cellform::Instance inst = load_instance(flags.file);
  const cellform::FormulationKind kind =
      cellform::formulation_kind_from_string(flags.formulation);
  const cellform::FormulationOptions opts = to_options(flags);
  cellform::BuiltFormulation built = cellform::build_formulation(inst, kind, opts);

  cellform::ReportInputs in;
  in.instance = &inst;
  in.config = built.config;
  in.engine = flags.engine;
  in.model_stats = cellform::measure(built.model);

  const bool run_bb = flags.engine == "bb" || flags.engine == "both";
  const bool run_oracle = flags.engine == "oracle" || flags.engine == "both";

  std::optional<cellform::milp::MilpSolution> bb;
  if (run_bb) {
    cellform::milp::SolverOptions sopts;
    sopts.workers = flags.workers;
    bb = cellform::milp::solve_bb(built.model, sopts);
  }
  std::optional<cellform::OracleResult> oracle;
  double oracle_time = 0.0;
  if (run_oracle) {
    const double t0 = now_seconds();
    oracle = cellform::semantic_oracle(inst, kind, opts, kOracleGuard);
    oracle_time = now_seconds() - t0;
  }

  int exit_code = kExitOk;
  std::optional<cellform::GroupingSolution> solution;

  if (run_bb) {
    in.status = bb->status;
    in.certificate = bb->certificate;
    switch (bb->status) {
      case cellform::milp::SolveStatus::Optimal:
        in.objective = bb->objective_value;
        solution = cellform::decode(*bb, built.index, inst);
        break;
      case cellform::milp::SolveStatus::Infeasible:
        exit_code = kExitInfeasible;
        break;
      case cellform::milp::SolveStatus::Unbounded:
      case cellform::milp::SolveStatus::LimitReached:
        exit_code = kExitLimit;
        break;
    }
  } else {
    in.status = oracle->status;
    cellform::milp::Certificate cert;
    cert.best_bound = oracle->objective;
    cert.node_count = oracle->leaf_count;
    cert.wall_time_sec = oracle_time;
    in.certificate = cert;
    if (oracle->status == cellform::milp::SolveStatus::Optimal) {
      in.objective = oracle->objective;
      solution = oracle->solution;
    } else {
      exit_code = kExitInfeasible;
    }
  }

  if (run_bb && run_oracle && exit_code != kExitLimit) {
    const bool bb_opt = bb->status == cellform::milp::SolveStatus::Optimal;
    const bool oracle_opt = oracle->status == cellform::milp::SolveStatus::Optimal;
    if (bb_opt != oracle_opt) {
      std::ostringstream note;
      note << "engines disagree on feasibility: bb " << to_string(bb->status)
           << ", oracle " << to_string(oracle->status);
      in.disagreements.push_back(note.str());
      exit_code = kExitDisagree;
    } else if (bb_opt && std::fabs(bb->objective_value - oracle->objective) > 1e-6) {
      std::ostringstream note;
      note << "engines disagree on the optimum: bb " << bb->objective_value
           << ", oracle " << oracle->objective;
      in.disagreements.push_back(note.str());
      exit_code = kExitDisagree;
    }
  }

  if (solution) {
    const cellform::FeasibilityReport check =
        cellform::verify_solution(*solution, inst, kind, opts);
    if (!check.clean()) {
      for (const auto& violation : check.violations) {
        in.disagreements.push_back("verification: " + violation.constraint + " " +
                                   violation.detail);
      }
      exit_code = kExitDisagree;
    } else if (in.objective &&
               std::fabs(check.objective - *in.objective) > 1e-6) {
      std::ostringstream note;
      note << "recomputed objective " << check.objective
           << " differs from the solver value " << *in.objective;
      in.disagreements.push_back(note.str());
      exit_code = kExitDisagree;
    }
    in.solution = &*solution;
  }

  const nlohmann::ordered_json report = cellform::solution_report(in);
  if (flags.format == "structured") {
    emit(report.dump(2) + "\n", flags.out_path);
  } else {
    emit(cellform::render_tables(report), flags.out_path);
  }
  return exit_code;
}

int run_stats(const std::string& path, const std::string& formulation,
              bool compare_rajamani) {
  const cellform::Instance inst = load_instance(path);
  const cellform::FormulationKind kind =
      cellform::formulation_kind_from_string(formulation);
  const cellform::ModelStats formula = cellform::formulation_stats(inst, kind);

  // The closed-form count for Formulation II includes the operating-cost cap
  // row, so the measured build gets one even when the instance sets no limit.
  cellform::FormulationOptions opts;
  if (kind == cellform::FormulationKind::II && !inst.budgets.operating_limit) {
    opts.operating_limit = 1e15;
  }
  const cellform::BuiltFormulation built = cellform::build_formulation(inst, kind, opts);
  const cellform::ModelStats measured = cellform::measure(built.model);

  auto line = [](const char* tag, const cellform::ModelStats& s) {
    std::cout << tag << ": binary " << s.binary_count << ", integer "
              << s.integer_count << ", continuous " << s.continuous_count
              << ", constraints " << s.constraint_count << "\n";
  };
  line(("formulation " + to_string(kind) + " (formula)").c_str(), formula);
  line(("formulation " + to_string(kind) + " (measured)").c_str(), measured);
  if (compare_rajamani) {
    line("rajamani-linearized (formula)", cellform::rajamani_stats(inst));
  }
  return kExitOk;
}

int run_tables(const std::string& path) {
  const nlohmann::ordered_json report = nlohmann::ordered_json::parse(slurp(path));
  std::cout << cellform::render_tables(report);
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"cellform: build, solve, and audit machine-cell formation models"};
  app.require_subcommand(1);

  std::string validate_file;
  CLI::App* validate = app.add_subcommand("validate", "check an instance file");
  validate->add_option("file", validate_file, "instance JSON")->required();

  SolveFlags flags;
  CLI::App* solve = app.add_subcommand("solve", "build and solve a formulation");
  solve->add_option("file", flags.file, "instance JSON")->required();
  solve->add_option("--formulation", flags.formulation, "I, II, III, IV, or phase1")
      ->required();
  solve->add_option("--cells", flags.cells, "number of cells");
  solve->add_option("--min-per-cell", flags.min_per_cell, "minimum machines per cell");
  solve->add_option("--max-per-cell", flags.max_per_cell, "maximum machines per cell");
  solve->add_option("--budget-investment", flags.budget_investment,
                    "investment budget B");
  solve->add_option("--budget-operating", flags.budget_operating,
                    "operating cost limit");
  solve->add_option("--weights", flags.weights,
                    "movement weights 'same_cell,same_machine'");
  solve->add_option("--engine", flags.engine, "bb, oracle, or both")
      ->check(CLI::IsMember({"bb", "oracle", "both"}));
  solve->add_option("--workers", flags.workers, "solver worker count")
      ->check(CLI::PositiveNumber);
  solve->add_option("--format", flags.format, "text or structured")
      ->check(CLI::IsMember({"text", "structured"}));
  solve->add_option("--out", flags.out_path, "write the report to a file");

  std::string stats_file;
  std::string stats_formulation = "II";
  bool compare_rajamani = false;
  CLI::App* stats = app.add_subcommand("stats", "print model size statistics");
  stats->add_option("file", stats_file, "instance JSON")->required();
  stats->add_option("--formulation", stats_formulation, "I, II, III, IV, or phase1");
  stats->add_flag("--compare-rajamani", compare_rajamani,
                  "also print the linearized comparison model counts");

  std::string tables_file;
  CLI::App* tables = app.add_subcommand("tables", "render a structured report");
  tables->add_option("report", tables_file, "structured report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (validate->parsed()) return run_validate(validate_file);
    if (solve->parsed()) return run_solve(flags);
    if (stats->parsed()) return run_stats(stats_file, stats_formulation, compare_rajamani);
    if (tables->parsed()) return run_tables(tables_file);
  } catch (const cellform::milp::GuardExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitLimit;
  } catch (const cellform::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitLimit;
  }
  return kExitInvalid;
}
