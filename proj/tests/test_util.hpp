#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cellform/formulations.hpp"
#include "cellform/instance.hpp"

namespace testutil {

/// Seed for every random-instance test; override with CELLFORM_SEED.
inline unsigned test_seed() {
  if (const char* env = std::getenv("CELLFORM_SEED")) {
    return static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  }
  return 20260814u;
}

inline cellform::Instance load_fixture() {
  const std::string path = std::string(CELLFORM_DATA_DIR) + "/fixture.json";
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return cellform::parse_instance(buffer.str());
}

/// Count the points an exhaustive sweep of the integral variables visits.
inline long double domain_product(const cellform::milp::Model& model) {
  long double product = 1.0L;
  for (const auto& v : model.variables) {
    if (v.kind == cellform::milp::VarKind::Continuous) continue;
    const double lo = std::ceil(v.lb - 1e-9);
    const double hi = std::floor(v.ub + 1e-9);
    product *= std::max(hi - lo + 1.0, 0.0);
  }
  return product;
}

/// Random instance small enough that every formulation build stays within
/// `cap` enumeration points, so the exhaustive engines finish quickly.
/// Machines always carry availability and both cost figures, making the
/// instance usable for every formulation kind.
inline cellform::Instance random_instance(std::mt19937& rng,
                                          long double cap = 2.0e6L) {
  using namespace cellform;
  auto pick = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  while (true) {
    Instance inst;
    const int machine_count = pick(1, 3);
    for (int m = 1; m <= machine_count; ++m) {
      MachineType mt;
      mt.id = m;
      mt.capacity = 20.0 * pick(2, 6);
      mt.available_copies = pick(1, 2);
      mt.invest_cost = 50.0 * pick(1, 6);
      mt.amortized_cost = 50.0 * pick(1, 6);
      inst.machines.push_back(mt);
    }
    inst.cells.count = pick(1, 2);
    inst.cells.min_per_cell =
        std::vector<int>(static_cast<size_t>(inst.cells.count), pick(0, 1));
    if (pick(0, 3) > 0) {
      inst.cells.max_per_cell =
          std::vector<int>(static_cast<size_t>(inst.cells.count), pick(2, 3));
    }

    const int part_count = pick(1, 3);
    for (int k = 1; k <= part_count; ++k) {
      Part part;
      part.id = k;
      part.demand = pick(1, 6);
      const int plan_count = pick(1, 2);
      for (int p = 1; p <= plan_count; ++p) {
        ProcessPlan plan;
        plan.id = p;
        plan.sequence = pick(0, 4) == 0 ? SequenceMode::Unordered : SequenceMode::Strict;
        const int op_count = pick(1, plan_count == 2 ? 2 : 3);
        for (int s = 1; s <= op_count; ++s) {
          OperationSpec op;
          op.id = s;
          const int elig_count = pick(1, std::min(2, machine_count));
          std::vector<int> ids(static_cast<size_t>(machine_count));
          for (int m = 0; m < machine_count; ++m) ids[static_cast<size_t>(m)] = m + 1;
          std::shuffle(ids.begin(), ids.end(), rng);
          for (int e = 0; e < elig_count; ++e) {
            Eligibility elig;
            elig.machine = ids[static_cast<size_t>(e)];
            elig.time = pick(1, 6);
            elig.op_cost = pick(0, 9);
            op.eligibilities.push_back(elig);
          }
          plan.operations.push_back(std::move(op));
        }
        part.plans.push_back(std::move(plan));
      }
      inst.parts.push_back(std::move(part));
    }

    if (!validate_instance(inst).clean()) continue;
    bool small_enough = true;
    try {
      for (FormulationKind kind :
           {FormulationKind::I, FormulationKind::II, FormulationKind::III,
            FormulationKind::IV, FormulationKind::Phase1}) {
        BuiltFormulation built = build_formulation(inst, kind, {});
        if (domain_product(built.model) > cap) {
          small_enough = false;
          break;
        }
      }
    } catch (const std::exception&) {
      continue;
    }
    if (small_enough) return inst;
  }
}

} // namespace testutil
