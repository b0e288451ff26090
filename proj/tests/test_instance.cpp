#include "doctest.h"

#include <numeric>

#include "cellform/instance.hpp"
#include "test_util.hpp"

using namespace cellform;

TEST_CASE("fixture parses, validates, and counts out") {
  const Instance inst = testutil::load_fixture();
  CHECK(validate_instance(inst).clean());
  CHECK(inst.machine_count() == 3);
  CHECK(inst.part_count() == 4);

  const InstanceStats stats = derived_stats(inst);
  const int total_plans =
      std::accumulate(stats.plans_per_part.begin(), stats.plans_per_part.end(), 0);
  CHECK(total_plans == 9);
  CHECK(stats.total_operations == 21);
  CHECK(stats.total_pairs == 12);
  CHECK(stats.total_eligibilities == 42);
  CHECK(stats.distinct_operations == 3);

  // every operation in the study offers exactly two machines
  for (const PlanStats& plan : stats.plans) {
    CHECK(plan.op_count == static_cast<int>(plan.eligible_counts.size()));
    CHECK(plan.pair_count == plan.op_count - 1);
    for (int count : plan.eligible_counts) CHECK(count == 2);
    CHECK_FALSE(plan.fixed_route);
  }
}

TEST_CASE("consecutive pairs per sequence mode") {
  ProcessPlan plan;
  plan.id = 1;
  for (int s : {1, 2, 3}) {
    OperationSpec op;
    op.id = s;
    op.eligibilities.push_back({1, 1.0, 1.0});
    plan.operations.push_back(op);
  }

  SUBCASE("strict chains adjacent operations") {
    plan.sequence = SequenceMode::Strict;
    CHECK(consecutive_pairs(plan) == PairSet{{1, 2}, {2, 3}});
  }
  SUBCASE("unordered takes every distinct pair") {
    plan.sequence = SequenceMode::Unordered;
    CHECK(consecutive_pairs(plan) == PairSet{{1, 2}, {1, 3}, {2, 3}});
  }
  SUBCASE("explicit reads the successor map") {
    plan.sequence = SequenceMode::Explicit;
    plan.successors[1] = {2, 3};
    CHECK(consecutive_pairs(plan) == PairSet{{1, 2}, {1, 3}});
  }
  SUBCASE("explicit edges are unordered and deduplicated") {
    plan.sequence = SequenceMode::Explicit;
    plan.successors[1] = {2};
    plan.successors[2] = {1, 3};
    CHECK(consecutive_pairs(plan) == PairSet{{1, 2}, {2, 3}});
  }
  SUBCASE("single operation has no pairs") {
    plan.sequence = SequenceMode::Strict;
    plan.operations.resize(1);
    CHECK(consecutive_pairs(plan).empty());
  }
}

TEST_CASE("parse rejects malformed documents with located errors") {
  auto message_of = [](const std::string& text) {
    try {
      parse_instance(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };

  CHECK(message_of("{").find("not valid JSON") != std::string::npos);
  CHECK(message_of("[]").find("top-level object") != std::string::npos);

  const std::string base = R"({
    "machines": [ { "id": 1, "capacity": 10 } ],
    "cells": { "count": 1 },
    "parts": [ { "id": 1, "demand": 1, "plans": [ { "id": 1, "operations": [
      { "id": 1, "eligible": [ { "machine": MACHINE, "time": 1, "cost": 1 } ] }
    ] } ] } ]
  })";
  auto with_machine = [&](const std::string& machine) {
    std::string text = base;
    text.replace(text.find("MACHINE"), 7, machine);
    return text;
  };
  CHECK(message_of(with_machine("7")).find("does not exist") != std::string::npos);
  CHECK(parse_instance(with_machine("1")).parts.size() == 1);

  std::string unknown = with_machine("1");
  unknown.replace(unknown.find("\"cells\""), 7, "\"cellz\"");
  CHECK(message_of(unknown).find("unknown") != std::string::npos);
}

TEST_CASE("validation flags value-level violations") {
  Instance inst = testutil::load_fixture();
  SUBCASE("clean instance has no issues") {
    CHECK(validate_instance(inst).issues.empty());
  }
  SUBCASE("nonpositive demand") {
    inst.parts[0].demand = 0;
    const auto report = validate_instance(inst);
    REQUIRE(report.issues.size() == 1);
    CHECK(report.issues[0].path == "parts[1].demand");
  }
  SUBCASE("empty eligibility list") {
    inst.parts[0].plans[0].operations[0].eligibilities.clear();
    CHECK_FALSE(validate_instance(inst).clean());
  }
  SUBCASE("inverted cell bounds") {
    inst.cells.min_per_cell = std::vector<int>{3, 3};
    const auto report = validate_instance(inst);
    REQUIRE_FALSE(report.clean());
    CHECK(report.issues[0].message.find("exceeds maximum") != std::string::npos);
  }
  SUBCASE("nonpositive processing time") {
    inst.parts[0].plans[0].operations[0].eligibilities[0].time = 0;
    CHECK_FALSE(validate_instance(inst).clean());
  }
  SUBCASE("negative machine cost") {
    inst.machines[0].invest_cost = -5;
    CHECK_FALSE(validate_instance(inst).clean());
  }
}

TEST_CASE("render and parse round-trip") {
  const Instance inst = testutil::load_fixture();
  const std::string rendered = render_instance(inst);
  const Instance again = parse_instance(rendered);
  CHECK(render_instance(again) == rendered);
  CHECK(derived_stats(again) == derived_stats(inst));
}

TEST_CASE("derived stats recount on random instances") {
  std::mt19937 rng(testutil::test_seed());
  for (int round = 0; round < 25; ++round) {
    const Instance inst = testutil::random_instance(rng);
    const InstanceStats stats = derived_stats(inst);

    long long ops = 0;
    long long pairs = 0;
    long long eligibilities = 0;
    for (const Part& part : inst.parts) {
      for (const ProcessPlan& plan : part.plans) {
        ops += plan.op_count();
        pairs += static_cast<long long>(consecutive_pairs(plan).size());
        for (const OperationSpec& op : plan.operations) {
          eligibilities += op.machine_count();
        }
      }
    }
    CHECK(stats.total_operations == ops);
    CHECK(stats.total_pairs == pairs);
    CHECK(stats.total_eligibilities == eligibilities);
    CHECK(stats.part_count == static_cast<int>(inst.parts.size()));

    const Instance again = parse_instance(render_instance(inst));
    CHECK(derived_stats(again) == stats);
  }
}
