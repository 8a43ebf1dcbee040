#include "doctest.h"

#include "copath/scoring.hpp"
#include "support.hpp"

using namespace copath;
using namespace copath::testing;

TEST_SUITE("scoring") {

TEST_CASE("threshold combiner passes or zeroes the interaction") {
  ThresholdCombiner c;  // window 8, floor 10
  CHECK(eval_f(c, -1000, 9, 50, 50) == 0);
  CHECK(eval_f(c, -5000, 2, 9, 50) == 0);
  CHECK(eval_f(c, -1000, 8, 10, 10) == -1000);
  CHECK(eval_f(c, 0, 1, 100, 100) == 0);

  SUBCASE("either amount below the floor zeroes it") {
    CHECK(eval_f(c, 7, 0, 50, 9) == 0);
    CHECK(eval_f(c, 7, 0, 9, 50) == 0);
    CHECK(eval_f(c, 7, 0, 10, 10) == 7);
  }
  SUBCASE("custom window") {
    ThresholdCombiner tight{2, 10};
    CHECK(eval_f(tight, -20, 2, 20, 20) == -20);
    CHECK(eval_f(tight, -20, 3, 20, 20) == 0);
  }
}

TEST_CASE("zero interaction always combines to zero") {
  for (std::int64_t w : {0, 3, 8})
    for (std::int64_t d : {0, 1, 8, 20})
      for (std::int64_t amt : {0, 10, 99}) CHECK(eval_f({w, 10}, 0, d, amt, amt) == 0);
}

TEST_CASE("severity tokens") {
  SeverityMap m;
  CHECK(severity_to_interaction(m, "minor") == -100);
  CHECK(severity_to_interaction(m, "moderate") == -1000);
  CHECK(severity_to_interaction(m, "major") == -5000);
  CHECK(severity_to_interaction(m, Severity::major) == -5000);
  CHECK_THROWS_AS(severity_to_interaction(m, "severe"), UnknownSeverity);
  CHECK_THROWS_AS(severity_to_interaction(m, "Minor"), UnknownSeverity);

  SeverityMap custom{-1, -2, -3};
  CHECK(severity_to_interaction(custom, "moderate") == -2);
}

TEST_CASE("interaction table is symmetric and rejects contradictions") {
  InteractionTable t;
  CHECK(t.set("b", "a", -7));
  CHECK(t.lookup("a", "b") == -7);
  CHECK(t.lookup("b", "a") == -7);
  CHECK(t.lookup("a", "c") == 0);
  CHECK(t.lookup("a", "a") == 0);

  CHECK(t.set("a", "b", -7));  // same value again is fine
  CHECK(t.conflicts().empty());
  CHECK_FALSE(t.set("a", "b", -8));
  REQUIRE(t.conflicts().size() == 1);
  CHECK(t.lookup("a", "b") == -7);
  CHECK(t.size() == 1);
}

TEST_CASE("objective of a hand-checked assignment") {
  Instance inst = tiny_plus();
  Assignment a{{"a", "c", "p", "q"},
               {{"a", 0}, {"c", 0}, {"p", 0}, {"q", 1}},
               {{"a", "r0"}, {"c", "r2"}, {"p", "r3"}, {"q", "r1"}}};
  ObjectiveBreakdown b = evaluate_objective(inst, a);
  CHECK(b.objective == -6);
  CHECK(b.effectiveness_total == 14);
  CHECK(b.interaction_total == -20);
  REQUIRE(b.conflicts.size() == 1);
  CHECK(b.conflicts[0] == ConflictRecord{"c", "p", "r2", "r3", 0, -20});
}

TEST_CASE("objective edge cases") {
  Instance inst = tiny();
  CHECK(evaluate_objective(inst, {}).objective == 0);
  CHECK(evaluate_objective(inst, {}).conflicts.empty());

  Assignment a{{"a", "b", "p", "q"},
               {{"a", 0}, {"b", 1}, {"p", 0}, {"q", 3}},
               {{"a", "r0"}, {"b", "r1"}, {"p", "r3"}, {"q", "r1"}}};
  CHECK(evaluate_objective(inst, a).interaction_total == 0);
  CHECK(evaluate_objective(inst, a).objective == 13);

  SUBCASE("missing clock") {
    Assignment bad = a;
    bad.clock.erase("b");
    CHECK_THROWS_AS(evaluate_objective(inst, bad), UnassignedNode);
  }
  SUBCASE("choice outside the options") {
    Assignment bad = a;
    bad.choice["b"] = "r2";
    CHECK_THROWS_AS(evaluate_objective(inst, bad), UnassignedNode);
  }
}

TEST_CASE("pairs inside one graph are never scored") {
  Instance inst = tiny();
  inst.interactions.set("r0", "r2", -50);  // a and c share graph G1
  auto all = oracle_solve(inst);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) CHECK(evaluate_objective(inst, random_assignment(inst, rng)).interaction_total == 0);
  CHECK(all.optimum == 14);
}

TEST_CASE("objective bounds") {
  CHECK(objective_bounds(tiny()).upper == 17);
  CHECK(objective_bounds(tiny()).lower == 0);
  CHECK(objective_bounds(tiny_plus()).lower == -30);

  Instance zero = tiny();
  for (auto& r : zero.resources) r.effectiveness = 0;
  CHECK(objective_bounds(zero).lower == 0);
  CHECK(objective_bounds(zero).upper == 0);
}

TEST_CASE("property: bounds bracket random feasible assignments") {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Instance inst = random_small_instance(seed);
    ObjectiveBounds b = objective_bounds(inst);
    for (int k = 0; k < 25; ++k) {
      Score v = evaluate_objective(inst, random_assignment(inst, rng)).objective;
      CHECK(b.lower <= v);
      CHECK(v <= b.upper);
    }
  }
}

TEST_CASE("property: swapping interaction pair order changes nothing") {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    Instance inst = random_small_instance(seed);
    Instance swapped = inst;
    swapped.interactions = {};
    for (const auto& [key, value] : inst.interactions.entries())
      swapped.interactions.set(key.second, key.first, value);
    for (int k = 0; k < 10; ++k) {
      Assignment a = random_assignment(inst, rng);
      auto x = evaluate_objective(inst, a);
      auto y = evaluate_objective(swapped, a);
      CHECK(x.objective == y.objective);
      CHECK(x.conflicts == y.conflicts);
    }
  }
}

TEST_CASE("conflict records carry the recorded fields and sum to the total") {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    Instance inst = random_small_instance(seed);
    Assignment a = random_assignment(inst, rng);
    auto b = evaluate_objective(inst, a);
    Score sum = 0;
    for (const auto& c : b.conflicts) {
      CHECK(c.contribution != 0);
      CHECK(c.time_distance == std::llabs(a.clock.at(c.node_b) - a.clock.at(c.node_a)));
      sum += c.contribution;
    }
    CHECK(sum == b.interaction_total);
    CHECK(b.objective == b.effectiveness_total + b.interaction_total);
  }
}

}  // TEST_SUITE
