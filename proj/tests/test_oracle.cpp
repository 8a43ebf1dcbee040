#include "doctest.h"

#include "copath/oracle.hpp"
#include "support.hpp"

using namespace copath;
using namespace copath::testing;

TEST_SUITE("oracle") {

TEST_CASE("small fixtures") {
  OracleResult t = oracle_solve(tiny());
  CHECK(t.optimum == 14);
  CHECK(t.explored == 12);  // G1: 2 delays via b + 1 via c; G2: 4 delays
  CHECK(t.witness.executed == std::set<NodeId>{"a", "c", "p", "q"});
  CHECK(oracle_space(tiny()) == 12);

  OracleResult p = oracle_solve(tiny_plus());
  CHECK(p.optimum == 3);
  CHECK(p.witness.executed.count("b") == 1);

  OracleResult f = oracle_solve(fig1());
  CHECK(f.optimum == 85);
  CHECK(f.explored == 14);
  CHECK(f.witness.executed.count("n4") == 1);
}

TEST_CASE("all-zero scores give zero") {
  Instance z = tiny_plus();
  for (auto& r : z.resources) r.effectiveness = 0;
  z.interactions = {};
  CHECK(oracle_solve(z).optimum == 0);
}

TEST_CASE("budget") {
  CHECK_THROWS_AS(oracle_solve(tiny(), 11), BudgetExceeded);
  try {
    oracle_solve(fig1(), 5);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.space() == 14);
  }
  CHECK(oracle_solve(tiny(), 12).optimum == 14);
}

TEST_CASE("agreement check") {
  Solution forced = make_solution(tiny(), {{"a", "b", "p", "q"},
                                           {{"a", 0}, {"b", 1}, {"p", 0}, {"q", 0}},
                                           {{"a", "r0"}, {"b", "r1"}, {"p", "r3"}, {"q", "r1"}}});
  CHECK(forced.objective == 13);
  CHECK_FALSE(oracle_agrees(tiny(), forced));
  CHECK(oracle_agrees(tiny(), oracle_solve(tiny()).witness));

  Instance single = instance_of({graph_of("S", {}, {"n"})});
  Solution only = make_solution(single, {{"n"}, {{"n", 0}}, {{"n", "r0"}}});
  CHECK(oracle_agrees(single, only));
}

TEST_CASE("pins restrict the enumeration") {
  Instance t = tiny();
  t.pins["b"] = true;
  CHECK(oracle_solve(t).optimum == 13);
  t.pins["b"] = false;
  CHECK(oracle_solve(t).optimum == 14);
  t.pins["c"] = false;
  CHECK_THROWS_AS(oracle_solve(t), Error);
}

TEST_CASE("property: witnesses satisfy every output condition") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Instance inst = random_small_instance(seed);
    OracleResult r = oracle_solve(inst);
    CHECK(r.witness.objective == r.optimum);
    CHECK(audit_solution(inst, r.witness).empty());
    CHECK(r.explored == oracle_space(inst));
  }
}

TEST_CASE("property: dropping a negative interaction never lowers the optimum") {
  for (std::uint64_t seed = 400; seed < 430; ++seed) {
    Instance inst = random_small_instance(seed);
    Score before = oracle_solve(inst).optimum;
    for (const auto& [key, value] : inst.interactions.entries()) {
      if (value >= 0) continue;
      Instance relaxed = inst;
      relaxed.interactions = {};
      for (const auto& [k, v] : inst.interactions.entries())
        if (k != key) relaxed.interactions.set(k.first, k.second, v);
      CHECK(oracle_solve(relaxed).optimum >= before);
      break;
    }
  }
}

TEST_CASE("property: renaming resources leaves the optimum alone") {
  for (std::uint64_t seed = 500; seed < 520; ++seed) {
    Instance inst = random_small_instance(seed);
    // Reverse bijection r_i -> z_{n-1-i}.
    std::map<ResourceId, ResourceId> rename;
    for (std::size_t i = 0; i < inst.resources.size(); ++i)
      rename[inst.resources[i].id] = "z" + std::to_string(inst.resources.size() - 1 - i);
    Instance renamed = inst;
    for (auto& r : renamed.resources) r.id = rename[r.id];
    for (auto& n : renamed.nodes)
      for (auto& o : n.options) o = rename[o];
    renamed.interactions = {};
    for (const auto& [k, v] : inst.interactions.entries())
      renamed.interactions.set(rename[k.first], rename[k.second], v);
    CHECK(oracle_solve(renamed).optimum == oracle_solve(inst).optimum);
  }
}

}  // TEST_SUITE
