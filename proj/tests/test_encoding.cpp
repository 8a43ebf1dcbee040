#include "doctest.h"

#include <regex>

#include "copath/smt_encoding.hpp"
#include "support.hpp"

using namespace copath;
using namespace copath::testing;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::vector<std::string> vars_with_role(const SmtArtifact& a, VarRole role) {
  std::vector<std::string> out;
  for (const auto& [name, entity] : a.var_map)
    if (entity.role == role) out.push_back(name);
  return out;
}

/// Body of a define-fun block, one conjunct per line.
std::string definition(const std::string& text, const std::string& name) {
  auto start = text.find("(define-fun " + name + " ");
  REQUIRE(start != std::string::npos);
  auto end = text.find("\n))", start);
  return text.substr(start, end - start);
}

}  // namespace

TEST_SUITE("encoding") {

TEST_CASE("full encoding pins source clocks and declares one variable per node") {
  SmtArtifact a = encode_full(tiny(), MaximizeStrategy::native_maximize);
  CHECK(a.kind == ArtifactKind::full);
  CHECK(a.text.find("(assert (= clock_a 0))") != std::string::npos);
  CHECK(count(a.text, "(declare-fun node_") == 5);
  CHECK(count(a.text, "(declare-fun clock_") == 5);
  CHECK(count(a.text, "(declare-fun label_") == 5);
  CHECK(count(a.text, "(maximize obj)") == 1);
  CHECK(vars_with_role(a, VarRole::pair).empty());
}

TEST_CASE("satisfaction-only encoding has no maximize command") {
  SmtArtifact a = encode_full(tiny(), MaximizeStrategy::satisfaction_only);
  CHECK(a.text.find("maximize") == std::string::npos);
  CHECK(a.text.find("(check-sat)") != std::string::npos);

  FullEncodingOptions opts;
  opts.strategy = MaximizeStrategy::satisfaction_only;
  opts.min_objective = -4;
  CHECK(encode_full(tiny(), opts).text.find("(assert (>= obj (- 4)))") != std::string::npos);
}

TEST_CASE("pair variables exist only where an interaction can fire") {
  SmtArtifact a = encode_full(tiny_plus());
  CHECK(vars_with_role(a, VarRole::pair) == std::vector<std::string>{"pair_b__p", "pair_c__p"});
  CHECK(a.var_map.at("pair_b__p") == VarEntity{VarRole::pair, "b", "p"});

  SUBCASE("amounts under the floor prune the pair") {
    Instance low = tiny_plus();
    for (auto& r : low.resources)
      if (r.id == "r1") r.amount = 5;
    CHECK(vars_with_role(encode_full(low), VarRole::pair) == std::vector<std::string>{"pair_c__p"});
  }
  SUBCASE("unpruned mode keeps every cross-graph pair") {
    FullEncodingOptions opts;
    opts.prune_pairs = false;
    CHECK(vars_with_role(encode_full(tiny_plus(), opts), VarRole::pair).size() == 6);
  }
}

TEST_CASE("every declared name is mapped, and vice versa") {
  for (const Instance& inst : {tiny(), tiny_plus(), fig1()}) {
    SmtArtifact a = encode_full(inst);
    std::regex decl(R"(\(declare-fun (\S+) \(\))");
    std::set<std::string> declared;
    for (auto it = std::sregex_iterator(a.text.begin(), a.text.end(), decl); it != std::sregex_iterator(); ++it)
      declared.insert((*it)[1]);
    std::set<std::string> mapped;
    for (const auto& [name, entity] : a.var_map) mapped.insert(name);
    CHECK(declared == mapped);
  }
}

TEST_CASE("encodings are byte-deterministic") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Instance inst = random_small_instance(seed);
    CHECK(encode_full(inst).text == encode_full(inst).text);
    CHECK(encode_equivalence(inst.graphs).text == encode_equivalence(inst.graphs).text);
  }
}

TEST_CASE("labels index the sorted resource list") {
  Instance inst = tiny();
  std::reverse(inst.resources.begin(), inst.resources.end());
  CHECK(label_order(inst) == std::vector<ResourceId>{"r0", "r1", "r2", "r3"});
  CHECK(encode_full(inst).text == encode_full(tiny()).text);
}

TEST_CASE("integer literals") {
  CHECK(smt_int(0) == "0");
  CHECK(smt_int(14) == "14");
  CHECK(smt_int(-5) == "(- 5)");
}

TEST_CASE("efficient encoding") {
  std::vector<PathwayGraph> fork{graph_of("G", {{"a", "b"}, {"a", "c"}})};
  SmtArtifact e = encode_efficient(fork);
  std::string body = definition(e.text, "efficient");
  CHECK(body.find("(=> F_a (or (and F_b (not F_c)) (and F_c (not F_b))))") != std::string::npos);
  // sinks have no successor rule, the source has no predecessor rule
  CHECK(body.find("(=> F_b ") == std::string::npos);
  CHECK(body.find("(=> F_c ") == std::string::npos);
  CHECK(count(body, "(=> (not F_a)") == 2);

  EfficientOptions mutated;
  mutated.omit_predecessor_rule = true;
  CHECK(definition(encode_efficient(fork, mutated).text, "efficient").find("(=> (not F_a)") ==
        std::string::npos);
}

TEST_CASE("formal encoding") {
  std::vector<PathwayGraph> diamond{graph_of("G", {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}})};
  std::string body = definition(encode_formal(diamond).text, "formal");
  CHECK(count(body, "(=> F_a (or F_b F_c))") == 1);
  CHECK(count(body, "(=> F_a (not (and ") == 1);

  std::vector<PathwayGraph> single{graph_of("S", {}, {"n"})};
  CHECK(encode_formal(single).text.find("(define-fun formal () Bool F_n)") != std::string::npos);

  auto fe = encode_efficient(diamond);
  auto ff = encode_formal(diamond);
  CHECK(vars_with_role(fe, VarRole::selection) == vars_with_role(ff, VarRole::selection));
  CHECK(vars_with_role(fe, VarRole::selection).size() == 4);
}

TEST_CASE("equivalence artifact shape") {
  SmtArtifact a = encode_equivalence(tiny().graphs);
  CHECK(a.kind == ArtifactKind::equivalence);
  CHECK(a.text.find("(assert (not (= efficient formal)))") != std::string::npos);
  CHECK(a.text.rfind("(check-sat)") > a.text.find("(define-fun formal"));
  CHECK(encode_equivalence({}).text.find("(define-fun efficient () Bool true)") != std::string::npos);
}

TEST_CASE("pair names stay distinct when ids contain double underscores") {
  Instance inst;
  inst.resources = {{"r0", "r0", 1, 20}, {"r1", "r1", 1, 20}};
  inst.interactions.set("r0", "r1", -3);
  inst.graphs = {graph_of("G1", {}, {"x"}), graph_of("G2", {}, {"x__y"}),
                 graph_of("G3", {}, {"y__z"}), graph_of("G4", {}, {"z"})};
  inst.nodes = {{"x", "G1", "x", {"r0"}}, {"x__y", "G2", "x__y", {"r0"}},
                {"y__z", "G3", "y__z", {"r1"}}, {"z", "G4", "z", {"r1"}}};
  REQUIRE(validate_instance(inst).ok());
  SmtArtifact a = encode_full(inst);
  auto pairs = vars_with_role(a, VarRole::pair);
  CHECK(pairs.size() == 4);
  CHECK(std::set<std::string>(pairs.begin(), pairs.end()).size() == 4);
  if (have_z3()) CHECK(solve_maximize(z3(), inst).objective == oracle_solve(inst).optimum);
}

TEST_CASE("every artifact kind is accepted by the backend") {
  if (!have_z3()) {
    MESSAGE("z3 not found; skipping");
    return;
  }
  for (const Instance& inst : {tiny(), tiny_plus(), fig1()}) {
    CHECK(run_artifact(z3(), encode_full(inst)).verdict == Verdict::sat);
    CHECK(run_artifact(z3(), encode_full(inst, MaximizeStrategy::satisfaction_only)).verdict == Verdict::sat);
    for (const SmtArtifact& def : {encode_efficient(inst.graphs), encode_formal(inst.graphs)}) {
      std::string name = def.kind == ArtifactKind::efficient ? "efficient" : "formal";
      auto out = run_text(z3(), def.text + "(assert " + name + ")\n(check-sat)\n");
      CHECK(out.verdict == Verdict::sat);
      CHECK(out.message.empty());
    }
    CHECK(run_artifact(z3(), encode_equivalence(inst.graphs)).verdict == Verdict::unsat);
  }
}

}  // TEST_SUITE
