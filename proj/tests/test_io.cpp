#include "doctest.h"

#include "copath/io.hpp"
#include "support.hpp"

using namespace copath;
using namespace copath::testing;

namespace {

CsvBundle minimal_bundle() {
  CsvBundle b;
  b.edges = "graph_id,src,dst,t_min,t_max\nG1,a,b,1,2\n";
  b.nodes = "graph_id,node_id,label,options\nG1,a,start,r0\nG1,b,end,r0;r1\n";
  b.resources = "resource_id,name,effectiveness,amount\nr0,first,3,10\nr1,second,4,20\n";
  b.interactions = "resource_a,resource_b,value_or_severity\n";
  b.starts = "graph_id,tau\nG1,0\n";
  return b;
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_bundle(const CsvBundle& b, const std::filesystem::path& dir) {
  std::ofstream(dir / "edges.csv") << b.edges;
  std::ofstream(dir / "nodes.csv") << b.nodes;
  std::ofstream(dir / "resources.csv") << b.resources;
  std::ofstream(dir / "interactions.csv") << b.interactions;
  std::ofstream(dir / "starts.csv") << b.starts;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("an edge row loads as one edge") {
  Instance inst = parse_csv_bundle(minimal_bundle());
  REQUIRE(inst.graphs.size() == 1);
  CHECK(inst.graphs[0].edges == std::vector<Edge>{{"a", "b", 1, 2}});
  CHECK(inst.graphs[0].nodes == std::vector<NodeId>{"a", "b"});
  CHECK(inst.find_node("b")->options == std::vector<ResourceId>{"r0", "r1"});
  CHECK(inst.find_node("a")->display_label == "start");
  CHECK(validate_instance(inst).ok());
}

TEST_CASE("an inverted window is a validation failure, not a parse failure") {
  CsvBundle b = minimal_bundle();
  b.edges = "graph_id,src,dst,t_min,t_max\nG1,a,b,3,2\n";
  CHECK_NOTHROW(parse_csv_bundle(b));
  auto dir = fresh_dir("copath_io_inverted");
  write_bundle(b, dir);
  CHECK_THROWS_AS(load_csv(dir), ValidationError);
}

TEST_CASE("severity tokens resolve through the severity map") {
  CsvBundle b = minimal_bundle();
  b.interactions = "resource_a,resource_b,value_or_severity\nr0,r1,moderate\n";
  CHECK(parse_csv_bundle(b).interactions.lookup("r0", "r1") == -1000);
  b.interactions = "resource_a,resource_b,value_or_severity\nr1,r0,minor\n";
  CHECK(parse_csv_bundle(b).interactions.lookup("r0", "r1") == -100);
  b.interactions = "resource_a,resource_b,value_or_severity\nr0,r1,-7\n";
  CHECK(parse_csv_bundle(b).interactions.lookup("r0", "r1") == -7);

  SeverityMap custom{-1, -2, -3};
  b.interactions = "resource_a,resource_b,value_or_severity\nr0,r1,major\n";
  CHECK(parse_csv_bundle(b, custom).interactions.lookup("r0", "r1") == -3);
}

TEST_CASE("parse errors carry file and line") {
  CsvBundle b = minimal_bundle();

  SUBCASE("bad header") {
    b.resources = "id,name,effectiveness,amount\nr0,first,3,10\n";
    try {
      parse_csv_bundle(b);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.file() == "resources.csv");
      CHECK(e.line() == 1);
    }
  }
  SUBCASE("non-integer field") {
    b.edges = "graph_id,src,dst,t_min,t_max\nG1,a,b,1,2\n\nG1,b,c,x,2\n";
    try {
      parse_csv_bundle(b);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.file() == "edges.csv");
      CHECK(e.line() == 4);
      CHECK(e.reason().find("t_min") != std::string::npos);
    }
  }
  SUBCASE("wrong field count") {
    b.starts = "graph_id,tau\nG1,0,9\n";
    try {
      parse_csv_bundle(b);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.file() == "starts.csv");
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("unknown severity") {
    b.interactions = "resource_a,resource_b,value_or_severity\nr0,r1,fatal\n";
    try {
      parse_csv_bundle(b);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.file() == "interactions.csv");
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_csv(fresh_dir("copath_io_empty")), ParseError);
  }
}

TEST_CASE("byte-order mark and padding are tolerated") {
  CsvBundle b = minimal_bundle();
  b.edges = "\xEF\xBB\xBFgraph_id,src,dst,t_min,t_max\r\nG1, a , b ,1,2\r\n";
  CHECK(parse_csv_bundle(b).graphs[0].edges == std::vector<Edge>{{"a", "b", 1, 2}});
}

TEST_CASE("graph order and default start times") {
  CsvBundle b = minimal_bundle();
  b.nodes += "G0,z,z,r0\n";
  b.starts = "graph_id,tau\nG1,-4\n";
  Instance inst = parse_csv_bundle(b);
  REQUIRE(inst.graphs.size() == 2);
  CHECK(inst.graphs[0].id == "G1");
  CHECK(inst.graphs[0].start_time == -4);
  CHECK(inst.graphs[1].id == "G0");
  CHECK(inst.graphs[1].start_time == 0);
}

TEST_CASE("round trips through JSON and CSV") {
  for (const char* name : {"tiny.json", "tiny_plus.json", "fig1.json", "conflict2100"}) {
    CAPTURE(name);
    Instance inst = fixture(name);
    CHECK(load_json(save_json(inst)) == inst);
    CHECK(save_json(load_json(save_json(inst))) == save_json(inst));

    auto dir = fresh_dir(std::string("copath_io_rt_") + (name[0] == 'c' ? "c" : name));
    save_csv(inst, dir);
    CHECK(load_csv(dir) == inst);
    CHECK(parse_csv_bundle(to_csv_bundle(inst)) == inst);
  }
}

TEST_CASE("combiner file") {
  CHECK(to_csv_bundle(tiny()).combiner.empty());
  CHECK(to_csv_bundle(tiny_plus()).combiner == "time_window,amount_floor\n2,10\n");

  auto dir = fresh_dir("copath_io_combiner");
  save_csv(tiny_plus(), dir);
  CHECK(std::filesystem::exists(dir / "combiner.csv"));
  save_csv(tiny(), dir);
  CHECK_FALSE(std::filesystem::exists(dir / "combiner.csv"));

  CsvBundle b = minimal_bundle();
  b.combiner = "time_window,amount_floor\n3,0\n3,1\n";
  CHECK_THROWS_AS(parse_csv_bundle(b), ParseError);
  b.combiner = "time_window,amount_floor\n3,0\n";
  CHECK(parse_csv_bundle(b).combiner.time_window == 3);
  CHECK(parse_csv_bundle(b).combiner.amount_floor == 0);
}

TEST_CASE("property: generated instances survive both round trips") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Instance inst = random_small_instance(seed, 1'000'000);
    CHECK(load_json(save_json(inst)) == inst);
    CHECK(parse_csv_bundle(to_csv_bundle(inst)) == inst);
  }
}

TEST_CASE("csv export refuses what it cannot represent") {
  Instance inst = tiny();
  inst.pins["b"] = true;
  CHECK_THROWS_AS(save_csv(inst, fresh_dir("copath_io_pinned")), Error);

  Instance comma = tiny();
  comma.resources[0].name = "a, b";
  CHECK_THROWS_AS(to_csv_bundle(comma), Error);
}

TEST_CASE("json documents") {
  CHECK_THROWS_AS(load_json(R"({"nodes": [], "resources": []})"), ParseError);
  CHECK_THROWS_AS(load_json("{not json"), ParseError);

  std::string text = save_json(tiny());
  std::string extended = "{\"comment\": \"ignored\"," + text.substr(1);
  CHECK(load_json(extended) == tiny());

  Instance pinned = tiny();
  pinned.pins["b"] = false;
  CHECK(load_json(save_json(pinned)).pins == std::map<NodeId, bool>{{"b", false}});

  std::string severity_doc = R"({"graphs": [], "nodes": [], "resources": [],
    "interactions": [{"a": "x", "b": "y", "value": "major"}]})";
  CHECK(load_json(severity_doc).interactions.lookup("x", "y") == -5000);
}

TEST_CASE("dot export") {
  Instance t = tiny();
  std::string plain = export_dot(t);
  CHECK(plain.rfind("digraph copath {", 0) == 0);
  CHECK(plain.find("subgraph cluster_G1") != std::string::npos);
  CHECK(plain.find("a -> b [label=\"[1,2]\"];") != std::string::npos);
  CHECK(plain.find("p -> q [label=\"[0,3]\"];") != std::string::npos);

  Solution best = oracle_solve(t).witness;
  std::string solved = export_dot(t, &best);
  auto b_line = solved.find("    b [");
  REQUIRE(b_line != std::string::npos);
  CHECK(solved.substr(b_line, solved.find('\n', b_line) - b_line).find("N/A") != std::string::npos);
  CHECK(solved.find("r2 @ 0") != std::string::npos);

  Instance plus = tiny_plus();
  Solution conflicted = oracle_solve(plus).witness;
  CHECK(export_dot(plus, &conflicted).find("b -> p [dir=none") != std::string::npos);

  CHECK(export_dot(Instance{}) == "digraph copath {\n}\n");
}

TEST_CASE("mixed-severity bundle totals -2100") {
  Instance inst = fixture("conflict2100");
  REQUIRE(validate_instance(inst).ok());
  OracleResult r = oracle_solve(inst);
  CHECK(r.witness.interaction_total == -2100);
  CHECK(r.optimum == -1940);
  CHECK(r.witness.conflicts.size() == 3);
  if (have_z3()) {
    Solution s = solve_maximize(z3(), inst);
    CHECK(s.interaction_total == -2100);
    CHECK(s.objective == -1940);
  }

  std::string table = solution_table(inst, r.witness);
  for (const char* column : {"graph", "node", "resource", "clock", "score", "conflict_score", "conflicts"})
    CHECK(table.find(column) != std::string::npos);
  CHECK(table.find("d_insulin(-1000) p_calcium(-100)") != std::string::npos);
  CHECK(table.find("objective -1940 = effectiveness 160 + interactions -2100") != std::string::npos);
}

TEST_CASE("node records") {
  Instance plus = tiny_plus();
  Solution s = oracle_solve(plus).witness;
  auto records = node_records(plus, s);
  REQUIRE(records.size() == 5);
  for (const auto& r : records) {
    CAPTURE(r.id);
    if (r.id == "c") {
      CHECK_FALSE(r.executed);
      CHECK_FALSE(r.resource.has_value());
      CHECK_FALSE(r.clock.has_value());
      CHECK(r.score == 0);
    }
    if (r.id == "b") {
      CHECK(r.executed);
      CHECK(r.resource == std::optional<ResourceId>("r1"));
      CHECK(r.score == 3);
      CHECK(r.conflict_score == -10);
      CHECK(r.partners == std::vector<std::pair<NodeId, Score>>{{"p", -10}});
    }
  }
}

TEST_CASE("solution json") {
  Instance plus = tiny_plus();
  Solution s = oracle_solve(plus).witness;
  std::string doc = save_solution_json(plus, s);
  CHECK(load_solution_json(doc) == s);
  CHECK(doc.find("\"resource_name\": \"N/A\"") != std::string::npos);
  CHECK_THROWS_AS(load_solution_json("[]"), ParseError);
}

}  // TEST_SUITE
