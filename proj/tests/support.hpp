#pragma once

// Shared helpers for the unit and acceptance binaries.

#include <filesystem>
#include <map>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "copath/generator.hpp"
#include "copath/io.hpp"
#include "copath/oracle.hpp"
#include "copath/process.hpp"
#include "copath/solver.hpp"

namespace copath::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(COPATH_FIXTURE_DIR) / name;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Instance fixture(const std::string& name) {
  return read_instance(fixture_path(name));
}

inline Instance tiny() { return fixture("tiny.json"); }
inline Instance tiny_plus() { return fixture("tiny_plus.json"); }
inline Instance fig1() { return fixture("fig1.json"); }

/// Graph from (from, to) pairs with zero-width windows, plus isolated nodes.
inline PathwayGraph graph_of(const GraphId& id,
                             const std::vector<std::pair<NodeId, NodeId>>& edges,
                             const std::vector<NodeId>& isolated = {}) {
  PathwayGraph g;
  g.id = id;
  std::set<NodeId> nodes(isolated.begin(), isolated.end());
  for (const auto& [a, b] : edges) {
    g.edges.push_back({a, b, 0, 0});
    nodes.insert(a);
    nodes.insert(b);
  }
  g.nodes.assign(nodes.begin(), nodes.end());
  return g;
}

/// Wraps graphs into an instance where every node has the single option r0.
inline Instance instance_of(std::vector<PathwayGraph> graphs) {
  Instance inst;
  inst.resources.push_back({"r0", "r0", 1, 20});
  for (const auto& g : graphs)
    for (const auto& n : g.nodes) inst.nodes.push_back({n, g.id, n, {"r0"}});
  inst.graphs = std::move(graphs);
  return inst;
}

inline bool have_z3() {
  static const bool present = [] {
    ProcessResult r = run_process({"z3", "-version"}, "", std::chrono::seconds(10));
    return !r.launch_failed && r.exit_code == 0;
  }();
  return present;
}

inline BackendConfig z3(bool native = true, double timeout = 60.0) {
  return make_backend("z3 -in", timeout, native);
}

inline BackendConfig stub(const std::string& args, double timeout = 10.0,
                          bool native = true) {
  return make_backend(std::string(COPATH_STUB_BACKEND) + " " + args, timeout, native);
}

/// Small random instance whose oracle space stays at or under `max_space`:
/// up to 3 graphs of up to 8 nodes, up to 3 options per node, edge windows
/// at most 3 wide, interaction density at most 0.3. Interaction values come
/// from a random severity map so that positive and negative entries both
/// occur, and start times and combiner parameters vary.
inline Instance random_small_instance(std::uint64_t seed, std::uint64_t max_space = 20000) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  for (;;) {
    GeneratorSpec spec;
    spec.seed = rng();
    spec.graph_count = static_cast<int>(pick(1, 3));
    spec.nodes_per_graph = static_cast<int>(pick(1, 8));
    spec.branching = static_cast<int>(pick(1, 3));
    spec.options_per_node = static_cast<int>(pick(1, 3));
    spec.resource_count = static_cast<int>(pick(2, 7));
    spec.interaction_density = static_cast<double>(pick(0, 30)) / 100.0;
    spec.severity_mix = {1, 1, 1};
    spec.severities = {pick(-8, 8), pick(-15, 3), pick(-30, 0)};
    spec.max_delay = static_cast<int>(pick(0, 2));
    spec.max_window = static_cast<int>(pick(0, 3));
    spec.effectiveness_min = -3;
    spec.effectiveness_max = 12;
    spec.amount_min = 5;
    spec.amount_max = 25;
    spec.combiner = {pick(0, 4), pick(0, 15)};
    Instance inst = generate_synthetic(spec);
    for (auto& g : inst.graphs) g.start_time = pick(-3, 3);
    if (oracle_space(inst) <= max_space) return inst;
  }
}

/// A random feasible assignment: one selectable path per graph, random
/// options, random delays inside each window.
inline Assignment random_assignment(const Instance& inst, std::mt19937_64& rng) {
  Assignment a;
  for (const auto& g : inst.graphs) {
    auto paths = admissible_paths(g);
    const auto& path = paths[rng() % paths.size()];
    Time t = g.start_time;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i > 0) {
        const Edge* e = find_edge(g, path[i - 1], path[i]);
        t += e->t_min +
             static_cast<Time>(rng() % static_cast<std::uint64_t>(e->t_max - e->t_min + 1));
      }
      const auto& opts = inst.find_node(path[i])->options;
      a.executed.insert(path[i]);
      a.clock[path[i]] = t;
      a.choice[path[i]] = opts[rng() % opts.size()];
    }
  }
  return a;
}

/// Direct evaluation of the successor/predecessor path rules under a
/// selection, independent of any SMT text.
inline bool efficient_holds(const std::vector<PathwayGraph>& graphs,
                            const std::map<NodeId, bool>& f, bool with_predecessor_rule = true) {
  auto on = [&](const NodeId& n) {
    auto it = f.find(n);
    return it != f.end() && it->second;
  };
  for (const auto& g : graphs) {
    Adjacency adj = adjacency(g);
    for (const auto& s : graph_sources(g))
      if (!on(s)) return false;
    for (const auto& n : g.nodes) {
      const auto& kids = adj.children[n];
      if (!kids.empty() && on(n)) {
        int selected = 0;
        for (const auto& c : kids) selected += on(c) ? 1 : 0;
        if (selected != 1) return false;
      }
      const auto& parents = adj.parents[n];
      if (with_predecessor_rule && !parents.empty()) {
        bool any = false;
        for (const auto& p : parents) any = any || on(p);
        if (!any && on(n)) return false;
      }
    }
  }
  return true;
}

/// Direct evaluation of the grounded source / unique-child / orphan
/// conditions.
inline bool formal_holds(const std::vector<PathwayGraph>& graphs, const std::map<NodeId, bool>& f) {
  auto on = [&](const NodeId& n) {
    auto it = f.find(n);
    return it != f.end() && it->second;
  };
  for (const auto& g : graphs) {
    Adjacency adj = adjacency(g);
    auto sources = graph_sources(g);
    for (const auto& s : sources)
      if (!on(s)) return false;
    for (const auto& n : g.nodes) {
      if (on(n) && !adj.children[n].empty()) {
        int selected = 0;
        for (const auto& c : adj.children[n]) selected += on(c) ? 1 : 0;
        if (selected != 1) return false;
      }
      if (on(n) && !sources.count(n)) {
        bool any = false;
        for (const auto& p : adj.parents[n]) any = any || on(p);
        if (!any) return false;
      }
    }
  }
  return true;
}

}  // namespace copath::testing
