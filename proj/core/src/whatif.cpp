#include "copath/whatif.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <iterator>

#include "json_codec.hpp"

namespace copath {

bool WhatIfDelta::empty() const {
  return pins_true.empty() && pins_false.empty() && exclude_resources.empty() &&
         force_choice.empty() && start_overrides.empty();
}

namespace {

using Allowed = std::set<NodeId>;

std::set<NodeId> reach(const std::map<NodeId, std::vector<NodeId>>& step,
                       const std::vector<NodeId>& from, const Allowed& allowed) {
  std::set<NodeId> seen;
  std::deque<NodeId> queue;
  for (const auto& n : from)
    if (allowed.count(n) && seen.insert(n).second) queue.push_back(n);
  while (!queue.empty()) {
    NodeId n = queue.front();
    queue.pop_front();
    auto it = step.find(n);
    if (it == step.end()) continue;
    for (const auto& m : it->second)
      if (allowed.count(m) && seen.insert(m).second) queue.push_back(m);
  }
  return seen;
}

std::map<NodeId, std::size_t> topo_index(const PathwayGraph& g, const Adjacency& adj) {
  std::map<NodeId, std::size_t> indegree, index;
  for (const auto& n : g.nodes) indegree[n] = 0;
  for (const auto& e : g.edges) ++indegree[e.to];
  std::deque<NodeId> ready;
  for (const auto& [n, d] : indegree)
    if (d == 0) ready.push_back(n);
  while (!ready.empty()) {
    NodeId n = ready.front();
    ready.pop_front();
    std::size_t next = index.size();
    index[n] = next;
    auto it = adj.children.find(n);
    if (it == adj.children.end()) continue;
    for (const auto& c : it->second)
      if (--indegree[c] == 0) ready.push_back(c);
  }
  return index;
}

}  // namespace

namespace {

/// Depth-first search for a chordless source-to-sink route inside `live`
/// that visits `required` (sorted topologically). Reachability alone misses
/// routes ruled out by shortcut edges. Gives up and answers true after a
/// fixed number of expansions, leaving the verdict to the solver.
bool chordless_route(const PathwayGraph& g, const Adjacency& adj, const std::set<NodeId>& live,
                     const std::vector<NodeId>& required, std::map<NodeId, std::size_t>& order) {
  std::map<NodeId, std::set<NodeId>> children;
  for (const auto& [n, kids] : adj.children) children[n].insert(kids.begin(), kids.end());
  std::size_t budget = 1'000'000;
  std::vector<NodeId> prefix;
  std::function<bool(const NodeId&, std::size_t)> dfs = [&](const NodeId& node,
                                                            std::size_t next) -> bool {
    if (budget == 0) return true;
    --budget;
    if (!live.count(node)) return false;
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i)
      if (children[prefix[i]].count(node)) return false;
    if (next < required.size()) {
      if (node == required[next]) ++next;
      else if (order[node] > order[required[next]]) return false;
    }
    const auto& kids = adj.children.count(node) ? adj.children.at(node) : std::vector<NodeId>{};
    if (kids.empty()) return next == required.size();
    prefix.push_back(node);
    bool found = false;
    for (const auto& k : kids)
      if ((found = dfs(k, next))) break;
    prefix.pop_back();
    return found;
  };
  return dfs(unique_source(g), 0);
}

}  // namespace

Instance apply_delta(const Instance& instance, const WhatIfDelta& delta) {
  for (const auto& n : delta.pins_true)
    if (!instance.find_node(n)) throw UnknownEntity("unknown node '" + n + "' in pins_true");
  for (const auto& n : delta.pins_false)
    if (!instance.find_node(n)) throw UnknownEntity("unknown node '" + n + "' in pins_false");
  for (const auto& r : delta.exclude_resources)
    if (!instance.find_resource(r))
      throw UnknownEntity("unknown resource '" + r + "' in exclude_resources");
  for (const auto& [n, r] : delta.force_choice) {
    if (!instance.find_node(n)) throw UnknownEntity("unknown node '" + n + "' in force_choice");
    if (!instance.find_resource(r))
      throw UnknownEntity("unknown resource '" + r + "' in force_choice");
  }
  for (const auto& [g, t] : delta.start_overrides)
    if (!instance.find_graph(g))
      throw UnknownEntity("unknown graph '" + g + "' in start_overrides");

  for (const auto& n : delta.pins_true)
    if (delta.pins_false.count(n))
      throw InfeasibleDelta("node '" + n + "' is pinned both true and false");
  for (const auto& [n, r] : delta.force_choice) {
    const auto& opts = instance.find_node(n)->options;
    if (std::find(opts.begin(), opts.end(), r) == opts.end())
      throw InfeasibleDelta("resource '" + r + "' is not an option of node '" + n + "'");
    if (delta.exclude_resources.count(r))
      throw InfeasibleDelta("forced resource '" + r + "' of node '" + n + "' is excluded");
  }

  Instance out = instance;
  for (auto& g : out.graphs) {
    auto it = delta.start_overrides.find(g.id);
    if (it != delta.start_overrides.end()) g.start_time = it->second;
  }
  for (const auto& n : delta.pins_true) out.pins[n] = true;
  for (const auto& n : delta.pins_false) out.pins[n] = false;

  std::set<NodeId> emptied;
  for (auto& node : out.nodes) {
    auto forced = delta.force_choice.find(node.id);
    if (forced != delta.force_choice.end()) {
      node.options = {forced->second};
      continue;
    }
    std::erase_if(node.options,
                  [&](const ResourceId& r) { return delta.exclude_resources.count(r) > 0; });
    if (node.options.empty()) emptied.insert(node.id);
  }

  for (const auto& g : out.graphs) {
    Adjacency adj = adjacency(g);
    Allowed allowed;
    for (const auto& n : g.nodes) {
      auto pin = out.pins.find(n);
      if (pin == out.pins.end() || pin->second) allowed.insert(n);
    }
    std::vector<NodeId> sources, sinks;
    for (const auto& n : graph_sources(g)) sources.push_back(n);
    for (const auto& n : graph_sinks(g)) sinks.push_back(n);
    std::set<NodeId> forward = reach(adj.children, sources, allowed);
    std::set<NodeId> backward = reach(adj.parents, sinks, allowed);
    std::set<NodeId> live;
    std::set_intersection(forward.begin(), forward.end(), backward.begin(), backward.end(),
                          std::inserter(live, live.begin()));

    for (const auto& n : g.nodes) {
      if (!emptied.count(n)) continue;
      if (live.count(n))
        throw InfeasibleDelta("every option of node '" + n +
                              "' is excluded but the node can still be executed");
      auto& node = *std::find_if(out.nodes.begin(), out.nodes.end(),
                                 [&](const NodeSpec& s) { return s.id == n; });
      node.options = instance.find_node(n)->options;
    }

    if (live.empty())
      throw InfeasibleDelta("graph '" + g.id + "' has no route avoiding its pinned-false nodes");

    // Pinned-true nodes must lie on one route: order them topologically and
    // require each to reach the next.
    std::vector<NodeId> required;
    for (const auto& n : g.nodes) {
      auto pin = out.pins.find(n);
      if (pin != out.pins.end() && pin->second) {
        if (!live.count(n))
          throw InfeasibleDelta("pinned node '" + n + "' lies on no admissible route");
        required.push_back(n);
      }
    }
    auto order = topo_index(g, adj);
    std::sort(required.begin(), required.end(),
              [&](const NodeId& a, const NodeId& b) { return order[a] < order[b]; });
    for (std::size_t i = 1; i < required.size(); ++i) {
      auto onward = reach(adj.children, {required[i - 1]}, live);
      if (!onward.count(required[i]))
        throw InfeasibleDelta("pinned nodes '" + required[i - 1] + "' and '" + required[i] +
                              "' cannot both be executed");
    }
    if (!required.empty() && !chordless_route(g, adj, live, required, order))
      throw InfeasibleDelta("no selectable route of graph '" + g.id +
                            "' passes through all of its pinned nodes");
  }
  return out;
}

SolutionDiff diff_solutions(const Instance& instance, const Solution* baseline,
                            const Solution& after) {
  SolutionDiff d;
  d.has_baseline = baseline != nullptr;
  d.objective_before = baseline ? baseline->objective : 0;
  d.objective_after = after.objective;
  d.objective_delta = d.objective_after - d.objective_before;
  for (const auto& g : instance.graphs) {
    GraphDiff gd;
    gd.graph = g.id;
    for (const auto& n : g.nodes) {
      bool now = after.executed.count(n) > 0;
      bool before = baseline && baseline->executed.count(n) > 0;
      if (now && !before) gd.added.push_back(n);
      if (before && !now) gd.dropped.push_back(n);
      if (!now || !before) continue;
      auto c0 = baseline->choice.find(n), c1 = after.choice.find(n);
      if (c0 != baseline->choice.end() && c1 != after.choice.end() && c0->second != c1->second)
        gd.choice_changes.push_back({n, c0->second, c1->second});
      auto t0 = baseline->clock.find(n), t1 = after.clock.find(n);
      if (t0 != baseline->clock.end() && t1 != after.clock.end() && t0->second != t1->second)
        gd.clock_changes.push_back({n, t0->second, t1->second});
    }
    gd.path_changed = !gd.added.empty() || !gd.dropped.empty();
    d.graphs.push_back(std::move(gd));
  }
  return d;
}

WhatIfResult resolve(const BackendConfig& config, const Instance& instance,
                     const WhatIfDelta& delta, const Solution* baseline,
                     SolveStats* stats) {
  WhatIfResult r;
  r.derived = apply_delta(instance, delta);
  r.solution = solve_maximize(config, r.derived, stats);
  r.diff = diff_solutions(r.derived, baseline, r.solution);
  return r;
}

WhatIfDelta delta_from_json(const std::string& text) {
  return codec::delta_from_json(codec::parse(text, "<delta>"));
}

std::string delta_to_json(const WhatIfDelta& d) {
  return codec::delta_to_json(d).dump(2) + "\n";
}

std::string diff_to_json(const SolutionDiff& d) {
  return codec::diff_to_json(d).dump(2) + "\n";
}

}  // namespace copath
