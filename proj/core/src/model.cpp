#include "copath/model.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace copath {

const NodeSpec* Instance::find_node(const NodeId& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

const Resource* Instance::find_resource(const ResourceId& id) const {
  for (const auto& r : resources)
    if (r.id == id) return &r;
  return nullptr;
}

const PathwayGraph* Instance::find_graph(const GraphId& id) const {
  for (const auto& g : graphs)
    if (g.id == id) return &g;
  return nullptr;
}

void collect_graph_nodes(Instance& instance) {
  for (auto& g : instance.graphs) {
    std::set<NodeId> ids;
    for (const auto& e : g.edges) {
      ids.insert(e.from);
      ids.insert(e.to);
    }
    for (const auto& n : instance.nodes)
      if (n.graph == g.id) ids.insert(n.id);
    g.nodes.assign(ids.begin(), ids.end());
  }
}

Solution make_solution(const Instance& instance, Assignment assignment) {
  ObjectiveBreakdown b = evaluate_objective(instance, assignment);
  Solution s;
  s.executed = std::move(assignment.executed);
  s.clock = std::move(assignment.clock);
  s.choice = std::move(assignment.choice);
  s.objective = b.objective;
  s.effectiveness_total = b.effectiveness_total;
  s.interaction_total = b.interaction_total;
  s.conflicts = std::move(b.conflicts);
  return s;
}

// --- validation -----------------------------------------------------------

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateGraph: return "DuplicateGraph";
    case ViolationKind::DuplicateNode: return "DuplicateNode";
    case ViolationKind::DuplicateResource: return "DuplicateResource";
    case ViolationKind::BadIdentifier: return "BadIdentifier";
    case ViolationKind::SelfLoop: return "SelfLoop";
    case ViolationKind::BadTimeWindow: return "BadTimeWindow";
    case ViolationKind::NegativeTime: return "NegativeTime";
    case ViolationKind::DuplicateEdge: return "DuplicateEdge";
    case ViolationKind::EdgeOutsideGraph: return "EdgeOutsideGraph";
    case ViolationKind::MissingNodeSpec: return "MissingNodeSpec";
    case ViolationKind::UnknownGraph: return "UnknownGraph";
    case ViolationKind::EmptyOptions: return "EmptyOptions";
    case ViolationKind::UnknownResource: return "UnknownResource";
    case ViolationKind::NegativeAmount: return "NegativeAmount";
    case ViolationKind::ConflictingInteraction: return "ConflictingInteraction";
    case ViolationKind::UnknownInteractionResource:
      return "UnknownInteractionResource";
    case ViolationKind::BadCombiner: return "BadCombiner";
    case ViolationKind::OverlappingNodeSets: return "OverlappingNodeSets";
    case ViolationKind::Cyclic: return "Cyclic";
    case ViolationKind::MultipleSources: return "MultipleSources";
    case ViolationKind::NoSource: return "NoSource";
    case ViolationKind::UnknownPinnedNode: return "UnknownPinnedNode";
  }
  return "?";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

namespace {

std::string join_entities(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ",";
    out += id;
  }
  return out;
}

std::string describe(const Violation& v) {
  std::string s = to_string(v.kind);
  if (!v.entities.empty()) s += "{" + join_entities(v.entities) + "}";
  if (!v.message.empty()) s += ": " + v.message;
  return s;
}

std::string format_violations(const std::vector<Violation>& vs) {
  std::string s = "instance failed validation";
  for (const auto& v : vs) s += "\n  " + describe(v);
  return s;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(format_violations(violations)), violations_(std::move(violations)) {}

void require_valid(const Instance& instance) {
  auto report = validate_instance(instance);
  if (!report.ok()) throw ValidationError(std::move(report.violations));
}

bool is_valid_identifier(const std::string& id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '_';
  });
}

ValidationReport validate_instance(const Instance& instance) {
  ValidationReport report;
  auto add = [&](ViolationKind k, std::vector<std::string> ids,
                 std::string msg) {
    report.violations.push_back({k, std::move(ids), std::move(msg)});
  };

  std::set<GraphId> graph_ids;
  for (const auto& g : instance.graphs) {
    if (!graph_ids.insert(g.id).second)
      add(ViolationKind::DuplicateGraph, {g.id}, "graph declared twice");
    if (!is_valid_identifier(g.id))
      add(ViolationKind::BadIdentifier, {g.id},
          "graph id must match [A-Za-z0-9_]+");
  }

  std::map<NodeId, const NodeSpec*> specs;
  for (const auto& n : instance.nodes) {
    if (!specs.emplace(n.id, &n).second)
      add(ViolationKind::DuplicateNode, {n.id}, "node spec listed twice");
    if (!is_valid_identifier(n.id))
      add(ViolationKind::BadIdentifier, {n.id},
          "node id must match [A-Za-z0-9_]+");
  }

  std::set<ResourceId> resource_ids;
  for (const auto& r : instance.resources) {
    if (!resource_ids.insert(r.id).second)
      add(ViolationKind::DuplicateResource, {r.id}, "resource listed twice");
    if (!is_valid_identifier(r.id))
      add(ViolationKind::BadIdentifier, {r.id},
          "resource id must match [A-Za-z0-9_]+");
    if (r.amount < 0)
      add(ViolationKind::NegativeAmount, {r.id}, "amount must be nonnegative");
  }

  for (const auto& n : instance.nodes) {
    if (!graph_ids.count(n.graph))
      add(ViolationKind::UnknownGraph, {n.id, n.graph},
          "node names an undeclared graph");
    if (n.options.empty())
      add(ViolationKind::EmptyOptions, {n.id}, "node has no resource options");
    for (const auto& r : n.options)
      if (!resource_ids.count(r))
        add(ViolationKind::UnknownResource, {n.id, r},
            "option names an undeclared resource");
  }

  for (const auto& key : instance.interactions.conflicts())
    add(ViolationKind::ConflictingInteraction, {key.first, key.second},
        "pair listed twice with different values");
  for (const auto& [key, value] : instance.interactions.entries()) {
    (void)value;
    for (const auto& r : {key.first, key.second})
      if (!resource_ids.count(r))
        add(ViolationKind::UnknownInteractionResource, {r},
            "interaction names an undeclared resource");
  }

  if (instance.combiner.time_window < 0 || instance.combiner.amount_floor < 0)
    add(ViolationKind::BadCombiner, {},
        "time window and amount floor must be nonnegative");

  std::map<NodeId, GraphId> owner;
  for (const auto& g : instance.graphs) {
    std::set<NodeId> members(g.nodes.begin(), g.nodes.end());
    for (const auto& id : g.nodes) {
      auto [it, fresh] = owner.emplace(id, g.id);
      if (!fresh && it->second != g.id)
        add(ViolationKind::OverlappingNodeSets, {id},
            "node belongs to graphs " + it->second + " and " + g.id);
      auto spec = specs.find(id);
      if (spec == specs.end())
        add(ViolationKind::MissingNodeSpec, {id}, "node has no node spec");
      else if (spec->second->graph != g.id && fresh)
        add(ViolationKind::EdgeOutsideGraph, {id},
            "node spec places it in graph " + spec->second->graph +
                " but it appears in " + g.id);
    }

    std::set<std::pair<NodeId, NodeId>> seen;
    for (const auto& e : g.edges) {
      std::string label = e.from + "->" + e.to;
      if (e.from == e.to)
        add(ViolationKind::SelfLoop, {e.from}, "edge joins a node to itself");
      if (e.t_min < 0 || e.t_max < 0)
        add(ViolationKind::NegativeTime, {label}, "edge times must be >= 0");
      if (e.t_min > e.t_max)
        add(ViolationKind::BadTimeWindow, {label},
            "t_min " + std::to_string(e.t_min) + " exceeds t_max " +
                std::to_string(e.t_max));
      if (!seen.emplace(e.from, e.to).second)
        add(ViolationKind::DuplicateEdge, {label}, "edge listed twice");
      for (const auto& end : {e.from, e.to})
        if (!members.count(end))
          add(ViolationKind::EdgeOutsideGraph, {label, end},
              "endpoint is not in graph " + g.id);
    }

    if (g.nodes.empty()) {
      add(ViolationKind::NoSource, {g.id}, "graph has no nodes");
      continue;
    }
    if (!is_acyclic(g)) add(ViolationKind::Cyclic, {g.id}, "graph has a cycle");
    auto sources = graph_sources(g);
    if (sources.empty())
      add(ViolationKind::NoSource, {g.id}, "graph has no source node");
    else if (sources.size() > 1)
      add(ViolationKind::MultipleSources,
          std::vector<std::string>(sources.begin(), sources.end()),
          "graph " + g.id + " must have exactly one source");
  }

  for (const auto& n : instance.nodes)
    if (graph_ids.count(n.graph) && !owner.count(n.id))
      add(ViolationKind::MissingNodeSpec, {n.id},
          "node is not in its graph's node set");

  for (const auto& [id, value] : instance.pins) {
    (void)value;
    if (!specs.count(id))
      add(ViolationKind::UnknownPinnedNode, {id}, "pin names an unknown node");
  }
  return report;
}

// --- graph queries ---------------------------------------------------------

std::set<NodeId> graph_sources(const PathwayGraph& graph) {
  std::set<NodeId> out(graph.nodes.begin(), graph.nodes.end());
  for (const auto& e : graph.edges) {
    out.insert(e.from);
  }
  for (const auto& e : graph.edges) out.erase(e.to);
  return out;
}

std::set<NodeId> graph_sinks(const PathwayGraph& graph) {
  std::set<NodeId> out(graph.nodes.begin(), graph.nodes.end());
  for (const auto& e : graph.edges) out.insert(e.to);
  for (const auto& e : graph.edges) out.erase(e.from);
  return out;
}

Adjacency adjacency(const PathwayGraph& graph) {
  Adjacency adj;
  for (const auto& id : graph.nodes) {
    adj.children[id];
    adj.parents[id];
  }
  for (const auto& e : graph.edges) {
    adj.children[e.from].push_back(e.to);
    adj.parents[e.to].push_back(e.from);
    adj.children[e.to];
    adj.parents[e.from];
  }
  for (auto& [id, list] : adj.children) std::sort(list.begin(), list.end());
  for (auto& [id, list] : adj.parents) std::sort(list.begin(), list.end());
  return adj;
}

bool is_acyclic(const PathwayGraph& graph) {
  Adjacency adj = adjacency(graph);
  std::map<NodeId, std::size_t> indegree;
  for (const auto& [id, ps] : adj.parents) indegree[id] = ps.size();
  std::deque<NodeId> ready;
  for (const auto& [id, d] : indegree)
    if (d == 0) ready.push_back(id);
  std::size_t removed = 0;
  while (!ready.empty()) {
    NodeId id = ready.front();
    ready.pop_front();
    ++removed;
    for (const auto& c : adj.children[id])
      if (--indegree[c] == 0) ready.push_back(c);
  }
  return removed == indegree.size();
}

NodeId unique_source(const PathwayGraph& graph) {
  auto sources = graph_sources(graph);
  if (sources.size() != 1)
    throw InvalidGraph("graph " + graph.id + " has " +
                       std::to_string(sources.size()) +
                       " sources; exactly one is required");
  return *sources.begin();
}

std::vector<std::vector<NodeId>> enumerate_paths(const PathwayGraph& graph) {
  if (!is_acyclic(graph))
    throw InvalidGraph("graph " + graph.id + " has a cycle");
  NodeId source = unique_source(graph);
  Adjacency adj = adjacency(graph);

  std::vector<std::vector<NodeId>> paths;
  std::vector<NodeId> prefix;
  std::function<void(const NodeId&)> walk = [&](const NodeId& node) {
    prefix.push_back(node);
    const auto& kids = adj.children[node];
    if (kids.empty()) paths.push_back(prefix);
    for (const auto& k : kids) walk(k);
    prefix.pop_back();
  };
  walk(source);
  return paths;
}

std::vector<std::vector<NodeId>> admissible_paths(const PathwayGraph& graph) {
  if (!is_acyclic(graph))
    throw InvalidGraph("graph " + graph.id + " has a cycle");
  NodeId source = unique_source(graph);
  Adjacency adj = adjacency(graph);
  std::map<NodeId, std::set<NodeId>> children;
  for (const auto& [n, kids] : adj.children) children[n].insert(kids.begin(), kids.end());

  std::vector<std::vector<NodeId>> paths;
  std::vector<NodeId> prefix;
  std::function<void(const NodeId&)> walk = [&](const NodeId& node) {
    // Only the last prefix node may point at `node`.
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i)
      if (children[prefix[i]].count(node)) return;
    prefix.push_back(node);
    const auto& kids = adj.children[node];
    if (kids.empty()) paths.push_back(prefix);
    for (const auto& k : kids) walk(k);
    prefix.pop_back();
  };
  walk(source);
  return paths;
}

const Edge* find_edge(const PathwayGraph& graph, const NodeId& from,
                      const NodeId& to) {
  for (const auto& e : graph.edges)
    if (e.from == from && e.to == to) return &e;
  return nullptr;
}

// --- walk checking ---------------------------------------------------------

const char* to_string(WalkViolationKind kind) {
  switch (kind) {
    case WalkViolationKind::NoUniqueSource: return "NoUniqueSource";
    case WalkViolationKind::SourceNotExecuted: return "SourceNotExecuted";
    case WalkViolationKind::TwoExecutedChildren: return "TwoExecutedChildren";
    case WalkViolationKind::DeadEnd: return "DeadEnd";
    case WalkViolationKind::RepeatedNode: return "RepeatedNode";
    case WalkViolationKind::StrayExecuted: return "StrayExecuted";
    case WalkViolationKind::UnknownNode: return "UnknownNode";
  }
  return "?";
}

bool WalkReport::has(WalkViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const WalkViolation& v) { return v.kind == kind; });
}

WalkReport check_walk(const Instance& instance, const Solution& solution) {
  WalkReport report;
  std::set<NodeId> known;
  for (const auto& g : instance.graphs) {
    known.insert(g.nodes.begin(), g.nodes.end());
    auto sources = graph_sources(g);
    if (sources.size() != 1) {
      report.violations.push_back({g.id, WalkViolationKind::NoUniqueSource, ""});
      continue;
    }
    const NodeId& source = *sources.begin();
    if (!solution.executed.count(source)) {
      report.violations.push_back(
          {g.id, WalkViolationKind::SourceNotExecuted, source});
      continue;
    }
    Adjacency adj = adjacency(g);
    std::vector<NodeId> walk;
    std::set<NodeId> on_walk;
    NodeId cur = source;
    while (true) {
      walk.push_back(cur);
      on_walk.insert(cur);
      std::vector<NodeId> next;
      for (const auto& c : adj.children[cur])
        if (solution.executed.count(c)) next.push_back(c);
      if (next.size() > 1) {
        report.violations.push_back(
            {g.id, WalkViolationKind::TwoExecutedChildren, cur});
        break;
      }
      if (next.empty()) {
        if (!adj.children[cur].empty())
          report.violations.push_back({g.id, WalkViolationKind::DeadEnd, cur});
        break;
      }
      if (on_walk.count(next.front())) {
        report.violations.push_back(
            {g.id, WalkViolationKind::RepeatedNode, next.front()});
        break;
      }
      cur = next.front();
    }
    for (const auto& id : g.nodes)
      if (solution.executed.count(id) && !on_walk.count(id))
        report.violations.push_back({g.id, WalkViolationKind::StrayExecuted, id});
    report.walks[g.id] = std::move(walk);
  }
  for (const auto& id : solution.executed)
    if (!known.count(id))
      report.violations.push_back({"", WalkViolationKind::UnknownNode, id});
  return report;
}

std::vector<std::string> audit_solution(const Instance& instance,
                                        const Solution& solution) {
  std::vector<std::string> problems;
  WalkReport walk = check_walk(instance, solution);
  for (const auto& v : walk.violations)
    problems.push_back(std::string("walk ") + to_string(v.kind) + " in " +
                       v.graph + " at " + v.node);

  bool assigned = true;
  for (const auto& id : solution.executed) {
    const NodeSpec* spec = instance.find_node(id);
    auto choice = solution.choice.find(id);
    if (choice == solution.choice.end() || !spec ||
        std::find(spec->options.begin(), spec->options.end(), choice->second) ==
            spec->options.end()) {
      problems.push_back("choice of " + id + " is not among its options");
      assigned = false;
    }
    if (!solution.clock.count(id)) {
      problems.push_back("executed node " + id + " has no clock");
      assigned = false;
    }
  }

  for (const auto& g : instance.graphs) {
    auto sources = graph_sources(g);
    for (const auto& s : sources) {
      auto c = solution.clock.find(s);
      if (solution.executed.count(s) &&
          (c == solution.clock.end() || c->second != g.start_time))
        problems.push_back("source " + s + " clock differs from start time " +
                           std::to_string(g.start_time));
    }
    for (const auto& e : g.edges) {
      if (!solution.executed.count(e.from) || !solution.executed.count(e.to))
        continue;
      auto cf = solution.clock.find(e.from);
      auto ct = solution.clock.find(e.to);
      if (cf == solution.clock.end() || ct == solution.clock.end()) continue;
      Time gap = ct->second - cf->second;
      if (gap < e.t_min || gap > e.t_max)
        problems.push_back("edge " + e.from + "->" + e.to + " gap " +
                           std::to_string(gap) + " outside [" +
                           std::to_string(e.t_min) + "," +
                           std::to_string(e.t_max) + "]");
    }
  }

  for (const auto& [id, value] : instance.pins)
    if (solution.executed.count(id) != static_cast<std::size_t>(value))
      problems.push_back("pin on " + id + " not honoured");

  if (assigned) {
    ObjectiveBreakdown b = evaluate_objective(instance, solution.assignment());
    if (b.objective != solution.objective ||
        b.effectiveness_total != solution.effectiveness_total ||
        b.interaction_total != solution.interaction_total ||
        b.conflicts != solution.conflicts)
      problems.push_back("objective decomposition disagrees with recomputation");
  }
  return problems;
}

}  // namespace copath
