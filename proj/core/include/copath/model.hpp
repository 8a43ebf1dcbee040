#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "copath/error.hpp"
#include "copath/scoring.hpp"

namespace copath {

struct Edge {
  NodeId from;
  NodeId to;
  Time t_min = 0;
  Time t_max = 0;

  bool operator==(const Edge&) const = default;
};

/// A task node. `options` lists the resources that may perform it.
struct NodeSpec {
  NodeId id;
  GraphId graph;
  std::string display_label;
  std::vector<ResourceId> options;

  bool operator==(const NodeSpec&) const = default;
};

/// One pathway DAG. `nodes` is the sorted node set, which also covers
/// isolated nodes that appear in no edge.
struct PathwayGraph {
  GraphId id;
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
  Time start_time = 0;

  bool operator==(const PathwayGraph&) const = default;
};

struct Instance {
  std::vector<PathwayGraph> graphs;
  std::vector<NodeSpec> nodes;
  std::vector<Resource> resources;
  InteractionTable interactions;
  ThresholdCombiner combiner;
  /// Forced node selections (true = must execute, false = must not).
  std::map<NodeId, bool> pins;

  const NodeSpec* find_node(const NodeId& id) const;
  const Resource* find_resource(const ResourceId& id) const;
  const PathwayGraph* find_graph(const GraphId& id) const;

  bool operator==(const Instance&) const = default;
};

/// Rebuilds every graph's node set from its edges and from the node specs
/// that name it. Loaders call this once after filling the instance.
void collect_graph_nodes(Instance& instance);

struct Solution {
  std::set<NodeId> executed;
  std::map<NodeId, Time> clock;
  std::map<NodeId, ResourceId> choice;
  Score objective = 0;
  Score effectiveness_total = 0;
  Score interaction_total = 0;
  std::vector<ConflictRecord> conflicts;

  Assignment assignment() const { return {executed, clock, choice}; }
  bool operator==(const Solution&) const = default;
};

/// Evaluates `assignment` and packages it as a Solution.
Solution make_solution(const Instance& instance, Assignment assignment);

// --- validation -----------------------------------------------------------

enum class ViolationKind {
  DuplicateGraph,
  DuplicateNode,
  DuplicateResource,
  BadIdentifier,
  SelfLoop,
  BadTimeWindow,
  NegativeTime,
  DuplicateEdge,
  EdgeOutsideGraph,
  MissingNodeSpec,
  UnknownGraph,
  EmptyOptions,
  UnknownResource,
  NegativeAmount,
  ConflictingInteraction,
  UnknownInteractionResource,
  BadCombiner,
  OverlappingNodeSets,
  Cyclic,
  MultipleSources,
  NoSource,
  UnknownPinnedNode,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::vector<std::string> entities;
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

ValidationReport validate_instance(const Instance& instance);

/// Thrown by loaders when the parsed instance fails validation.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

private:
  std::vector<Violation> violations_;
};

/// Throws ValidationError unless validate_instance reports ok.
void require_valid(const Instance& instance);

bool is_valid_identifier(const std::string& id);

// --- graph queries ---------------------------------------------------------

std::set<NodeId> graph_sources(const PathwayGraph& graph);
std::set<NodeId> graph_sinks(const PathwayGraph& graph);

/// Children and parents per node, each list sorted by node id.
struct Adjacency {
  std::map<NodeId, std::vector<NodeId>> children;
  std::map<NodeId, std::vector<NodeId>> parents;
};

Adjacency adjacency(const PathwayGraph& graph);

bool is_acyclic(const PathwayGraph& graph);

/// The unique source; throws InvalidGraph when there is not exactly one.
NodeId unique_source(const PathwayGraph& graph);

/// Every source-to-sink path, branching in lexicographic node order.
/// Throws InvalidGraph unless the graph is acyclic with a single source.
std::vector<std::vector<NodeId>> enumerate_paths(const PathwayGraph& graph);

/// The paths of enumerate_paths that have no chord, i.e. no edge between two
/// non-consecutive path nodes. These are exactly the executed sets that
/// check_walk accepts: on a chorded path some node has two executed children.
/// Never empty for a valid graph, since a shortest source-to-sink path is
/// chordless.
std::vector<std::vector<NodeId>> admissible_paths(const PathwayGraph& graph);

/// Edge lookup by (from, to); nullptr when absent.
const Edge* find_edge(const PathwayGraph& graph, const NodeId& from,
                      const NodeId& to);

// --- walk checking ---------------------------------------------------------

enum class WalkViolationKind {
  NoUniqueSource,
  SourceNotExecuted,
  TwoExecutedChildren,
  DeadEnd,
  RepeatedNode,
  StrayExecuted,
  UnknownNode,
};

const char* to_string(WalkViolationKind kind);

struct WalkViolation {
  GraphId graph;
  WalkViolationKind kind;
  NodeId node;

  bool operator==(const WalkViolation&) const = default;
};

struct WalkReport {
  std::map<GraphId, std::vector<NodeId>> walks;
  std::vector<WalkViolation> violations;

  bool ok() const { return violations.empty(); }
  bool has(WalkViolationKind kind) const;
};

/// Reconstructs, per graph, the walk that starts at the source and follows
/// the unique executed child, and checks it covers exactly the executed nodes.
WalkReport check_walk(const Instance& instance, const Solution& solution);

/// Full output-condition audit: walk, choice membership, source clocks, edge
/// windows, pins, and objective decomposition. Empty result means clean.
std::vector<std::string> audit_solution(const Instance& instance,
                                        const Solution& solution);

}  // namespace copath
