#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace copath {

using NodeId = std::string;
using GraphId = std::string;
using ResourceId = std::string;
using Time = std::int64_t;
using Score = std::int64_t;

struct Instance;

/// A way of performing a node's task: effectiveness g1 and amount g2.
struct Resource {
  ResourceId id;
  std::string name;
  Score effectiveness = 0;
  std::int64_t amount = 0;

  bool operator==(const Resource&) const = default;
};

/// Symmetric pairwise interaction scores; unlisted pairs read as zero.
class InteractionTable {
public:
  using Key = std::pair<ResourceId, ResourceId>;

  /// Records I(a,b) = value. A second listing of the same unordered pair with a
  /// different value is kept out of the table and reported by conflicts().
  /// Returns false in that case.
  bool set(const ResourceId& a, const ResourceId& b, Score value);

  Score lookup(const ResourceId& a, const ResourceId& b) const;

  const std::map<Key, Score>& entries() const { return entries_; }
  const std::vector<Key>& conflicts() const { return conflicts_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  static Key normalize(const ResourceId& a, const ResourceId& b);

  bool operator==(const InteractionTable&) const = default;

private:
  std::map<Key, Score> entries_;
  std::vector<Key> conflicts_;
};

/// The threshold family of interaction combiners: the interaction passes
/// through unchanged while the two events are at most `time_window` apart and
/// both amounts reach `amount_floor`, and is zero otherwise.
struct ThresholdCombiner {
  std::int64_t time_window = 8;
  std::int64_t amount_floor = 10;

  bool operator==(const ThresholdCombiner&) const = default;
};

Score eval_f(const ThresholdCombiner& combiner, Score interaction,
             std::int64_t distance, std::int64_t amount_a,
             std::int64_t amount_b);

enum class Severity { minor, moderate, major };

struct SeverityMap {
  Score minor = -100;
  Score moderate = -1000;
  Score major = -5000;

  bool operator==(const SeverityMap&) const = default;
};

Score severity_to_interaction(const SeverityMap& map, Severity severity);

/// Token form ("minor", "moderate", "major"); throws UnknownSeverity otherwise.
Score severity_to_interaction(const SeverityMap& map, std::string_view token);

/// One nonzero cross-graph interaction contribution. node_a lies in the
/// graph with the lower index.
struct ConflictRecord {
  NodeId node_a;
  NodeId node_b;
  ResourceId resource_a;
  ResourceId resource_b;
  std::int64_t time_distance = 0;
  Score contribution = 0;

  bool operator==(const ConflictRecord&) const = default;
};

/// The (F, c, m) triple restricted to executed nodes.
struct Assignment {
  std::set<NodeId> executed;
  std::map<NodeId, Time> clock;
  std::map<NodeId, ResourceId> choice;
};

struct ObjectiveBreakdown {
  Score objective = 0;
  Score effectiveness_total = 0;
  Score interaction_total = 0;
  std::vector<ConflictRecord> conflicts;  // sorted by (node_a, node_b)
};

/// Global score: effectiveness of every executed node plus the combined
/// interaction of every executed pair lying in distinct graphs.
/// Throws UnassignedNode when an executed node lacks a clock or a valid choice.
ObjectiveBreakdown evaluate_objective(const Instance& instance,
                                      const Assignment& assignment);

struct ObjectiveBounds {
  Score lower = 0;
  Score upper = 0;
};

/// Coarse bracket on every feasible objective, used to seed the iterative
/// maximisation.
ObjectiveBounds objective_bounds(const Instance& instance);

}  // namespace copath
