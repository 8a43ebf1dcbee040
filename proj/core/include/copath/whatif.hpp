#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "copath/model.hpp"
#include "copath/solver.hpp"

namespace copath {

/// Operator modifications applied before a re-solve.
struct WhatIfDelta {
  std::set<NodeId> pins_true;
  std::set<NodeId> pins_false;
  std::set<ResourceId> exclude_resources;
  std::map<NodeId, ResourceId> force_choice;
  /// Absolute start times per graph.
  std::map<GraphId, Time> start_overrides;

  bool empty() const;
  bool operator==(const WhatIfDelta&) const = default;
};

/// Derived instance with the delta applied; `instance` is left untouched.
///
/// Excluded resources leave every options list and forced choices shrink a
/// node's options to one. Pins join the instance pins, the delta winning on
/// disagreement. A node left without options keeps its original list when
/// it can no longer be executed (pinned false, or off every source-to-sink
/// route that avoids pinned-false nodes); otherwise the delta is infeasible.
/// Throws UnknownEntity for ids the instance does not define and
/// InfeasibleDelta when the constraints cannot all hold.
Instance apply_delta(const Instance& instance, const WhatIfDelta& delta);

struct ChoiceChange {
  NodeId node;
  ResourceId before;
  ResourceId after;

  bool operator==(const ChoiceChange&) const = default;
};

struct ClockChange {
  NodeId node;
  Time before = 0;
  Time after = 0;

  bool operator==(const ClockChange&) const = default;
};

struct GraphDiff {
  GraphId graph;
  std::vector<NodeId> added;    // executed now, not before
  std::vector<NodeId> dropped;  // executed before, not now
  std::vector<ChoiceChange> choice_changes;  // nodes executed in both
  std::vector<ClockChange> clock_changes;    // nodes executed in both
  bool path_changed = false;

  bool operator==(const GraphDiff&) const = default;
};

struct SolutionDiff {
  bool has_baseline = false;
  Score objective_before = 0;
  Score objective_after = 0;
  Score objective_delta = 0;
  std::vector<GraphDiff> graphs;  // instance graph order

  bool operator==(const SolutionDiff&) const = default;
};

/// Per-graph comparison. Without a baseline everything executed is "added"
/// and the objective delta is measured from zero.
SolutionDiff diff_solutions(const Instance& instance, const Solution* baseline,
                            const Solution& after);

struct WhatIfResult {
  Instance derived;
  Solution solution;
  SolutionDiff diff;
};

/// Applies the delta, solves the derived instance, and diffs against the
/// baseline when one is supplied.
WhatIfResult resolve(const BackendConfig& config, const Instance& instance,
                     const WhatIfDelta& delta, const Solution* baseline = nullptr,
                     SolveStats* stats = nullptr);

/// WhatIfDelta JSON mirrors the struct field for field; absent keys are empty.
WhatIfDelta delta_from_json(const std::string& text);
std::string delta_to_json(const WhatIfDelta& delta);
std::string diff_to_json(const SolutionDiff& diff);

}  // namespace copath
