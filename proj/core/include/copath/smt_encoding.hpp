#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "copath/model.hpp"

namespace copath {

enum class ArtifactKind { full, efficient, formal, equivalence };

const char* to_string(ArtifactKind kind);

/// What an SMT variable stands for.
enum class VarRole { node, clock, label, score, pair, objective, selection, definition };

struct VarEntity {
  VarRole role;
  NodeId node;   // empty for objective and definitions
  NodeId other;  // second node of a pair variable

  bool operator==(const VarEntity&) const = default;
};

struct SmtArtifact {
  ArtifactKind kind = ArtifactKind::full;
  std::string text;
  std::map<std::string, VarEntity> var_map;
  /// Resource ids in label order: label value i means resources[i].
  std::vector<ResourceId> label_order;
};

enum class MaximizeStrategy { native_maximize, satisfaction_only };

struct FullEncodingOptions {
  MaximizeStrategy strategy = MaximizeStrategy::native_maximize;
  /// Adds `(assert (>= obj bound))`; used by the iterative search.
  std::optional<Score> min_objective;
  /// Drop pair variables that are identically zero. Turning this off is only
  /// useful for checking that pruning does not change the optimum.
  bool prune_pairs = true;
};

SmtArtifact encode_full(const Instance& instance,
                        const FullEncodingOptions& options = {});
SmtArtifact encode_full(const Instance& instance, MaximizeStrategy strategy);

struct EfficientOptions {
  /// Test hook: leave out every predecessor (orphan-exclusion) constraint.
  bool omit_predecessor_rule = false;
};

/// Successor/predecessor path constraints over shared F_<id> selections,
/// bundled into the Boolean `efficient`.
SmtArtifact encode_efficient(std::span<const PathwayGraph> graphs,
                             const EfficientOptions& options = {});

/// Grounded source/unique-child/orphan conditions over the same selections,
/// bundled into the Boolean `formal`.
SmtArtifact encode_formal(std::span<const PathwayGraph> graphs);

/// Asserts `efficient` and `formal` differ; unsat certifies equivalence.
SmtArtifact encode_equivalence(std::span<const PathwayGraph> graphs,
                               const EfficientOptions& options = {});

// Naming convention shared with the solver driver.
std::string node_var(const NodeId& id);
std::string clock_var(const NodeId& id);
std::string label_var(const NodeId& id);
std::string score_var(const NodeId& id);
std::string selection_var(const NodeId& id);
std::string pair_var(const NodeId& a, const NodeId& b);
inline constexpr const char* kObjectiveVar = "obj";

/// SMT-LIB integer literal; negatives become `(- n)`.
std::string smt_int(Score value);

/// Resource ids sorted; the position of an id is its label value.
std::vector<ResourceId> label_order(const Instance& instance);

}  // namespace copath
