#pragma once

#include <cstdint>
#include <string>

#include "copath/model.hpp"

namespace copath {

/// Relative weights of the three severity classes among generated
/// interactions.
struct SeverityMix {
  double minor = 178;
  double moderate = 3033;
  double major = 270;

  bool operator==(const SeverityMix&) const = default;
};

/// Parameters of a seeded synthetic instance.
struct GeneratorSpec {
  std::uint64_t seed = 1;
  int graph_count = 2;
  int nodes_per_graph = 5;
  /// Maximum number of parents of a non-source node.
  int branching = 2;
  /// Maximum options per node; each node draws between 1 and this many.
  int options_per_node = 2;
  int resource_count = 6;
  /// Fraction of unordered resource pairs that receive an interaction.
  double interaction_density = 0.3;
  SeverityMix severity_mix;
  SeverityMap severities;
  /// Edge windows: t_min in [0, max_delay], t_max - t_min in [0, max_window].
  int max_delay = 2;
  int max_window = 2;
  Score effectiveness_min = 1;
  Score effectiveness_max = 20;
  std::int64_t amount_min = 5;
  std::int64_t amount_max = 30;
  ThresholdCombiner combiner;

  bool operator==(const GeneratorSpec&) const = default;
};

/// Throws Error naming the first out-of-range field.
void check_generator_spec(const GeneratorSpec& spec);

/// Deterministic for a given spec. The result passes validate_instance.
/// Exactly round(density * R(R-1)/2) interactions are drawn over distinct
/// resource pairs, split across severities in proportion to the mix.
Instance generate_synthetic(const GeneratorSpec& spec);

/// JSON form of a spec. Every key is optional and falls back to the default.
GeneratorSpec generator_spec_from_json(const std::string& text);
std::string generator_spec_to_json(const GeneratorSpec& spec);

}  // namespace copath
