#include "copath/scoring.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <tuple>

#include "copath/error.hpp"
#include "copath/model.hpp"

namespace copath {

InteractionTable::Key InteractionTable::normalize(const ResourceId& a,
                                                  const ResourceId& b) {
  return a <= b ? Key{a, b} : Key{b, a};
}

bool InteractionTable::set(const ResourceId& a, const ResourceId& b,
                           Score value) {
  Key key = normalize(a, b);
  auto [it, fresh] = entries_.emplace(key, value);
  if (!fresh && it->second != value) {
    if (std::find(conflicts_.begin(), conflicts_.end(), key) == conflicts_.end())
      conflicts_.push_back(key);
    return false;
  }
  return true;
}

Score InteractionTable::lookup(const ResourceId& a, const ResourceId& b) const {
  auto it = entries_.find(normalize(a, b));
  return it == entries_.end() ? 0 : it->second;
}

Score eval_f(const ThresholdCombiner& combiner, Score interaction,
             std::int64_t distance, std::int64_t amount_a,
             std::int64_t amount_b) {
  if (distance > combiner.time_window) return 0;
  if (amount_a < combiner.amount_floor || amount_b < combiner.amount_floor)
    return 0;
  return interaction;
}

Score severity_to_interaction(const SeverityMap& map, Severity severity) {
  switch (severity) {
    case Severity::minor: return map.minor;
    case Severity::moderate: return map.moderate;
    case Severity::major: return map.major;
  }
  return 0;
}

Score severity_to_interaction(const SeverityMap& map, std::string_view token) {
  if (token == "minor") return map.minor;
  if (token == "moderate") return map.moderate;
  if (token == "major") return map.major;
  throw UnknownSeverity(std::string(token));
}

ObjectiveBreakdown evaluate_objective(const Instance& instance,
                                      const Assignment& assignment) {
  std::map<NodeId, std::size_t> graph_of;
  for (std::size_t i = 0; i < instance.graphs.size(); ++i)
    for (const auto& id : instance.graphs[i].nodes) graph_of.emplace(id, i);
  std::map<ResourceId, const Resource*> resources;
  for (const auto& r : instance.resources) resources.emplace(r.id, &r);

  struct Executed {
    const NodeId* id;
    std::size_t graph;
    Time clock;
    const Resource* resource;
  };
  std::vector<Executed> picked;
  picked.reserve(assignment.executed.size());

  ObjectiveBreakdown out;
  for (const auto& id : assignment.executed) {
    const NodeSpec* spec = instance.find_node(id);
    auto g = graph_of.find(id);
    auto c = assignment.clock.find(id);
    auto m = assignment.choice.find(id);
    if (!spec || g == graph_of.end() || c == assignment.clock.end() ||
        m == assignment.choice.end())
      throw UnassignedNode(id);
    if (std::find(spec->options.begin(), spec->options.end(), m->second) ==
        spec->options.end())
      throw UnassignedNode(id);
    auto r = resources.find(m->second);
    if (r == resources.end()) throw UnassignedNode(id);
    picked.push_back({&id, g->second, c->second, r->second});
    out.effectiveness_total += r->second->effectiveness;
  }

  for (const auto& j : picked) {
    for (const auto& k : picked) {
      if (j.graph >= k.graph) continue;
      Score interaction =
          instance.interactions.lookup(j.resource->id, k.resource->id);
      std::int64_t distance = std::llabs(k.clock - j.clock);
      Score value = eval_f(instance.combiner, interaction, distance,
                           j.resource->amount, k.resource->amount);
      if (value == 0) continue;
      out.interaction_total += value;
      out.conflicts.push_back(
          {*j.id, *k.id, j.resource->id, k.resource->id, distance, value});
    }
  }
  std::sort(out.conflicts.begin(), out.conflicts.end(),
            [](const ConflictRecord& a, const ConflictRecord& b) {
              return std::tie(a.node_a, a.node_b) < std::tie(b.node_a, b.node_b);
            });
  out.objective = out.effectiveness_total + out.interaction_total;
  return out;
}

ObjectiveBounds objective_bounds(const Instance& instance) {
  ObjectiveBounds bounds;
  std::map<ResourceId, const Resource*> resources;
  for (const auto& r : instance.resources) resources.emplace(r.id, &r);

  for (const auto& n : instance.nodes) {
    Score hi = std::numeric_limits<Score>::min();
    Score lo = std::numeric_limits<Score>::max();
    for (const auto& opt : n.options) {
      auto r = resources.find(opt);
      if (r == resources.end()) continue;
      hi = std::max(hi, r->second->effectiveness);
      lo = std::min(lo, r->second->effectiveness);
    }
    if (n.options.empty()) continue;
    bounds.upper += std::max<Score>(0, hi);
    bounds.lower += std::min<Score>(0, lo);
  }

  for (std::size_t i1 = 0; i1 < instance.graphs.size(); ++i1) {
    for (std::size_t i2 = i1 + 1; i2 < instance.graphs.size(); ++i2) {
      for (const auto& j : instance.graphs[i1].nodes) {
        const NodeSpec* sj = instance.find_node(j);
        if (!sj) continue;
        for (const auto& k : instance.graphs[i2].nodes) {
          const NodeSpec* sk = instance.find_node(k);
          if (!sk) continue;
          Score hi = 0;
          Score lo = 0;
          for (const auto& r1 : sj->options)
            for (const auto& r2 : sk->options) {
              Score v = instance.interactions.lookup(r1, r2);
              hi = std::max(hi, v);
              lo = std::min(lo, v);
            }
          bounds.upper += hi;
          bounds.lower += lo;
        }
      }
    }
  }
  return bounds;
}

}  // namespace copath
