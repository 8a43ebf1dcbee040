#include "copath/generator.hpp"

#include <cmath>
#include <random>
#include <set>

#include "json_codec.hpp"

namespace copath {

namespace {

/// Draws by modulo so that sequences match across standard libraries.
class Draw {
public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[static_cast<std::size_t>(between(0, static_cast<std::int64_t>(i) - 1))]);
  }

private:
  std::mt19937_64 rng_;
};

}  // namespace

void check_generator_spec(const GeneratorSpec& s) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw Error(std::string("generator spec: ") + what);
  };
  need(s.graph_count >= 1, "graph_count must be at least 1");
  need(s.nodes_per_graph >= 1, "nodes_per_graph must be at least 1");
  need(s.branching >= 1, "branching must be at least 1");
  need(s.options_per_node >= 1, "options_per_node must be at least 1");
  need(s.resource_count >= 1, "resource_count must be at least 1");
  need(s.interaction_density >= 0 && s.interaction_density <= 1,
       "interaction_density must lie in [0,1]");
  need(s.severity_mix.minor >= 0 && s.severity_mix.moderate >= 0 && s.severity_mix.major >= 0,
       "severity_mix weights must be non-negative");
  need(s.severity_mix.minor + s.severity_mix.moderate + s.severity_mix.major > 0,
       "severity_mix must have a positive weight");
  need(s.max_delay >= 0 && s.max_window >= 0, "max_delay and max_window must be non-negative");
  need(s.effectiveness_min <= s.effectiveness_max, "effectiveness range is empty");
  need(s.amount_min >= 0 && s.amount_min <= s.amount_max, "amount range is empty or negative");
  need(s.combiner.time_window >= 0, "combiner time_window must be non-negative");
}

Instance generate_synthetic(const GeneratorSpec& spec) {
  check_generator_spec(spec);
  Draw draw(spec.seed);
  Instance inst;
  inst.combiner = spec.combiner;

  for (int r = 0; r < spec.resource_count; ++r)
    inst.resources.push_back({"r" + std::to_string(r), "med" + std::to_string(r),
                              draw.between(spec.effectiveness_min, spec.effectiveness_max),
                              draw.between(spec.amount_min, spec.amount_max)});

  std::vector<std::size_t> resource_index(static_cast<std::size_t>(spec.resource_count));
  for (std::size_t i = 0; i < resource_index.size(); ++i) resource_index[i] = i;

  for (int g = 0; g < spec.graph_count; ++g) {
    PathwayGraph graph;
    graph.id = "G" + std::to_string(g);
    std::vector<NodeId> ids;
    for (int n = 0; n < spec.nodes_per_graph; ++n)
      ids.push_back(graph.id + "_n" + std::to_string(n));

    // Parents always come from earlier nodes, so node 0 is the only source
    // and the graph is acyclic.
    for (int n = 1; n < spec.nodes_per_graph; ++n) {
      int parents = static_cast<int>(draw.between(1, std::min(spec.branching, n)));
      std::vector<int> earlier(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) earlier[static_cast<std::size_t>(k)] = k;
      draw.shuffle(earlier);
      earlier.resize(static_cast<std::size_t>(parents));
      std::sort(earlier.begin(), earlier.end());
      for (int p : earlier) {
        Time lo = draw.between(0, spec.max_delay);
        Time hi = lo + draw.between(0, spec.max_window);
        graph.edges.push_back({ids[static_cast<std::size_t>(p)], ids[static_cast<std::size_t>(n)], lo, hi});
      }
    }

    for (int n = 0; n < spec.nodes_per_graph; ++n) {
      NodeSpec node;
      node.id = ids[static_cast<std::size_t>(n)];
      node.graph = graph.id;
      node.display_label = graph.id + " step " + std::to_string(n);
      int count = static_cast<int>(
          draw.between(1, std::min(spec.options_per_node, spec.resource_count)));
      draw.shuffle(resource_index);
      std::vector<std::size_t> picked(resource_index.begin(), resource_index.begin() + count);
      std::sort(picked.begin(), picked.end());
      for (std::size_t r : picked) node.options.push_back(inst.resources[r].id);
      inst.nodes.push_back(std::move(node));
    }
    inst.graphs.push_back(std::move(graph));
  }

  // Floyd's sampling of distinct unordered pairs, indexed row by row.
  const std::int64_t R = spec.resource_count;
  const std::int64_t pairs = R * (R - 1) / 2;
  const auto count = static_cast<std::int64_t>(std::llround(spec.interaction_density * static_cast<double>(pairs)));
  std::set<std::int64_t> chosen;
  for (std::int64_t j = pairs - count; j < pairs; ++j) {
    std::int64_t t = draw.between(0, j);
    if (!chosen.insert(t).second) chosen.insert(j);
  }

  const SeverityMix& mix = spec.severity_mix;
  const double total = mix.minor + mix.moderate + mix.major;
  auto minor = static_cast<std::int64_t>(std::llround(static_cast<double>(count) * mix.minor / total));
  auto major = static_cast<std::int64_t>(std::llround(static_cast<double>(count) * mix.major / total));
  minor = std::min(minor, count);
  major = std::min(major, count - minor);
  std::vector<Severity> severities;
  severities.insert(severities.end(), static_cast<std::size_t>(minor), Severity::minor);
  severities.insert(severities.end(), static_cast<std::size_t>(major), Severity::major);
  severities.resize(static_cast<std::size_t>(count), Severity::moderate);
  draw.shuffle(severities);

  std::int64_t row = 0, row_start = 0;
  std::size_t k = 0;
  for (std::int64_t index : chosen) {
    while (index >= row_start + (R - 1 - row)) {
      row_start += R - 1 - row;
      ++row;
    }
    std::int64_t col = row + 1 + (index - row_start);
    inst.interactions.set(inst.resources[static_cast<std::size_t>(row)].id,
                          inst.resources[static_cast<std::size_t>(col)].id,
                          severity_to_interaction(spec.severities, severities[k++]));
  }

  collect_graph_nodes(inst);
  return inst;
}

GeneratorSpec generator_spec_from_json(const std::string& text) {
  using codec::json;
  json doc = codec::parse(text, "<generator spec>");
  GeneratorSpec s;
  try {
    if (!doc.is_object()) throw ParseError("<generator spec>", 0, "spec must be an object");
    s.seed = doc.value("seed", s.seed);
    s.graph_count = doc.value("graph_count", s.graph_count);
    s.nodes_per_graph = doc.value("nodes_per_graph", s.nodes_per_graph);
    s.branching = doc.value("branching", s.branching);
    s.options_per_node = doc.value("options_per_node", s.options_per_node);
    s.resource_count = doc.value("resource_count", s.resource_count);
    s.interaction_density = doc.value("interaction_density", s.interaction_density);
    if (doc.contains("severity_mix")) {
      const json& m = doc.at("severity_mix");
      s.severity_mix.minor = m.value("minor", s.severity_mix.minor);
      s.severity_mix.moderate = m.value("moderate", s.severity_mix.moderate);
      s.severity_mix.major = m.value("major", s.severity_mix.major);
    }
    if (doc.contains("severities")) {
      const json& m = doc.at("severities");
      s.severities.minor = m.value("minor", s.severities.minor);
      s.severities.moderate = m.value("moderate", s.severities.moderate);
      s.severities.major = m.value("major", s.severities.major);
    }
    s.max_delay = doc.value("max_delay", s.max_delay);
    s.max_window = doc.value("max_window", s.max_window);
    s.effectiveness_min = doc.value("effectiveness_min", s.effectiveness_min);
    s.effectiveness_max = doc.value("effectiveness_max", s.effectiveness_max);
    s.amount_min = doc.value("amount_min", s.amount_min);
    s.amount_max = doc.value("amount_max", s.amount_max);
    if (doc.contains("combiner")) {
      const json& c = doc.at("combiner");
      s.combiner.time_window = c.value("time_window", s.combiner.time_window);
      s.combiner.amount_floor = c.value("amount_floor", s.combiner.amount_floor);
    }
  } catch (const json::exception& e) {
    throw ParseError("<generator spec>", 0, e.what());
  }
  check_generator_spec(s);
  return s;
}

std::string generator_spec_to_json(const GeneratorSpec& s) {
  codec::json doc = {
      {"seed", s.seed},
      {"graph_count", s.graph_count},
      {"nodes_per_graph", s.nodes_per_graph},
      {"branching", s.branching},
      {"options_per_node", s.options_per_node},
      {"resource_count", s.resource_count},
      {"interaction_density", s.interaction_density},
      {"severity_mix",
       {{"minor", s.severity_mix.minor},
        {"moderate", s.severity_mix.moderate},
        {"major", s.severity_mix.major}}},
      {"severities",
       {{"minor", s.severities.minor},
        {"moderate", s.severities.moderate},
        {"major", s.severities.major}}},
      {"max_delay", s.max_delay},
      {"max_window", s.max_window},
      {"effectiveness_min", s.effectiveness_min},
      {"effectiveness_max", s.effectiveness_max},
      {"amount_min", s.amount_min},
      {"amount_max", s.amount_max},
      {"combiner",
       {{"time_window", s.combiner.time_window}, {"amount_floor", s.combiner.amount_floor}}},
  };
  return doc.dump(2) + "\n";
}

}  // namespace copath
