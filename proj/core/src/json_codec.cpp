#include "json_codec.hpp"

namespace copath::codec {

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(what, 0, e.what());
  }
}

json instance_to_json(const Instance& instance) {
  json doc = json::object();
  doc["combiner"] = {{"time_window", instance.combiner.time_window},
                     {"amount_floor", instance.combiner.amount_floor}};
  json graphs = json::array();
  for (const auto& g : instance.graphs) {
    json edges = json::array();
    for (const auto& e : g.edges)
      edges.push_back({{"from", e.from}, {"to", e.to}, {"t_min", e.t_min}, {"t_max", e.t_max}});
    graphs.push_back({{"id", g.id}, {"start_time", g.start_time}, {"edges", edges}});
  }
  doc["graphs"] = graphs;
  json nodes = json::array();
  for (const auto& n : instance.nodes)
    nodes.push_back({{"id", n.id},
                     {"graph", n.graph},
                     {"label", n.display_label},
                     {"options", n.options}});
  doc["nodes"] = nodes;
  json resources = json::array();
  for (const auto& r : instance.resources)
    resources.push_back({{"id", r.id},
                         {"name", r.name},
                         {"effectiveness", r.effectiveness},
                         {"amount", r.amount}});
  doc["resources"] = resources;
  json interactions = json::array();
  for (const auto& [key, value] : instance.interactions.entries())
    interactions.push_back({{"a", key.first}, {"b", key.second}, {"value", value}});
  doc["interactions"] = interactions;
  if (!instance.pins.empty()) {
    json pins = json::object();
    for (const auto& [id, v] : instance.pins) pins[id] = v;
    doc["pins"] = pins;
  }
  return doc;
}

Instance instance_from_json(const json& doc, const SeverityMap& severities) {
  try {
    if (!doc.is_object()) throw ParseError("<json>", 0, "instance must be an object");
    for (const char* key : {"graphs", "nodes", "resources"})
      if (!doc.contains(key))
        throw ParseError("<json>", 0, std::string("missing \"") + key + "\" key");

    Instance inst;
    for (const auto& g : doc.at("graphs")) {
      PathwayGraph graph;
      graph.id = g.at("id").get<std::string>();
      graph.start_time = g.value("start_time", Time{0});
      for (const auto& e : g.value("edges", json::array()))
        graph.edges.push_back({e.at("from").get<std::string>(),
                               e.at("to").get<std::string>(),
                               e.at("t_min").get<Time>(), e.at("t_max").get<Time>()});
      inst.graphs.push_back(std::move(graph));
    }
    for (const auto& n : doc.at("nodes")) {
      NodeSpec spec;
      spec.id = n.at("id").get<std::string>();
      spec.graph = n.at("graph").get<std::string>();
      spec.display_label = n.value("label", spec.id);
      spec.options = n.value("options", std::vector<ResourceId>{});
      inst.nodes.push_back(std::move(spec));
    }
    for (const auto& r : doc.at("resources")) {
      Resource res;
      res.id = r.at("id").get<std::string>();
      res.name = r.value("name", res.id);
      res.effectiveness = r.at("effectiveness").get<Score>();
      res.amount = r.at("amount").get<std::int64_t>();
      inst.resources.push_back(std::move(res));
    }
    for (const auto& i : doc.value("interactions", json::array())) {
      const json& v = i.at("value");
      Score value = v.is_string()
                        ? severity_to_interaction(severities, v.get<std::string>())
                        : v.get<Score>();
      inst.interactions.set(i.at("a").get<std::string>(), i.at("b").get<std::string>(),
                            value);
    }
    if (doc.contains("combiner")) {
      const json& c = doc.at("combiner");
      inst.combiner.time_window = c.value("time_window", inst.combiner.time_window);
      inst.combiner.amount_floor = c.value("amount_floor", inst.combiner.amount_floor);
    }
    if (doc.contains("pins"))
      for (const auto& [id, v] : doc.at("pins").items()) inst.pins[id] = v.get<bool>();
    collect_graph_nodes(inst);
    return inst;
  } catch (const json::exception& e) {
    throw ParseError("<json>", 0, e.what());
  } catch (const UnknownSeverity& e) {
    throw ParseError("<json>", 0, e.what());
  }
}

json solution_core_to_json(const Solution& s) {
  json doc = json::object();
  doc["objective"] = s.objective;
  doc["effectiveness_total"] = s.effectiveness_total;
  doc["interaction_total"] = s.interaction_total;
  doc["executed"] = s.executed;
  doc["clock"] = s.clock;
  doc["choice"] = s.choice;
  json conflicts = json::array();
  for (const auto& c : s.conflicts)
    conflicts.push_back({{"node_a", c.node_a},
                         {"node_b", c.node_b},
                         {"resource_a", c.resource_a},
                         {"resource_b", c.resource_b},
                         {"time_distance", c.time_distance},
                         {"contribution", c.contribution}});
  doc["conflicts"] = conflicts;
  return doc;
}

json node_records_to_json(const std::vector<NodeRecord>& records) {
  json out = json::array();
  for (const auto& r : records) {
    json partners = json::array();
    for (const auto& [node, contribution] : r.partners)
      partners.push_back({{"node", node}, {"contribution", contribution}});
    json row = {{"id", r.id},
                {"graph", r.graph},
                {"label", r.label},
                {"executed", r.executed},
                {"score", r.score},
                {"conflicts", partners},
                {"conflict_score", r.conflict_score}};
    row["resource"] = r.resource ? json(*r.resource) : json(nullptr);
    row["resource_name"] = r.executed ? json(r.resource_name) : json("N/A");
    row["clock"] = r.clock ? json(*r.clock) : json(nullptr);
    out.push_back(std::move(row));
  }
  return out;
}

json solution_to_json(const Instance& instance, const Solution& solution) {
  json doc = solution_core_to_json(solution);
  doc["nodes"] = node_records_to_json(node_records(instance, solution));
  return doc;
}

Solution solution_from_json(const json& doc) {
  try {
    Solution s;
    s.objective = doc.at("objective").get<Score>();
    s.effectiveness_total = doc.value("effectiveness_total", Score{0});
    s.interaction_total = doc.value("interaction_total", Score{0});
    s.executed = doc.at("executed").get<std::set<NodeId>>();
    s.clock = doc.value("clock", std::map<NodeId, Time>{});
    s.choice = doc.value("choice", std::map<NodeId, ResourceId>{});
    for (const auto& c : doc.value("conflicts", json::array()))
      s.conflicts.push_back({c.at("node_a").get<std::string>(),
                             c.at("node_b").get<std::string>(),
                             c.at("resource_a").get<std::string>(),
                             c.at("resource_b").get<std::string>(),
                             c.at("time_distance").get<std::int64_t>(),
                             c.at("contribution").get<Score>()});
    return s;
  } catch (const json::exception& e) {
    throw ParseError("<solution>", 0, e.what());
  }
}

json delta_to_json(const WhatIfDelta& d) {
  return {{"pins_true", d.pins_true},
          {"pins_false", d.pins_false},
          {"exclude_resources", d.exclude_resources},
          {"force_choice", d.force_choice},
          {"start_overrides", d.start_overrides}};
}

WhatIfDelta delta_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw ParseError("<delta>", 0, "delta must be an object");
    WhatIfDelta d;
    d.pins_true = doc.value("pins_true", d.pins_true);
    d.pins_false = doc.value("pins_false", d.pins_false);
    d.exclude_resources = doc.value("exclude_resources", d.exclude_resources);
    d.force_choice = doc.value("force_choice", d.force_choice);
    d.start_overrides = doc.value("start_overrides", d.start_overrides);
    return d;
  } catch (const json::exception& e) {
    throw ParseError("<delta>", 0, e.what());
  }
}

json diff_to_json(const SolutionDiff& d) {
  json graphs = json::array();
  for (const auto& g : d.graphs) {
    json choices = json::array(), clocks = json::array();
    for (const auto& c : g.choice_changes)
      choices.push_back({{"node", c.node}, {"before", c.before}, {"after", c.after}});
    for (const auto& c : g.clock_changes)
      clocks.push_back({{"node", c.node}, {"before", c.before}, {"after", c.after}});
    graphs.push_back({{"graph", g.graph},
                      {"added", g.added},
                      {"dropped", g.dropped},
                      {"choice_changes", choices},
                      {"clock_changes", clocks},
                      {"path_changed", g.path_changed}});
  }
  return {{"has_baseline", d.has_baseline},
          {"objective_before", d.objective_before},
          {"objective_after", d.objective_after},
          {"objective_delta", d.objective_delta},
          {"graphs", graphs}};
}

SolutionDiff diff_from_json(const json& doc) {
  try {
    SolutionDiff d;
    d.has_baseline = doc.at("has_baseline").get<bool>();
    d.objective_before = doc.at("objective_before").get<Score>();
    d.objective_after = doc.at("objective_after").get<Score>();
    d.objective_delta = doc.at("objective_delta").get<Score>();
    for (const auto& g : doc.at("graphs")) {
      GraphDiff gd;
      gd.graph = g.at("graph").get<std::string>();
      gd.added = g.at("added").get<std::vector<NodeId>>();
      gd.dropped = g.at("dropped").get<std::vector<NodeId>>();
      for (const auto& c : g.at("choice_changes"))
        gd.choice_changes.push_back({c.at("node").get<std::string>(),
                                     c.at("before").get<std::string>(),
                                     c.at("after").get<std::string>()});
      for (const auto& c : g.at("clock_changes"))
        gd.clock_changes.push_back(
            {c.at("node").get<std::string>(), c.at("before").get<Time>(), c.at("after").get<Time>()});
      gd.path_changed = g.at("path_changed").get<bool>();
      d.graphs.push_back(std::move(gd));
    }
    return d;
  } catch (const json::exception& e) {
    throw ParseError("<diff>", 0, e.what());
  }
}

}  // namespace copath::codec
