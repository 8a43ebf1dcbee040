#include "copath/smt_encoding.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace copath {

const char* to_string(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::full: return "full";
    case ArtifactKind::efficient: return "efficient";
    case ArtifactKind::formal: return "formal";
    case ArtifactKind::equivalence: return "equivalence";
  }
  return "?";
}

std::string node_var(const NodeId& id) { return "node_" + id; }
std::string clock_var(const NodeId& id) { return "clock_" + id; }
std::string label_var(const NodeId& id) { return "label_" + id; }
std::string score_var(const NodeId& id) { return "score_" + id; }
std::string selection_var(const NodeId& id) { return "F_" + id; }
std::string pair_var(const NodeId& a, const NodeId& b) {
  return "pair_" + a + "__" + b;
}

std::string smt_int(Score value) {
  if (value < 0) return "(- " + std::to_string(-value) + ")";
  return std::to_string(value);
}

std::vector<ResourceId> label_order(const Instance& instance) {
  std::vector<ResourceId> ids;
  ids.reserve(instance.resources.size());
  for (const auto& r : instance.resources) ids.push_back(r.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

std::string and_of(const std::vector<std::string>& terms) {
  if (terms.empty()) return "true";
  if (terms.size() == 1) return terms.front();
  return "(and " + join(terms) + ")";
}

std::string or_of(const std::vector<std::string>& terms) {
  if (terms.empty()) return "false";
  if (terms.size() == 1) return terms.front();
  return "(or " + join(terms) + ")";
}

std::string not_of(const std::string& t) { return "(not " + t + ")"; }

std::string implies(const std::string& a, const std::string& b) {
  return "(=> " + a + " " + b + ")";
}

std::string eq(const std::string& a, const std::string& b) {
  return "(= " + a + " " + b + ")";
}

void check_graphs(std::span<const PathwayGraph> graphs) {
  for (const auto& g : graphs) {
    if (!is_acyclic(g)) throw InvalidGraph("graph " + g.id + " has a cycle");
    unique_source(g);
  }
}

/// Selection variables of every node, in graph order then id order.
std::vector<NodeId> ordered_nodes(std::span<const PathwayGraph> graphs) {
  std::vector<NodeId> out;
  for (const auto& g : graphs) out.insert(out.end(), g.nodes.begin(), g.nodes.end());
  return out;
}

void declare_selections(std::ostringstream& os, SmtArtifact& art,
                        std::span<const PathwayGraph> graphs) {
  for (const auto& id : ordered_nodes(graphs)) {
    std::string name = selection_var(id);
    os << "(declare-fun " << name << " () Bool)\n";
    art.var_map[name] = {VarRole::selection, id, ""};
  }
}

void define_bool(std::ostringstream& os, const std::string& name,
                 const std::vector<std::string>& conjuncts) {
  if (conjuncts.empty()) {
    os << "(define-fun " << name << " () Bool true)\n";
    return;
  }
  if (conjuncts.size() == 1) {
    os << "(define-fun " << name << " () Bool " << conjuncts.front() << ")\n";
    return;
  }
  os << "(define-fun " << name << " () Bool (and\n";
  for (const auto& c : conjuncts) os << "  " << c << "\n";
  os << "))\n";
}

/// Successor rule: a selected node has exactly one selected child, written
/// as a disjunction over the children of "this child and no sibling".
std::string successor_rule(const NodeId& node, const std::vector<NodeId>& kids,
                           std::string (*var)(const NodeId&)) {
  std::vector<std::string> options;
  for (const auto& chosen : kids) {
    std::vector<std::string> conj{var(chosen)};
    for (const auto& other : kids)
      if (other != chosen) conj.push_back(not_of(var(other)));
    options.push_back(and_of(conj));
  }
  return implies(var(node), or_of(options));
}

/// Predecessor rule: with every parent unselected, the node is unselected.
std::string predecessor_rule(const NodeId& node,
                             const std::vector<NodeId>& parents,
                             std::string (*var)(const NodeId&)) {
  std::vector<std::string> conj;
  for (const auto& p : parents) conj.push_back(not_of(var(p)));
  return implies(and_of(conj), not_of(var(node)));
}

std::vector<std::string> efficient_conjuncts(std::span<const PathwayGraph> graphs,
                                             const EfficientOptions& options) {
  std::vector<std::string> out;
  for (const auto& g : graphs) out.push_back(selection_var(unique_source(g)));
  for (const auto& g : graphs) {
    Adjacency adj = adjacency(g);
    for (const auto& id : g.nodes)
      if (!adj.children[id].empty())
        out.push_back(successor_rule(id, adj.children[id], selection_var));
  }
  if (!options.omit_predecessor_rule) {
    for (const auto& g : graphs) {
      Adjacency adj = adjacency(g);
      for (const auto& id : g.nodes)
        if (!adj.parents[id].empty())
          out.push_back(predecessor_rule(id, adj.parents[id], selection_var));
    }
  }
  return out;
}

std::vector<std::string> formal_conjuncts(std::span<const PathwayGraph> graphs) {
  std::vector<std::string> out;
  // every source selected
  for (const auto& g : graphs)
    for (const auto& s : graph_sources(g)) out.push_back(selection_var(s));
  for (const auto& g : graphs) {
    Adjacency adj = adjacency(g);
    // selected non-sink: at least one selected child, no two selected children
    for (const auto& p : g.nodes) {
      const auto& kids = adj.children[p];
      if (kids.empty()) continue;
      std::vector<std::string> any;
      for (const auto& c : kids) any.push_back(selection_var(c));
      out.push_back(implies(selection_var(p), or_of(any)));
      for (std::size_t i = 0; i < kids.size(); ++i)
        for (std::size_t j = i + 1; j < kids.size(); ++j)
          out.push_back(implies(
              selection_var(p),
              not_of(and_of({selection_var(kids[i]), selection_var(kids[j])}))));
    }
    // non-source with no selected parent is unselected, as a clause
    for (const auto& c : g.nodes) {
      const auto& parents = adj.parents[c];
      if (parents.empty()) continue;
      std::vector<std::string> clause;
      for (const auto& p : parents) clause.push_back(selection_var(p));
      clause.push_back(not_of(selection_var(c)));
      out.push_back(or_of(clause));
    }
  }
  return out;
}

}  // namespace

SmtArtifact encode_efficient(std::span<const PathwayGraph> graphs,
                             const EfficientOptions& options) {
  check_graphs(graphs);
  SmtArtifact art;
  art.kind = ArtifactKind::efficient;
  std::ostringstream os;
  os << "; efficient path constraints\n";
  declare_selections(os, art, graphs);
  define_bool(os, "efficient", efficient_conjuncts(graphs, options));
  art.var_map["efficient"] = {VarRole::definition, "", ""};
  art.text = os.str();
  return art;
}

SmtArtifact encode_formal(std::span<const PathwayGraph> graphs) {
  check_graphs(graphs);
  SmtArtifact art;
  art.kind = ArtifactKind::formal;
  std::ostringstream os;
  os << "; grounded path conditions\n";
  declare_selections(os, art, graphs);
  define_bool(os, "formal", formal_conjuncts(graphs));
  art.var_map["formal"] = {VarRole::definition, "", ""};
  art.text = os.str();
  return art;
}

SmtArtifact encode_equivalence(std::span<const PathwayGraph> graphs,
                               const EfficientOptions& options) {
  check_graphs(graphs);
  SmtArtifact art;
  art.kind = ArtifactKind::equivalence;
  std::ostringstream os;
  os << "; equivalence of efficient and grounded path conditions\n";
  os << "(set-logic QF_UF)\n";
  declare_selections(os, art, graphs);
  define_bool(os, "efficient", efficient_conjuncts(graphs, options));
  define_bool(os, "formal", formal_conjuncts(graphs));
  art.var_map["efficient"] = {VarRole::definition, "", ""};
  art.var_map["formal"] = {VarRole::definition, "", ""};
  os << "(assert (not (= efficient formal)))\n";
  os << "(check-sat)\n";
  art.text = os.str();
  return art;
}

SmtArtifact encode_full(const Instance& instance, MaximizeStrategy strategy) {
  FullEncodingOptions options;
  options.strategy = strategy;
  return encode_full(instance, options);
}

SmtArtifact encode_full(const Instance& instance,
                        const FullEncodingOptions& options) {
  require_valid(instance);

  SmtArtifact art;
  art.kind = ArtifactKind::full;
  art.label_order = label_order(instance);
  std::map<ResourceId, std::size_t> label_of;
  for (std::size_t i = 0; i < art.label_order.size(); ++i)
    label_of[art.label_order[i]] = i;
  std::map<ResourceId, const Resource*> resources;
  for (const auto& r : instance.resources) resources[r.id] = &r;

  const auto nodes = ordered_nodes(instance.graphs);
  const Score window = instance.combiner.time_window;
  const Score floor = instance.combiner.amount_floor;

  // Cross-graph pairs that can be nonzero, with their nonzero option combos.
  struct Combo {
    std::size_t label_a;
    std::size_t label_b;
    Score value;
  };
  struct Pair {
    NodeId a;
    NodeId b;
    std::string name;
    std::vector<Combo> combos;
  };
  std::vector<Pair> pairs;
  std::set<std::string> used_names;
  for (std::size_t i1 = 0; i1 < instance.graphs.size(); ++i1) {
    for (std::size_t i2 = i1 + 1; i2 < instance.graphs.size(); ++i2) {
      for (const auto& a : instance.graphs[i1].nodes) {
        const NodeSpec* sa = instance.find_node(a);
        for (const auto& b : instance.graphs[i2].nodes) {
          const NodeSpec* sb = instance.find_node(b);
          Pair p{a, b, "", {}};
          for (const auto& ra : sa->options) {
            for (const auto& rb : sb->options) {
              Score v = instance.interactions.lookup(ra, rb);
              if (v == 0) continue;
              if (resources[ra]->amount < floor || resources[rb]->amount < floor)
                continue;
              p.combos.push_back({label_of[ra], label_of[rb], v});
            }
          }
          if (p.combos.empty() && options.prune_pairs) continue;
          // Ids may contain "__", so the plain name is not always unique.
          std::string name = pair_var(a, b);
          for (int k = 1; used_names.count(name); ++k)
            name = pair_var(a, b) + "_" + std::to_string(k);
          used_names.insert(name);
          p.name = std::move(name);
          pairs.push_back(std::move(p));
        }
      }
    }
  }
  std::map<NodeId, std::vector<std::string>> pairs_of;
  for (const auto& p : pairs) {
    pairs_of[p.a].push_back(p.name);
    pairs_of[p.b].push_back(p.name);
  }

  std::ostringstream os;
  os << "; copath optimisation encoding\n";
  os << "(set-logic QF_LIA)\n";
  os << "(set-option :produce-models true)\n";

  os << "; declarations\n";
  auto declare = [&](const std::string& name, const char* sort, VarEntity e) {
    os << "(declare-fun " << name << " () " << sort << ")\n";
    art.var_map[name] = std::move(e);
  };
  for (const auto& id : nodes) declare(node_var(id), "Bool", {VarRole::node, id, ""});
  for (const auto& id : nodes) declare(clock_var(id), "Int", {VarRole::clock, id, ""});
  for (const auto& id : nodes) declare(label_var(id), "Int", {VarRole::label, id, ""});
  for (const auto& id : nodes) declare(score_var(id), "Int", {VarRole::score, id, ""});
  for (const auto& p : pairs) declare(p.name, "Int", {VarRole::pair, p.a, p.b});
  declare(kObjectiveVar, "Int", {VarRole::objective, "", ""});

  os << "; sources are executed\n";
  for (const auto& g : instance.graphs)
    os << "(assert " << node_var(unique_source(g)) << ")\n";

  if (!instance.pins.empty()) {
    os << "; pinned nodes\n";
    for (const auto& [id, value] : instance.pins)
      os << "(assert " << (value ? node_var(id) : not_of(node_var(id))) << ")\n";
  }

  std::vector<Adjacency> adjacencies;
  for (const auto& g : instance.graphs) adjacencies.push_back(adjacency(g));

  os << "; an executed node has exactly one executed child\n";
  for (std::size_t gi = 0; gi < instance.graphs.size(); ++gi)
    for (const auto& id : instance.graphs[gi].nodes) {
      const auto& kids = adjacencies[gi].children[id];
      if (!kids.empty())
        os << "(assert " << successor_rule(id, kids, node_var) << ")\n";
    }

  os << "; a node without an executed parent is not executed\n";
  for (std::size_t gi = 0; gi < instance.graphs.size(); ++gi)
    for (const auto& id : instance.graphs[gi].nodes) {
      const auto& parents = adjacencies[gi].parents[id];
      if (!parents.empty())
        os << "(assert " << predecessor_rule(id, parents, node_var) << ")\n";
    }

  os << "; edge waiting windows\n";
  for (const auto& g : instance.graphs)
    for (const auto& e : g.edges) {
      std::string gap = "(- " + clock_var(e.to) + " " + clock_var(e.from) + ")";
      os << "(assert (=> (and " << node_var(e.from) << " " << node_var(e.to)
         << ") (and (<= " << smt_int(e.t_min) << " " << gap << ") (<= " << gap
         << " " << smt_int(e.t_max) << "))))\n";
    }

  os << "; source start times\n";
  for (const auto& g : instance.graphs)
    os << "(assert " << eq(clock_var(unique_source(g)), smt_int(g.start_time))
       << ")\n";

  os << "; resource choice domains\n";
  for (const auto& id : nodes) {
    const NodeSpec* spec = instance.find_node(id);
    std::vector<std::string> choices;
    for (const auto& r : spec->options)
      choices.push_back(eq(label_var(id), std::to_string(label_of[r])));
    os << "(assert " << implies(node_var(id), or_of(choices)) << ")\n";
  }

  os << "; scores of non-executed nodes vanish\n";
  for (const auto& id : nodes) {
    std::vector<std::string> zeros{eq(score_var(id), "0")};
    for (const auto& name : pairs_of[id]) zeros.push_back(eq(name, "0"));
    os << "(assert " << implies(not_of(node_var(id)), and_of(zeros)) << ")\n";
  }

  os << "; effectiveness of the chosen resource\n";
  for (const auto& id : nodes) {
    const NodeSpec* spec = instance.find_node(id);
    for (const auto& r : spec->options)
      os << "(assert "
         << implies(and_of({node_var(id),
                            eq(label_var(id), std::to_string(label_of[r]))}),
                    eq(score_var(id), smt_int(resources[r]->effectiveness)))
         << ")\n";
  }

  os << "; cross-graph interaction scores\n";
  for (const auto& p : pairs) {
    std::string gap = "(- " + clock_var(p.b) + " " + clock_var(p.a) + ")";
    std::string close = "(and (<= " + smt_int(-window) + " " + gap + ") (<= " +
                        gap + " " + smt_int(window) + "))";
    std::string term = "0";
    for (auto it = p.combos.rbegin(); it != p.combos.rend(); ++it) {
      std::string when = and_of({eq(label_var(p.a), std::to_string(it->label_a)),
                                 eq(label_var(p.b), std::to_string(it->label_b))});
      term = "(ite " + when + " (ite " + close + " " + smt_int(it->value) +
             " 0) " + term + ")";
    }
    os << "(assert "
       << implies(and_of({node_var(p.a), node_var(p.b)}), eq(p.name, term))
       << ")\n";
  }

  os << "; global score\n";
  std::vector<std::string> terms;
  for (const auto& id : nodes) terms.push_back(score_var(id));
  for (const auto& p : pairs) terms.push_back(p.name);
  std::string sum = terms.empty()      ? "0"
                    : terms.size() == 1 ? terms.front()
                                        : "(+ " + join(terms) + ")";
  os << "(assert " << eq(kObjectiveVar, sum) << ")\n";

  if (options.min_objective)
    os << "(assert (>= " << kObjectiveVar << " " << smt_int(*options.min_objective)
       << "))\n";
  if (options.strategy == MaximizeStrategy::native_maximize)
    os << "(maximize " << kObjectiveVar << ")\n";
  os << "(check-sat)\n";
  os << "(get-value (" << kObjectiveVar << "))\n";
  if (!nodes.empty()) {
    std::vector<std::string> names;
    for (const auto& id : nodes) names.push_back(node_var(id));
    os << "(get-value (" << join(names) << "))\n";
    names.clear();
    for (const auto& id : nodes) names.push_back(clock_var(id));
    os << "(get-value (" << join(names) << "))\n";
    names.clear();
    for (const auto& id : nodes) names.push_back(label_var(id));
    os << "(get-value (" << join(names) << "))\n";
  }
  art.text = os.str();
  return art;
}

}  // namespace copath
