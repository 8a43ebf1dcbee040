#include "copath/oracle.hpp"

#include <algorithm>
#include <limits>

namespace copath {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

struct CandidatePath {
  std::vector<NodeId> nodes;
  std::vector<const Edge*> edges;  // edges[i] joins nodes[i] and nodes[i+1]
  std::vector<const std::vector<ResourceId>*> options;
  std::uint64_t weight = 0;        // choices x delays
};

/// Selectable paths of each graph that honour the instance pins.
std::vector<std::vector<CandidatePath>> candidate_paths(const Instance& instance) {
  std::vector<std::vector<CandidatePath>> out;
  for (const auto& g : instance.graphs) {
    std::vector<CandidatePath> list;
    for (auto& path : admissible_paths(g)) {
      bool ok = true;
      for (const auto& [id, value] : instance.pins) {
        if (!std::binary_search(g.nodes.begin(), g.nodes.end(), id)) continue;
        bool on = std::find(path.begin(), path.end(), id) != path.end();
        if (on != value) ok = false;
      }
      if (!ok) continue;
      CandidatePath c;
      c.weight = 1;
      for (std::size_t i = 0; i < path.size(); ++i) {
        const NodeSpec* spec = instance.find_node(path[i]);
        c.options.push_back(&spec->options);
        c.weight = sat_mul(c.weight, spec->options.size());
        if (i + 1 < path.size()) {
          const Edge* e = find_edge(g, path[i], path[i + 1]);
          c.edges.push_back(e);
          c.weight = sat_mul(c.weight, static_cast<std::uint64_t>(e->t_max - e->t_min + 1));
        }
      }
      c.nodes = std::move(path);
      list.push_back(std::move(c));
    }
    out.push_back(std::move(list));
  }
  return out;
}

/// Odometer over digits with the given radices; the first digit is the most
/// significant. Returns false after the last combination.
bool advance(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace

std::uint64_t oracle_space(const Instance& instance) {
  require_valid(instance);
  std::uint64_t total = 1;
  for (const auto& list : candidate_paths(instance)) {
    std::uint64_t per_graph = 0;
    for (const auto& c : list) per_graph = sat_add(per_graph, c.weight);
    total = sat_mul(total, per_graph);
  }
  return total;
}

OracleResult oracle_solve(const Instance& instance, std::uint64_t budget) {
  require_valid(instance);
  auto candidates = candidate_paths(instance);
  std::uint64_t space = 1;
  for (const auto& list : candidates) {
    std::uint64_t per_graph = 0;
    for (const auto& c : list) per_graph = sat_add(per_graph, c.weight);
    space = sat_mul(space, per_graph);
  }
  if (space > budget) throw BudgetExceeded(space, budget);
  if (space == 0) throw Error("no path satisfies the pinned nodes");

  OracleResult result;
  bool have_best = false;
  Assignment best;

  const std::size_t graphs = candidates.size();
  std::vector<std::size_t> path_digits(graphs, 0), path_radix(graphs);
  for (std::size_t i = 0; i < graphs; ++i) path_radix[i] = candidates[i].size();

  do {
    // Flatten the chosen paths.
    std::vector<const CandidatePath*> chosen;
    std::vector<std::size_t> choice_radix, delay_radix;
    Assignment a;
    for (std::size_t i = 0; i < graphs; ++i) {
      const CandidatePath& c = candidates[i][path_digits[i]];
      chosen.push_back(&c);
      for (const auto* opts : c.options) choice_radix.push_back(opts->size());
      for (const auto* e : c.edges)
        delay_radix.push_back(static_cast<std::size_t>(e->t_max - e->t_min + 1));
      a.executed.insert(c.nodes.begin(), c.nodes.end());
    }

    std::vector<std::size_t> choice_digits(choice_radix.size(), 0);
    do {
      std::size_t k = 0;
      for (const auto* c : chosen)
        for (std::size_t n = 0; n < c->nodes.size(); ++n, ++k)
          a.choice[c->nodes[n]] = (*c->options[n])[choice_digits[k]];

      std::vector<std::size_t> delay_digits(delay_radix.size(), 0);
      do {
        std::size_t d = 0;
        for (std::size_t i = 0; i < graphs; ++i) {
          const CandidatePath& c = *chosen[i];
          Time t = instance.graphs[i].start_time;
          a.clock[c.nodes.front()] = t;
          for (std::size_t e = 0; e < c.edges.size(); ++e, ++d) {
            t += c.edges[e]->t_min + static_cast<Time>(delay_digits[d]);
            a.clock[c.nodes[e + 1]] = t;
          }
        }
        Score value = evaluate_objective(instance, a).objective;
        ++result.explored;
        if (!have_best || value > result.optimum) {
          have_best = true;
          result.optimum = value;
          best = a;
        }
      } while (advance(delay_digits, delay_radix));
    } while (advance(choice_digits, choice_radix));
  } while (advance(path_digits, path_radix));

  result.witness = make_solution(instance, std::move(best));
  return result;
}

bool oracle_agrees(const Instance& instance, const Solution& solution,
                   std::uint64_t budget) {
  return oracle_solve(instance, budget).optimum == solution.objective;
}

}  // namespace copath
