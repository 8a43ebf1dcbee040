#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "copath/model.hpp"

namespace copath {

/// The five CSV files of an instance, as text.
///
///   edges.csv         graph_id,src,dst,t_min,t_max
///   nodes.csv         graph_id,node_id,label,options   (options ';'-separated)
///   resources.csv     resource_id,name,effectiveness,amount
///   interactions.csv  resource_a,resource_b,value_or_severity
///   starts.csv        graph_id,tau
///   combiner.csv      time_window,amount_floor   (optional, one row)
///
/// combiner.csv is only written for a non-default combiner; without it the
/// default applies.
struct CsvBundle {
  std::string edges;
  std::string nodes;
  std::string resources;
  std::string interactions;
  std::string starts;
  std::string combiner;  // empty when absent
};

inline constexpr const char* kEdgesHeader = "graph_id,src,dst,t_min,t_max";
inline constexpr const char* kNodesHeader = "graph_id,node_id,label,options";
inline constexpr const char* kResourcesHeader = "resource_id,name,effectiveness,amount";
inline constexpr const char* kInteractionsHeader = "resource_a,resource_b,value_or_severity";
inline constexpr const char* kStartsHeader = "graph_id,tau";
inline constexpr const char* kCombinerHeader = "time_window,amount_floor";

/// Parses without validating. Graph order is first appearance in starts.csv,
/// then nodes.csv, then edges.csv; a graph missing from starts.csv starts at 0.
Instance parse_csv_bundle(const CsvBundle& bundle, const SeverityMap& severities = {});

CsvBundle read_csv_bundle(const std::filesystem::path& directory);

/// Reads, parses and validates a CSV directory. Throws ParseError or
/// ValidationError.
Instance load_csv(const std::filesystem::path& directory,
                  const SeverityMap& severities = {});

CsvBundle to_csv_bundle(const Instance& instance);
void save_csv(const Instance& instance, const std::filesystem::path& directory);

/// Canonical JSON (sorted keys, two-space indent).
std::string save_json(const Instance& instance);

/// Parses an instance document. Unknown keys are ignored. Does not validate.
Instance load_json(const std::string& text, const SeverityMap& severities = {});

/// Loads a CSV directory or a JSON file, without validating.
Instance read_instance(const std::filesystem::path& path);

/// Per-node view of a solution: what an operator inspects for each node.
struct NodeRecord {
  NodeId id;
  GraphId graph;
  std::string label;
  bool executed = false;
  std::optional<ResourceId> resource;
  std::string resource_name;
  std::optional<Time> clock;
  Score score = 0;
  std::vector<std::pair<NodeId, Score>> partners;
  Score conflict_score = 0;
};

std::vector<NodeRecord> node_records(const Instance& instance,
                                     const Solution& solution);

std::string save_solution_json(const Instance& instance, const Solution& solution);
Solution load_solution_json(const std::string& text);

/// Fixed-width operator table, one row per node.
std::string solution_table(const Instance& instance, const Solution& solution);

/// Graphviz rendering, one cluster per graph. With a solution, executed nodes
/// show the picked resource and clock and the rest read "N/A".
std::string export_dot(const Instance& instance, const Solution* solution = nullptr);

}  // namespace copath
