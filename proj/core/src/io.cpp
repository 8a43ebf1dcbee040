#include "copath/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json_codec.hpp"

namespace copath {

namespace fs = std::filesystem;

namespace {

struct CsvRow {
  std::size_t line;
  std::vector<std::string> fields;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Header-checked rows of one CSV file; blank lines are skipped.
std::vector<CsvRow> read_rows(const std::string& text, const std::string& file,
                              const char* header) {
  std::vector<CsvRow> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool seen_header = false;
  const std::size_t columns = split(header, ',').size();
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    line = trim(line);
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != header)
        throw ParseError(file, lineno, "expected header '" + std::string(header) + "'");
      seen_header = true;
      continue;
    }
    auto fields = split(line, ',');
    if (fields.size() != columns)
      throw ParseError(file, lineno,
                       "expected " + std::to_string(columns) + " fields, got " +
                           std::to_string(fields.size()));
    for (auto& f : fields) f = trim(f);
    rows.push_back({lineno, std::move(fields)});
  }
  if (!seen_header) throw ParseError(file, 0, "missing header row");
  return rows;
}

std::int64_t to_int(const std::string& s, const std::string& file, std::size_t line,
                    const char* column) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError(file, line, std::string(column) + " '" + s + "' is not an integer");
  return v;
}

bool is_integer(const std::string& s) {
  std::int64_t v;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void require_plain(const std::string& value, const char* what) {
  if (value.find_first_of(",\n\r") != std::string::npos)
    throw Error(std::string(what) + " '" + value + "' cannot be written to CSV");
}

}  // namespace

Instance parse_csv_bundle(const CsvBundle& bundle, const SeverityMap& severities) {
  Instance inst;
  std::vector<GraphId> order;
  std::map<GraphId, Time> starts;
  auto note_graph = [&](const GraphId& id) {
    if (std::find(order.begin(), order.end(), id) == order.end()) order.push_back(id);
  };

  for (const auto& row : read_rows(bundle.starts, "starts.csv", kStartsHeader)) {
    note_graph(row.fields[0]);
    starts[row.fields[0]] = to_int(row.fields[1], "starts.csv", row.line, "tau");
  }

  for (const auto& row : read_rows(bundle.nodes, "nodes.csv", kNodesHeader)) {
    NodeSpec n;
    n.graph = row.fields[0];
    n.id = row.fields[1];
    n.display_label = row.fields[2];
    if (!row.fields[3].empty())
      for (auto& opt : split(row.fields[3], ';')) n.options.push_back(trim(opt));
    note_graph(n.graph);
    inst.nodes.push_back(std::move(n));
  }

  std::map<GraphId, std::vector<Edge>> edges;
  for (const auto& row : read_rows(bundle.edges, "edges.csv", kEdgesHeader)) {
    note_graph(row.fields[0]);
    edges[row.fields[0]].push_back(
        {row.fields[1], row.fields[2], to_int(row.fields[3], "edges.csv", row.line, "t_min"),
         to_int(row.fields[4], "edges.csv", row.line, "t_max")});
  }

  for (const auto& row : read_rows(bundle.resources, "resources.csv", kResourcesHeader))
    inst.resources.push_back(
        {row.fields[0], row.fields[1],
         to_int(row.fields[2], "resources.csv", row.line, "effectiveness"),
         to_int(row.fields[3], "resources.csv", row.line, "amount")});

  for (const auto& row :
       read_rows(bundle.interactions, "interactions.csv", kInteractionsHeader)) {
    const std::string& token = row.fields[2];
    Score value;
    if (is_integer(token)) {
      value = to_int(token, "interactions.csv", row.line, "value");
    } else {
      try {
        value = severity_to_interaction(severities, token);
      } catch (const UnknownSeverity& e) {
        throw ParseError("interactions.csv", row.line, e.what());
      }
    }
    inst.interactions.set(row.fields[0], row.fields[1], value);
  }

  if (!bundle.combiner.empty()) {
    auto rows = read_rows(bundle.combiner, "combiner.csv", kCombinerHeader);
    if (rows.size() != 1)
      throw ParseError("combiner.csv", rows.empty() ? 1 : rows[1].line,
                       "expected exactly one row");
    inst.combiner.time_window = to_int(rows[0].fields[0], "combiner.csv", rows[0].line, "time_window");
    inst.combiner.amount_floor =
        to_int(rows[0].fields[1], "combiner.csv", rows[0].line, "amount_floor");
  }

  for (const auto& id : order) {
    PathwayGraph g;
    g.id = id;
    auto s = starts.find(id);
    g.start_time = s == starts.end() ? 0 : s->second;
    g.edges = std::move(edges[id]);
    inst.graphs.push_back(std::move(g));
  }
  collect_graph_nodes(inst);
  return inst;
}

CsvBundle read_csv_bundle(const fs::path& directory) {
  CsvBundle b;
  b.edges = read_file(directory / "edges.csv");
  b.nodes = read_file(directory / "nodes.csv");
  b.resources = read_file(directory / "resources.csv");
  b.interactions = read_file(directory / "interactions.csv");
  b.starts = read_file(directory / "starts.csv");
  if (fs::exists(directory / "combiner.csv")) b.combiner = read_file(directory / "combiner.csv");
  return b;
}

Instance load_csv(const fs::path& directory, const SeverityMap& severities) {
  Instance inst = parse_csv_bundle(read_csv_bundle(directory), severities);
  require_valid(inst);
  return inst;
}

CsvBundle to_csv_bundle(const Instance& instance) {
  std::ostringstream edges, nodes, resources, interactions, starts;
  edges << kEdgesHeader << "\n";
  nodes << kNodesHeader << "\n";
  resources << kResourcesHeader << "\n";
  interactions << kInteractionsHeader << "\n";
  starts << kStartsHeader << "\n";
  for (const auto& g : instance.graphs) {
    starts << g.id << "," << g.start_time << "\n";
    for (const auto& e : g.edges)
      edges << g.id << "," << e.from << "," << e.to << "," << e.t_min << "," << e.t_max
            << "\n";
  }
  for (const auto& n : instance.nodes) {
    require_plain(n.display_label, "label");
    nodes << n.graph << "," << n.id << "," << n.display_label << ",";
    for (std::size_t i = 0; i < n.options.size(); ++i)
      nodes << (i ? ";" : "") << n.options[i];
    nodes << "\n";
  }
  for (const auto& r : instance.resources) {
    require_plain(r.name, "resource name");
    resources << r.id << "," << r.name << "," << r.effectiveness << "," << r.amount << "\n";
  }
  for (const auto& [key, value] : instance.interactions.entries())
    interactions << key.first << "," << key.second << "," << value << "\n";
  std::string combiner;
  const ThresholdCombiner defaults;
  if (instance.combiner.time_window != defaults.time_window ||
      instance.combiner.amount_floor != defaults.amount_floor)
    combiner = std::string(kCombinerHeader) + "\n" +
               std::to_string(instance.combiner.time_window) + "," +
               std::to_string(instance.combiner.amount_floor) + "\n";
  return {edges.str(), nodes.str(), resources.str(), interactions.str(), starts.str(), combiner};
}

void save_csv(const Instance& instance, const fs::path& directory) {
  if (!instance.pins.empty())
    throw Error("pinned instances have no CSV form; save as JSON instead");
  CsvBundle b = to_csv_bundle(instance);
  fs::create_directories(directory);
  write_file(directory / "edges.csv", b.edges);
  write_file(directory / "nodes.csv", b.nodes);
  write_file(directory / "resources.csv", b.resources);
  write_file(directory / "interactions.csv", b.interactions);
  write_file(directory / "starts.csv", b.starts);
  if (b.combiner.empty())
    fs::remove(directory / "combiner.csv");
  else
    write_file(directory / "combiner.csv", b.combiner);
}

std::string save_json(const Instance& instance) {
  return codec::instance_to_json(instance).dump(2) + "\n";
}

Instance load_json(const std::string& text, const SeverityMap& severities) {
  return codec::instance_from_json(codec::parse(text, "<json>"), severities);
}

Instance read_instance(const fs::path& path) {
  if (fs::is_directory(path)) return parse_csv_bundle(read_csv_bundle(path));
  return load_json(read_file(path));
}

std::vector<NodeRecord> node_records(const Instance& instance, const Solution& solution) {
  std::vector<NodeRecord> out;
  for (const auto& g : instance.graphs) {
    for (const auto& id : g.nodes) {
      NodeRecord r;
      r.id = id;
      r.graph = g.id;
      const NodeSpec* spec = instance.find_node(id);
      r.label = spec ? spec->display_label : id;
      r.executed = solution.executed.count(id) > 0;
      if (r.executed) {
        auto c = solution.choice.find(id);
        if (c != solution.choice.end()) {
          r.resource = c->second;
          const Resource* res = instance.find_resource(c->second);
          r.resource_name = res ? res->name : c->second;
          r.score = res ? res->effectiveness : 0;
        }
        auto t = solution.clock.find(id);
        if (t != solution.clock.end()) r.clock = t->second;
      }
      for (const auto& conflict : solution.conflicts) {
        if (conflict.node_a == id)
          r.partners.emplace_back(conflict.node_b, conflict.contribution);
        else if (conflict.node_b == id)
          r.partners.emplace_back(conflict.node_a, conflict.contribution);
        else
          continue;
        r.conflict_score += conflict.contribution;
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::string save_solution_json(const Instance& instance, const Solution& solution) {
  return codec::solution_to_json(instance, solution).dump(2) + "\n";
}

Solution load_solution_json(const std::string& text) {
  return codec::solution_from_json(codec::parse(text, "<solution>"));
}

std::string solution_table(const Instance& instance, const Solution& solution) {
  std::vector<std::vector<std::string>> rows{
      {"graph", "node", "resource", "clock", "score", "conflict_score", "conflicts"}};
  for (const auto& r : node_records(instance, solution)) {
    std::string partners;
    for (const auto& [node, contribution] : r.partners)
      partners += (partners.empty() ? "" : " ") + node + "(" + std::to_string(contribution) + ")";
    rows.push_back({r.graph, r.id, r.executed ? r.resource_name : "N/A",
                    r.clock ? std::to_string(*r.clock) : "-", std::to_string(r.score),
                    std::to_string(r.conflict_score), partners.empty() ? "-" : partners});
  }
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());

  std::ostringstream os;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i + 1 < row.size(); ++i)
      os << std::left << std::setw(static_cast<int>(width[i] + 2)) << row[i];
    os << row.back() << "\n";
  }
  os << "objective " << solution.objective << " = effectiveness "
     << solution.effectiveness_total << " + interactions " << solution.interaction_total
     << "\n";
  return os.str();
}

namespace {

std::string dot_id(const std::string& id) {
  if (!id.empty() && std::isdigit(static_cast<unsigned char>(id.front())))
    return "\"" + id + "\"";
  return id;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_dot(const Instance& instance, const Solution* solution) {
  std::ostringstream os;
  os << "digraph copath {\n";
  for (const auto& g : instance.graphs) {
    os << "  subgraph cluster_" << g.id << " {\n";
    os << "    label=\"" << dot_escape(g.id) << " (start " << g.start_time << ")\";\n";
    for (const auto& id : g.nodes) {
      const NodeSpec* spec = instance.find_node(id);
      std::string label = spec ? spec->display_label : id;
      std::string attrs;
      if (solution) {
        if (solution->executed.count(id)) {
          auto c = solution->choice.find(id);
          auto t = solution->clock.find(id);
          const Resource* r =
              c == solution->choice.end() ? nullptr : instance.find_resource(c->second);
          label = (r ? r->name : std::string("?")) + " @ " +
                  (t == solution->clock.end() ? std::string("?") : std::to_string(t->second));
          attrs = ", style=bold";
        } else {
          label = "N/A";
          attrs = ", style=dashed, fontcolor=gray";
        }
      }
      os << "    " << dot_id(id) << " [label=\"" << dot_escape(label) << "\"" << attrs
         << "];\n";
    }
    for (const auto& e : g.edges)
      os << "    " << dot_id(e.from) << " -> " << dot_id(e.to) << " [label=\"[" << e.t_min
         << "," << e.t_max << "]\"];\n";
    os << "  }\n";
  }
  if (solution)
    for (const auto& c : solution->conflicts)
      os << "  " << dot_id(c.node_a) << " -> " << dot_id(c.node_b)
         << " [dir=none, style=dotted, color=red, constraint=false, label=\""
         << c.contribution << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace copath
