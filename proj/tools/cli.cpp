#include "cli.hpp"

#include <csignal>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "copath/generator.hpp"
#include "copath/io.hpp"
#include "copath/oracle.hpp"
#include "copath/service.hpp"
#include "copath/smt_encoding.hpp"
#include "copath/solver.hpp"
#include "copath/whatif.hpp"

namespace copath::cli {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// A document given inline (starting with '{') or as a file path.
std::string inline_or_file(const std::string& arg) {
  auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return arg;
  return slurp(arg);
}

Instance load_valid(const std::string& path) {
  Instance inst = read_instance(path);
  require_valid(inst);
  return inst;
}

void print_violations(const std::vector<Violation>& violations, std::ostream& err) {
  for (const auto& v : violations) {
    err << to_string(v.kind);
    for (const auto& e : v.entities) err << " " << e;
    err << ": " << v.message << "\n";
  }
}

struct BackendFlags {
  std::string command;
  std::string strategy = "native";
  double timeout = 60.0;

  void attach(CLI::App* app) {
    app->add_option("--backend", command, "Solver command (default: $COPATH_BACKEND or 'z3 -in')");
    app->add_option("--strategy", strategy, "native or iterative")
        ->check(CLI::IsMember({"native", "iterative"}));
    app->add_option("--timeout", timeout, "Seconds per solver run")->check(CLI::PositiveNumber);
  }

  BackendConfig config() const { return make_backend(command, timeout, strategy == "native"); }
};

volatile std::sig_atomic_t g_stop = 0;
HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
  g_stop = 1;
  if (g_server) g_server->stop();
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-pathway optimiser: encode, solve and inspect merged care pathways"};
  app.name("copath");
  app.require_subcommand(1);

  std::string input;

  auto* validate = app.add_subcommand("validate", "Check an instance (CSV directory or JSON file)");
  validate->add_option("input", input)->required()->check(CLI::ExistingPath);

  std::string kind = "full";
  std::string encode_strategy = "native";
  auto* encode = app.add_subcommand("encode", "Write an SMT-LIB artifact to stdout");
  encode->add_option("input", input)->required()->check(CLI::ExistingPath);
  encode->add_option("--kind", kind)->check(
      CLI::IsMember({"full", "efficient", "formal", "equivalence"}));
  encode->add_option("--strategy", encode_strategy)->check(CLI::IsMember({"native", "iterative"}));

  BackendFlags solve_flags;
  std::string format = "json";
  auto* solve = app.add_subcommand("solve", "Maximise the global score");
  solve->add_option("input", input)->required()->check(CLI::ExistingPath);
  solve_flags.attach(solve);
  solve->add_option("--format", format)->check(CLI::IsMember({"json", "dot", "table"}));

  std::uint64_t budget = kDefaultOracleBudget;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum for small instances");
  oracle->add_option("input", input)->required()->check(CLI::ExistingPath);
  oracle->add_option("--budget", budget, "Maximum assignments to enumerate");

  BackendFlags equiv_flags;
  auto* equiv = app.add_subcommand("equiv", "Check the two path encodings agree");
  equiv->add_option("input", input)->required()->check(CLI::ExistingPath);
  equiv_flags.attach(equiv);

  BackendFlags whatif_flags;
  std::string delta_arg, baseline_path;
  auto* whatif = app.add_subcommand("whatif", "Re-solve under a delta");
  whatif->add_option("input", input)->required()->check(CLI::ExistingPath);
  whatif->add_option("--delta", delta_arg, "Delta JSON file, or inline JSON")->required();
  whatif->add_option("--baseline", baseline_path, "Solution JSON to diff against")
      ->check(CLI::ExistingFile);
  whatif_flags.attach(whatif);

  std::string spec_arg, out_dir;
  auto* generate = app.add_subcommand("generate", "Write a synthetic instance as CSV");
  generate->add_option("--spec", spec_arg, "Generator spec JSON file, or inline JSON")->required();
  generate->add_option("--out", out_dir, "Output directory")->required();

  int port = 8080;
  std::string host = "127.0.0.1", data_dir;
  BackendFlags serve_flags;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve->add_option("--host", host);
  serve->add_option("--data-dir", data_dir, "Directory for session snapshots");
  serve_flags.attach(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) {
      Instance inst = read_instance(input);
      ValidationReport report = validate_instance(inst);
      if (!report.ok()) {
        print_violations(report.violations, err);
        return kDomainFailure;
      }
      std::size_t edges = 0;
      for (const auto& g : inst.graphs) edges += g.edges.size();
      out << json{{"valid", true},
                  {"graphs", inst.graphs.size()},
                  {"nodes", inst.nodes.size()},
                  {"edges", edges},
                  {"resources", inst.resources.size()},
                  {"interactions", inst.interactions.size()}}
                 .dump()
          << "\n";
      return kOk;
    }

    if (*encode) {
      Instance inst = load_valid(input);
      SmtArtifact artifact;
      if (kind == "full")
        artifact = encode_full(inst, encode_strategy == "native"
                                         ? MaximizeStrategy::native_maximize
                                         : MaximizeStrategy::satisfaction_only);
      else if (kind == "efficient")
        artifact = encode_efficient(inst.graphs);
      else if (kind == "formal")
        artifact = encode_formal(inst.graphs);
      else
        artifact = encode_equivalence(inst.graphs);
      out << artifact.text;
      return kOk;
    }

    if (*solve) {
      Instance inst = load_valid(input);
      SolveStats stats;
      Solution s = solve_maximize(solve_flags.config(), inst, &stats);
      err << "solver runs: " << stats.solver_runs << ", objective " << s.objective << "\n";
      if (format == "json")
        out << save_solution_json(inst, s);
      else if (format == "dot")
        out << export_dot(inst, &s);
      else
        out << solution_table(inst, s);
      return kOk;
    }

    if (*oracle) {
      Instance inst = load_valid(input);
      OracleResult r = oracle_solve(inst, budget);
      out << json{{"optimum", r.optimum},
                  {"explored", r.explored},
                  {"solution", json::parse(save_solution_json(inst, r.witness))}}
                 .dump(2)
          << "\n";
      return kOk;
    }

    if (*equiv) {
      Instance inst = load_valid(input);
      EquivalenceResult r = check_equivalence(equiv_flags.config(), inst.graphs);
      out << to_string(r.kind) << "\n";
      if (r.kind == EquivalenceResult::Kind::counterexample) {
        for (const auto& [node, on] : r.selection) out << "  " << node << " = " << on << "\n";
        return kDomainFailure;
      }
      if (r.kind == EquivalenceResult::Kind::inconclusive) {
        err << r.detail << "\n";
        return kBackendFailure;
      }
      return kOk;
    }

    if (*whatif) {
      Instance inst = load_valid(input);
      WhatIfDelta delta = delta_from_json(inline_or_file(delta_arg));
      std::optional<Solution> baseline;
      if (!baseline_path.empty()) baseline = load_solution_json(slurp(baseline_path));
      WhatIfResult r = resolve(whatif_flags.config(), inst, delta, baseline ? &*baseline : nullptr);
      out << json{{"solution", json::parse(save_solution_json(r.derived, r.solution))},
                  {"diff", json::parse(diff_to_json(r.diff))}}
                 .dump(2)
          << "\n";
      return kOk;
    }

    if (*generate) {
      GeneratorSpec spec = generator_spec_from_json(inline_or_file(spec_arg));
      Instance inst = generate_synthetic(spec);
      save_csv(inst, out_dir);
      out << json{{"out", out_dir},
                  {"graphs", inst.graphs.size()},
                  {"nodes", inst.nodes.size()},
                  {"resources", inst.resources.size()},
                  {"interactions", inst.interactions.size()}}
                 .dump()
          << "\n";
      return kOk;
    }

    if (*serve) {
      ServiceConfig config;
      config.backend = serve_flags.config();
      if (!data_dir.empty()) config.data_dir = data_dir;
      SessionService service(config);
      HttpServer server(service);
      int bound = server.bind(host, port);
      if (bound < 0) {
        err << "cannot bind " << host << ":" << port << "\n";
        return kDomainFailure;
      }
      err << "listening on http://" << host << ":" << bound << "\n";
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.listen_after_bind();
      g_server = nullptr;
      return kOk;
    }
  } catch (const ValidationError& e) {
    print_violations(e.violations(), err);
    return kDomainFailure;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kDomainFailure;
  } catch (const SolverTimeout& e) {
    err << "solver timeout: " << e.what() << "\n";
    return kBackendFailure;
  } catch (const BackendError& e) {
    err << "backend error: " << e.what() << "\n";
    return kBackendFailure;
  } catch (const ModelMismatch& e) {
    err << "model mismatch: " << e.what() << "\n";
    return kBackendFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kUsage;
}

}  // namespace copath::cli
