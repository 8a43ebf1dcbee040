#include "copath/service.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "copath/io.hpp"
#include "copath/whatif.hpp"
#include "httplib.h"
#include "json_codec.hpp"

namespace copath {

using codec::json;

struct SessionService::Session {
  std::string id;
  Instance instance;
  std::optional<Solution> baseline;
  json baseline_doc;  // exactly what the producing call returned
  json history = json::array();
  mutable std::mutex mutex;
  std::atomic<bool> busy{false};
};

namespace {

ApiResponse reply(int status, const json& body) { return {status, body.dump()}; }

ApiResponse error(int status, const std::string& code, const std::string& message,
                  json details = nullptr) {
  return reply(status, {{"code", code}, {"message", message}, {"details", details}});
}

json violations_json(const std::vector<Violation>& violations) {
  json out = json::array();
  for (const auto& v : violations)
    out.push_back({{"kind", to_string(v.kind)}, {"entities", v.entities}, {"message", v.message}});
  return out;
}

/// Layout-oriented view of the instance for clients.
json render_graphs(const Instance& instance) {
  json graphs = json::array();
  for (const auto& g : instance.graphs) {
    json nodes = json::array(), edges = json::array();
    for (const auto& id : g.nodes) {
      const NodeSpec* spec = instance.find_node(id);
      json options = json::array();
      if (spec)
        for (const auto& r : spec->options) {
          const Resource* res = instance.find_resource(r);
          options.push_back({{"id", r},
                             {"name", res ? res->name : r},
                             {"effectiveness", res ? res->effectiveness : 0},
                             {"amount", res ? res->amount : 0}});
        }
      nodes.push_back({{"id", id},
                       {"label", spec ? spec->display_label : id},
                       {"options", options},
                       {"source", graph_sources(g).count(id) > 0}});
    }
    for (const auto& e : g.edges)
      edges.push_back({{"from", e.from}, {"to", e.to}, {"t_min", e.t_min}, {"t_max", e.t_max}});
    graphs.push_back(
        {{"id", g.id}, {"start_time", g.start_time}, {"nodes", nodes}, {"edges", edges}});
  }
  return graphs;
}

std::string new_session_id(std::uint64_t counter) {
  std::random_device rd;
  std::uint64_t bits = (static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^ (counter << 1);
  std::ostringstream os;
  os << std::hex << bits << counter;
  return os.str();
}

struct BusyGuard {
  std::atomic<bool>& flag;
  ~BusyGuard() { flag.store(false); }
};

}  // namespace

SessionService::SessionService(ServiceConfig config) : config_(std::move(config)) {
  if (!config_.data_dir) return;
  auto file = *config_.data_dir / "sessions.json";
  if (!std::filesystem::exists(file)) return;
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  json doc = codec::parse(ss.str(), file.string());
  counter_ = doc.value("counter", std::uint64_t{0});
  for (const auto& s : doc.value("sessions", json::array())) {
    auto session = std::make_shared<Session>();
    session->id = s.at("id").get<std::string>();
    session->instance = codec::instance_from_json(s.at("instance"));
    if (!s.at("baseline").is_null()) {
      session->baseline_doc = s.at("baseline");
      session->baseline = codec::solution_from_json(session->baseline_doc);
    }
    session->history = s.value("history", json::array());
    sessions_[session->id] = session;
  }
}

SessionService::~SessionService() {
  try {
    save_snapshot();
  } catch (const std::exception& e) {
    std::cerr << "copath: snapshot not saved: " << e.what() << "\n";
  }
}

void SessionService::save_snapshot() const {
  if (!config_.data_dir) return;
  json sessions = json::array();
  {
    std::lock_guard lock(mutex_);
    for (const auto& [id, s] : sessions_) {
      std::lock_guard session_lock(s->mutex);
      sessions.push_back({{"id", id},
                          {"instance", codec::instance_to_json(s->instance)},
                          {"baseline", s->baseline ? s->baseline_doc : json(nullptr)},
                          {"history", s->history}});
    }
  }
  std::filesystem::create_directories(*config_.data_dir);
  auto file = *config_.data_dir / "sessions.json";
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write " + tmp.string());
    out << json{{"counter", counter_}, {"sessions", sessions}}.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, file);
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t SessionService::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

ApiResponse SessionService::healthz() const {
  return reply(200, {{"status", "ok"}, {"sessions", session_count()}});
}

ApiResponse SessionService::create_session(const std::string& body) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos)
    return error(400, "bad_request", "empty request body");
  Instance instance;
  try {
    json doc = codec::parse(body, "<request>");
    if (doc.is_object() && doc.contains("csv")) {
      const json& c = doc.at("csv");
      CsvBundle bundle;
      bundle.edges = c.value("edges", "");
      bundle.nodes = c.value("nodes", "");
      bundle.resources = c.value("resources", "");
      bundle.interactions = c.value("interactions", "");
      bundle.starts = c.value("starts", "");
      bundle.combiner = c.value("combiner", "");
      instance = parse_csv_bundle(bundle);
    } else {
      instance = codec::instance_from_json(doc);
    }
  } catch (const ParseError& e) {
    return error(400, "bad_request", e.what(),
                 {{"file", e.file()}, {"line", e.line()}, {"reason", e.reason()}});
  } catch (const json::exception& e) {
    return error(400, "bad_request", e.what());
  }
  ValidationReport report = validate_instance(instance);
  if (!report.ok())
    return error(422, "invalid_instance", "instance failed validation",
                 violations_json(report.violations));

  auto session = std::make_shared<Session>();
  session->instance = std::move(instance);
  {
    std::lock_guard lock(mutex_);
    session->id = new_session_id(++counter_);
    sessions_[session->id] = session;
  }
  return reply(201, {{"session_id", session->id}});
}

ApiResponse SessionService::get_state(const std::string& id) const {
  auto session = find(id);
  if (!session) return error(404, "not_found", "unknown session '" + id + "'");
  std::lock_guard lock(session->mutex);
  return reply(200, {{"session_id", session->id},
                     {"instance", codec::instance_to_json(session->instance)},
                     {"graphs", render_graphs(session->instance)},
                     {"baseline", session->baseline ? session->baseline_doc : json(nullptr)},
                     {"history", session->history}});
}

ApiResponse SessionService::solve(const std::string& id, const std::string& body) {
  auto session = find(id);
  if (!session) return error(404, "not_found", "unknown session '" + id + "'");
  return run_solve(*session, body, false);
}

ApiResponse SessionService::whatif(const std::string& id, const std::string& body) {
  auto session = find(id);
  if (!session) return error(404, "not_found", "unknown session '" + id + "'");
  return run_solve(*session, body, true);
}

ApiResponse SessionService::run_solve(Session& session, const std::string& body, bool is_whatif) {
  BackendConfig backend = config_.backend;
  WhatIfDelta delta;
  try {
    json doc = body.find_first_not_of(" \t\r\n") == std::string::npos
                   ? json::object()
                   : codec::parse(body, "<request>");
    if (!doc.is_object()) return error(400, "bad_request", "request body must be an object");
    if (doc.contains("strategy")) {
      std::string strategy = doc.at("strategy").get<std::string>();
      if (strategy == "native")
        backend.supports_maximize = true;
      else if (strategy == "iterative")
        backend.supports_maximize = false;
      else
        return error(400, "bad_request", "unknown strategy '" + strategy + "'");
    }
    if (doc.contains("timeout")) {
      double timeout = doc.at("timeout").get<double>();
      if (!(timeout > 0)) return error(400, "bad_request", "timeout must be positive");
      backend.timeout_seconds = timeout;
    }
    if (is_whatif) delta = codec::delta_from_json(doc);
  } catch (const ParseError& e) {
    return error(400, "bad_request", e.what());
  } catch (const json::exception& e) {
    return error(400, "bad_request", e.what());
  }

  if (session.busy.exchange(true))
    return error(409, "busy", "a solve is already running for this session");
  BusyGuard guard{session.busy};

  Instance instance;
  std::optional<Solution> baseline;
  {
    std::lock_guard lock(session.mutex);
    instance = session.instance;
    baseline = session.baseline;
  }
  if (is_whatif && !baseline)
    return error(409, "no_baseline", "solve the session before applying a what-if");

  Instance solved_on;
  Solution solution;
  std::optional<SolutionDiff> diff;
  try {
    if (is_whatif) {
      WhatIfResult r = resolve(backend, instance, delta, &*baseline);
      solved_on = std::move(r.derived);
      solution = std::move(r.solution);
      diff = std::move(r.diff);
    } else {
      solution = solve_maximize(backend, instance);
      solved_on = instance;
    }
  } catch (const InfeasibleDelta& e) {
    return error(422, "infeasible_delta", e.what());
  } catch (const UnknownEntity& e) {
    return error(422, "unknown_entity", e.what());
  } catch (const SolverTimeout& e) {
    return error(504, "solver_timeout", e.what());
  } catch (const BackendError& e) {
    return error(502, "backend_error", e.what());
  } catch (const std::exception& e) {
    return error(500, "internal", e.what());
  }

  WalkReport walk = check_walk(solved_on, solution);
  if (!walk.ok()) {
    json details = json::array();
    for (const auto& v : walk.violations)
      details.push_back({{"graph", v.graph}, {"kind", to_string(v.kind)}, {"node", v.node}});
    return error(500, "internal", "solution failed the walk check", details);
  }

  json solution_doc = codec::solution_to_json(solved_on, solution);
  json response;
  {
    std::lock_guard lock(session.mutex);
    session.baseline = solution;
    session.baseline_doc = solution_doc;
    if (is_whatif) {
      json diff_doc = codec::diff_to_json(*diff);
      session.history.push_back(
          {{"delta", codec::delta_to_json(delta)}, {"solution", solution_doc}, {"diff", diff_doc}});
      response = {{"solution", solution_doc}, {"diff", diff_doc}};
    } else {
      session.history = json::array();
      response = solution_doc;
    }
  }
  return reply(200, response);
}

// --- HTTP -------------------------------------------------------------------

struct HttpServer::Impl {
  SessionService& service;
  httplib::Server server;

  explicit Impl(SessionService& s) : service(s) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    auto send = [](httplib::Response& res, const ApiResponse& api) {
      res.status = api.status;
      res.set_content(api.body, "application/json");
    };
    server.Get("/healthz", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, service.healthz());
    });
    server.Post("/api/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, service.create_session(req.body));
    });
    server.Get(R"(/api/sessions/([A-Za-z0-9]+))",
               [this, send](const httplib::Request& req, httplib::Response& res) {
                 send(res, service.get_state(req.matches[1]));
               });
    server.Post(R"(/api/sessions/([A-Za-z0-9]+)/solve)",
                [this, send](const httplib::Request& req, httplib::Response& res) {
                  send(res, service.solve(req.matches[1], req.body));
                });
    server.Post(R"(/api/sessions/([A-Za-z0-9]+)/whatif)",
                [this, send](const httplib::Request& req, httplib::Response& res) {
                  send(res, service.whatif(req.matches[1], req.body));
                });
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      json body = {{"code", res.status == 404 ? "not_found" : "http_error"},
                   {"message", httplib::status_message(res.status)},
                   {"details", nullptr}};
      res.set_content(body.dump(), "application/json");
    });
  }
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace copath
