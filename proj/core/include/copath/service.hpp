#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "copath/solver.hpp"

namespace copath {

/// Status code and JSON body of one API call. Error bodies have the shape
/// {"code": ..., "message": ..., "details": ...}.
struct ApiResponse {
  int status = 200;
  std::string body;
};

struct ServiceConfig {
  BackendConfig backend;
  /// When set, sessions are restored from and saved to
  /// `<data_dir>/sessions.json`.
  std::optional<std::filesystem::path> data_dir;
};

/// In-memory sessions behind the HTTP facade. Safe to call from many
/// threads; each session allows one solve or what-if at a time.
class SessionService {
public:
  explicit SessionService(ServiceConfig config);
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  /// Body: an instance document, or {"csv": {"edges": ..., "nodes": ...,
  /// "resources": ..., "interactions": ..., "starts": ..., "combiner"?: ...}}.
  /// 201 {"session_id"}, 400 malformed, 422 violations.
  ApiResponse create_session(const std::string& body);

  /// 200 {"session_id", "instance", "graphs", "baseline", "history"}, 404.
  ApiResponse get_state(const std::string& id) const;

  /// Body (optional): {"strategy": "native"|"iterative", "timeout": seconds}.
  /// Stores the result as the baseline and clears the what-if history.
  /// 200 solution, 404, 409 busy, 502 backend failure, 504 timeout.
  ApiResponse solve(const std::string& id, const std::string& body);

  /// Body: a WhatIfDelta document, applied to the session's original
  /// instance and diffed against the current baseline.
  /// 200 {"solution", "diff"}, 400, 404, 409 no baseline or busy, 422
  /// infeasible delta, 502, 504.
  ApiResponse whatif(const std::string& id, const std::string& body);

  ApiResponse healthz() const;

  std::size_t session_count() const;

  /// Writes every session to the data directory, if one is configured.
  void save_snapshot() const;

private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& id) const;
  ApiResponse run_solve(Session& session, const std::string& body, bool whatif);

  ServiceConfig config_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

/// Minimal HTTP/1.1 front end over a SessionService:
///   POST /api/sessions, GET /api/sessions/{id},
///   POST /api/sessions/{id}/solve, POST /api/sessions/{id}/whatif,
///   GET /healthz.
class HttpServer {
public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to host:port (port 0 picks a free one) and returns the bound
  /// port, or -1 on failure. Does not start serving.
  int bind(const std::string& host, int port);

  /// Serves until stop() is called. Blocks.
  bool listen_after_bind();

  void stop();
  bool running() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace copath
