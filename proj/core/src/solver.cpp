#include "copath/solver.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "copath/process.hpp"
#include "copath/sexpr.hpp"

namespace copath {

BackendConfig make_backend(const std::string& command, double timeout_seconds,
                           bool supports_maximize) {
  std::string cmd = command;
  if (cmd.empty()) {
    const char* env = std::getenv(kBackendEnv);
    cmd = env && *env ? env : kDefaultBackend;
  }
  BackendConfig config;
  config.command = split_command(cmd);
  config.timeout_seconds = timeout_seconds;
  config.supports_maximize = supports_maximize;
  return config;
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::sat: return "sat";
    case Verdict::unsat: return "unsat";
    case Verdict::unknown: return "unknown";
    case Verdict::timeout: return "timeout";
    case Verdict::backend_error: return "backend_error";
  }
  return "?";
}

const char* to_string(EquivalenceResult::Kind kind) {
  switch (kind) {
    case EquivalenceResult::Kind::equivalent: return "equivalent";
    case EquivalenceResult::Kind::counterexample: return "counterexample";
    case EquivalenceResult::Kind::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

bool parse_int(const std::string& text, std::int64_t& out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

/// true/false, a numeral, or (- numeral).
bool parse_value(const Sexpr& e, ModelValue& out) {
  if (!e.is_list) {
    if (e.atom == "true") { out = true; return true; }
    if (e.atom == "false") { out = false; return true; }
    std::int64_t v;
    if (parse_int(e.atom, v)) { out = v; return true; }
    return false;
  }
  if (e.items.size() == 2 && e.items[0].is_atom("-") && !e.items[1].is_list) {
    std::int64_t v;
    if (parse_int(e.items[1].atom, v)) { out = -v; return true; }
  }
  return false;
}

bool is_error(const Sexpr& e) {
  return e.is_list && !e.items.empty() && e.items[0].is_atom("error");
}

std::string error_text(const Sexpr& e) {
  return e.items.size() > 1 ? e.items[1].atom : to_string(e);
}

}  // namespace

SolveOutcome parse_transcript(std::string_view transcript, int exit_code) {
  SolveOutcome outcome;
  outcome.raw_transcript = std::string(transcript);

  std::vector<Sexpr> items;
  try {
    items = parse_sexprs(transcript);
  } catch (const ParseError& e) {
    outcome.verdict = Verdict::backend_error;
    outcome.message = "unparseable solver output (exit " +
                      std::to_string(exit_code) + "): " + e.reason();
    return outcome;
  }

  bool have_verdict = false;
  for (const auto& item : items) {
    if (!have_verdict) {
      if (is_error(item)) {
        outcome.message += (outcome.message.empty() ? "" : "; ") + error_text(item);
        continue;
      }
      if (item.is_atom("sat") || item.is_atom("unsat") || item.is_atom("unknown")) {
        outcome.verdict = item.atom == "sat"     ? Verdict::sat
                          : item.atom == "unsat" ? Verdict::unsat
                                                 : Verdict::unknown;
        have_verdict = true;
      }
      continue;
    }
    // After the verdict: model values, or errors we only care about when sat
    // (e.g. "model is not available" after unsat is expected).
    if (is_error(item)) {
      if (outcome.verdict == Verdict::sat)
        outcome.message += (outcome.message.empty() ? "" : "; ") + error_text(item);
      continue;
    }
    if (outcome.verdict != Verdict::sat || !item.is_list) continue;
    for (const auto& binding : item.items) {
      if (!binding.is_list || binding.items.size() != 2 || binding.items[0].is_list)
        continue;
      ModelValue v;
      if (parse_value(binding.items[1], v)) outcome.values[binding.items[0].atom] = v;
    }
  }

  if (!have_verdict) {
    outcome.verdict = Verdict::backend_error;
    if (outcome.message.empty())
      outcome.message = "solver produced no verdict (exit " +
                        std::to_string(exit_code) + ")";
    return outcome;
  }
  if (!outcome.message.empty() && outcome.verdict != Verdict::unsat) {
    // An error before the answer means the solver did not see the script we
    // meant to send; do not trust the verdict.
    bool error_before = false;
    for (const auto& item : items) {
      if (item.is_atom("sat") || item.is_atom("unsat") || item.is_atom("unknown")) break;
      if (is_error(item)) error_before = true;
    }
    if (error_before) outcome.verdict = Verdict::backend_error;
  }
  return outcome;
}

SolveOutcome run_text(const BackendConfig& config, std::string_view script) {
  auto timeout = std::chrono::milliseconds(
      static_cast<std::int64_t>(std::ceil(config.timeout_seconds * 1000.0)));
  ProcessResult proc = run_process(config.command, script, timeout);
  if (proc.launch_failed) {
    SolveOutcome out;
    out.verdict = Verdict::backend_error;
    out.message = proc.err;
    return out;
  }
  if (proc.timed_out) {
    SolveOutcome out;
    out.verdict = Verdict::timeout;
    out.raw_transcript = proc.out;
    out.message = "solver exceeded " + std::to_string(config.timeout_seconds) + " s";
    return out;
  }
  SolveOutcome out = parse_transcript(proc.out, proc.exit_code);
  if (out.verdict == Verdict::backend_error && !proc.err.empty())
    out.message += " [stderr: " + proc.err + "]";
  return out;
}

SolveOutcome run_artifact(const BackendConfig& config,
                          const SmtArtifact& artifact) {
  return run_text(config, artifact.text);
}

namespace {

template <class T>
const T* value_as(const SolveOutcome& outcome, const std::string& name) {
  auto it = outcome.values.find(name);
  if (it == outcome.values.end()) return nullptr;
  return std::get_if<T>(&it->second);
}

}  // namespace

Solution extract_solution(const Instance& instance, const SolveOutcome& outcome,
                          const SmtArtifact& artifact) {
  if (outcome.verdict != Verdict::sat)
    throw InternalError(std::string("cannot extract a solution from a ") +
                        to_string(outcome.verdict) + " outcome");
  Assignment a;
  for (const auto& [name, entity] : artifact.var_map) {
    if (entity.role != VarRole::node) continue;
    const bool* on = value_as<bool>(outcome, name);
    if (!on) throw ModelMismatch("model lacks a value for " + name);
    if (!*on) continue;
    const NodeId& id = entity.node;
    a.executed.insert(id);
    const std::int64_t* clock = value_as<std::int64_t>(outcome, clock_var(id));
    const std::int64_t* label = value_as<std::int64_t>(outcome, label_var(id));
    if (!clock || !label)
      throw ModelMismatch("model lacks clock or label of executed node " + id);
    if (*label < 0 || static_cast<std::size_t>(*label) >= artifact.label_order.size())
      throw ModelMismatch("label of " + id + " is out of range");
    a.clock[id] = *clock;
    a.choice[id] = artifact.label_order[static_cast<std::size_t>(*label)];
  }
  const std::int64_t* obj = value_as<std::int64_t>(outcome, kObjectiveVar);
  if (!obj) throw ModelMismatch("model lacks the objective value");

  Solution s;
  try {
    s = make_solution(instance, std::move(a));
  } catch (const UnassignedNode& e) {
    throw ModelMismatch(std::string("model violates choice domains: ") + e.what());
  }
  if (s.objective != *obj)
    throw ModelMismatch("solver objective " + std::to_string(*obj) +
                        " differs from recomputed " + std::to_string(s.objective));
  return s;
}

namespace {

SolveOutcome run_checked(const BackendConfig& config, const SmtArtifact& art,
                         SolveStats& stats) {
  SolveOutcome out = run_artifact(config, art);
  ++stats.solver_runs;
  switch (out.verdict) {
    case Verdict::timeout: throw SolverTimeout(out.message);
    case Verdict::backend_error: throw BackendError(out.message);
    case Verdict::unknown: throw BackendError("solver answered unknown");
    default: break;
  }
  return out;
}

}  // namespace

Solution solve_maximize(const BackendConfig& config, const Instance& instance,
                        SolveStats* stats_out) {
  require_valid(instance);
  SolveStats stats;

  if (config.supports_maximize) {
    stats.used_native_maximize = true;
    SmtArtifact art = encode_full(instance, MaximizeStrategy::native_maximize);
    SolveOutcome out = run_checked(config, art, stats);
    if (out.verdict == Verdict::unsat)
      throw InternalError("encoding of a valid instance is unsat");
    Solution s = extract_solution(instance, out, art);
    stats.initial_objective = s.objective;
    if (stats_out) *stats_out = stats;
    return s;
  }

  FullEncodingOptions opts;
  opts.strategy = MaximizeStrategy::satisfaction_only;
  SmtArtifact art = encode_full(instance, opts);
  SolveOutcome out = run_checked(config, art, stats);
  if (out.verdict == Verdict::unsat)
    throw InternalError("encoding of a valid instance is unsat");
  Solution best = extract_solution(instance, out, art);
  stats.initial_objective = best.objective;
  stats.bounds = objective_bounds(instance);

  // Invariant: some model reaches `lo`; none reaches hi + 1.
  Score lo = best.objective;
  Score hi = stats.bounds.upper;
  while (lo < hi) {
    Score mid = lo + (hi - lo + 1) / 2;
    opts.min_objective = mid;
    art = encode_full(instance, opts);
    out = run_checked(config, art, stats);
    if (out.verdict == Verdict::sat) {
      best = extract_solution(instance, out, art);
      lo = best.objective;
    } else {
      hi = mid - 1;
    }
  }
  if (stats_out) *stats_out = stats;
  return best;
}

EquivalenceResult check_equivalence(const BackendConfig& config,
                                    std::span<const PathwayGraph> graphs,
                                    const EfficientOptions& options) {
  SmtArtifact art = encode_equivalence(graphs, options);
  std::string script = art.text;
  std::vector<std::string> selections;
  for (const auto& [name, entity] : art.var_map)
    if (entity.role == VarRole::selection) selections.push_back(name);
  if (!selections.empty()) {
    script += "(get-value (";
    for (std::size_t i = 0; i < selections.size(); ++i)
      script += (i ? " " : "") + selections[i];
    script += "))\n";
  }

  SolveOutcome out = run_text(config, script);
  EquivalenceResult result;
  switch (out.verdict) {
    case Verdict::unsat:
      result.kind = EquivalenceResult::Kind::equivalent;
      break;
    case Verdict::sat:
      result.kind = EquivalenceResult::Kind::counterexample;
      for (const auto& name : selections) {
        const bool* v = value_as<bool>(out, name);
        result.selection[art.var_map.at(name).node] = v ? *v : false;
      }
      break;
    case Verdict::unknown:
    case Verdict::timeout:
      result.kind = EquivalenceResult::Kind::inconclusive;
      result.detail = out.message.empty() ? to_string(out.verdict) : out.message;
      break;
    case Verdict::backend_error:
      throw BackendError(out.message);
  }
  return result;
}

}  // namespace copath
