#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "copath/model.hpp"
#include "copath/smt_encoding.hpp"

namespace copath {

/// An SMT-LIB 2 process that reads a script on stdin and answers on stdout.
struct BackendConfig {
  std::vector<std::string> command;
  double timeout_seconds = 60.0;
  /// Whether the backend understands `(maximize ...)`. When false the
  /// objective is maximised by bound tightening over satisfaction queries.
  bool supports_maximize = true;
};

inline constexpr const char* kBackendEnv = "COPATH_BACKEND";
inline constexpr const char* kDefaultBackend = "z3 -in";

/// Backend from `command` (shell-style words), or from COPATH_BACKEND, or
/// the default z3 invocation when both are empty.
BackendConfig make_backend(const std::string& command = "",
                           double timeout_seconds = 60.0,
                           bool supports_maximize = true);

enum class Verdict { sat, unsat, unknown, timeout, backend_error };

const char* to_string(Verdict verdict);

using ModelValue = std::variant<bool, std::int64_t>;

struct SolveOutcome {
  Verdict verdict = Verdict::backend_error;
  std::map<std::string, ModelValue> values;  // filled only when sat
  std::string raw_transcript;
  std::string message;  // backend error text, if any
};

/// Interprets a solver transcript. The first sat/unsat/unknown answer is the
/// verdict; get-value responses after a sat answer become `values`.
SolveOutcome parse_transcript(std::string_view transcript, int exit_code = 0);

SolveOutcome run_text(const BackendConfig& config, std::string_view script);
SolveOutcome run_artifact(const BackendConfig& config,
                          const SmtArtifact& artifact);

/// Turns a sat model of a full encoding back into a Solution, recomputing
/// the objective natively. Throws ModelMismatch when the two disagree.
Solution extract_solution(const Instance& instance, const SolveOutcome& outcome,
                          const SmtArtifact& artifact);

struct SolveStats {
  int solver_runs = 0;
  bool used_native_maximize = false;
  Score initial_objective = 0;
  ObjectiveBounds bounds;
};

/// Optimal Solution of a valid instance. Throws SolverTimeout, BackendError,
/// or InternalError if the base encoding turns out unsat.
Solution solve_maximize(const BackendConfig& config, const Instance& instance,
                        SolveStats* stats = nullptr);

struct EquivalenceResult {
  enum class Kind { equivalent, counterexample, inconclusive };
  Kind kind = Kind::inconclusive;
  /// Separating selection, present for counterexamples.
  std::map<NodeId, bool> selection;
  std::string detail;
};

const char* to_string(EquivalenceResult::Kind kind);

EquivalenceResult check_equivalence(const BackendConfig& config,
                                    std::span<const PathwayGraph> graphs,
                                    const EfficientOptions& options = {});

}  // namespace copath
