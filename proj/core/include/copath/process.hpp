#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace copath {

struct ProcessResult {
  int exit_code = -1;     // -1 when killed or never started
  bool timed_out = false;
  bool launch_failed = false;
  std::string out;
  std::string err;
};

/// Runs argv[0] (PATH lookup) with `input` on stdin and collects stdout and
/// stderr. The child's whole process group is killed at the deadline.
ProcessResult run_process(const std::vector<std::string>& argv,
                          std::string_view input,
                          std::chrono::milliseconds timeout);

/// Shell-style word splitting without command substitution.
std::vector<std::string> split_command(const std::string& command);

}  // namespace copath
