#pragma once

#include <chrono>
#include <optional>
#include <string>

namespace asuq {

struct ProcessResult {
  int exit_code = -1;   // -1 when the child did not exit normally
  int term_signal = 0;  // nonzero when killed by a signal
  bool timed_out = false;
  std::string out;
  std::string err;

  bool ok() const noexcept { return exit_code == 0 && !timed_out; }
};

/// Runs `/bin/sh -c command`, feeds `input` on stdin, and collects stdout
/// and stderr. On timeout the child is killed with SIGKILL.
ProcessResult run_process(const std::string& command, const std::string& input,
                          std::optional<std::chrono::milliseconds> timeout = std::nullopt);

// Whether the first word of a shell command names an executable file (directly or on $PATH).
bool command_available(const std::string& command);

}  // namespace asuq
