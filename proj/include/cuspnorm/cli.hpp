#pragma once

// The command-line front end as a library call, so the binary, the tests and
// the Python module share one dispatcher.

#include <string>
#include <vector>

#include "cuspnorm/json_io.hpp"

namespace cuspnorm::cli {

struct CommandResult {
  std::string command;
  json_io::json inputs = json_io::json::object();
  json_io::json payload;       // null on error
  std::string output;          // what goes to stdout
  std::string log;             // what goes to stderr
  int exit_code = 0;           // 0 ok, 1 domain error, 2 usage error
  double timing_ms = 0;
};

/// argv[0] is the program name.
CommandResult run(const std::vector<std::string>& argv);

/// Text rendering of a derivation report, one line per step.
std::string render_text(const DerivationReport& r);

}  // namespace cuspnorm::cli
