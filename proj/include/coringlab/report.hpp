#pragma once

#include <string>

#include "coringlab/instance.hpp"

namespace coringlab {

// Options shared by the report commands.  `max_degree` is the highest
// cohomology degree reported; `width` is the text-output width in columns,
// clamped to [40, 120].
struct ReportOptions {
  Index max_degree = 2;
  bool reduced = false;
  std::string module_name;  // restrict `connections` to one module
  Index width = 80;
};

// Outcome of one command: exit code 0 when every check passed, 1 when a
// mathematical check failed, 2 on input errors (e.g. an unknown module
// name); `text` is the human-readable rendering and `json` the
// machine-readable one.  Both renderings are deterministic functions of the
// instance and options.
struct CommandResult {
  int exit_code = 0;
  std::string text;
  std::string json;
};

CommandResult cmd_validate(const Instance& inst, const ReportOptions& opt);
CommandResult cmd_cohomology(const Instance& inst, const ReportOptions& opt);
CommandResult cmd_galois(const Instance& inst, const ReportOptions& opt);
CommandResult cmd_connections(const Instance& inst, const ReportOptions& opt);
CommandResult cmd_report(const Instance& inst, const ReportOptions& opt);

}  // namespace coringlab
