#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "coringlab/instance.hpp"
#include "coringlab/report.hpp"

namespace {

coringlab::Index width_from_env() {
  const char* cols = std::getenv("COLUMNS");
  if (cols == nullptr || *cols == '\0') return 80;
  char* end = nullptr;
  const long parsed = std::strtol(cols, &end, 10);
  if (end == cols || parsed <= 0) return 80;
  return static_cast<coringlab::Index>(parsed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coring-lab: exact corings with a grouplike element"};
  app.require_subcommand(1);

  std::string file;
  long max_degree = 2;
  bool reduced = false;
  std::string module_name;
  bool as_json = false;
  bool timings = false;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "instance description (JSON)")->required();
    cmd->add_option("--max-degree", max_degree, "highest cohomology degree to report")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--reduced", reduced, "use the reduced complex");
    cmd->add_option("--module", module_name, "restrict to one bundled module");
    cmd->add_flag("--json", as_json, "write the report as JSON on stdout");
    cmd->add_flag("--timings", timings, "write wall-clock timings on stderr");
  };

  CLI::App* validate = app.add_subcommand("validate", "check every bundled structure");
  CLI::App* cohomology = app.add_subcommand("cohomology", "dimensions of the Amitsur cohomology");
  CLI::App* galois = app.add_subcommand("galois", "canonical comparison map and its certificates");
  CLI::App* connections = app.add_subcommand("connections", "connections on the bundled modules");
  CLI::App* report = app.add_subcommand("report", "all of the above in one run");
  for (CLI::App* cmd : {validate, cohomology, galois, connections, report}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // flag/usage problems are input errors
  }

  coringlab::ReportOptions opt;
  opt.max_degree = static_cast<coringlab::Index>(max_degree);
  opt.reduced = reduced;
  opt.module_name = module_name;
  opt.width = width_from_env();

  try {
    const auto t0 = std::chrono::steady_clock::now();
    const coringlab::Instance inst = coringlab::parse_instance_file(file);
    coringlab::CommandResult res;
    if (validate->parsed()) {
      res = coringlab::cmd_validate(inst, opt);
    } else if (cohomology->parsed()) {
      res = coringlab::cmd_cohomology(inst, opt);
    } else if (galois->parsed()) {
      res = coringlab::cmd_galois(inst, opt);
    } else if (connections->parsed()) {
      res = coringlab::cmd_connections(inst, opt);
    } else {
      res = coringlab::cmd_report(inst, opt);
    }
    std::cout << (as_json ? res.json : res.text);
    if (timings) {
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
      std::cerr << "wall time: " << ms << " ms\n";
    }
    return res.exit_code;
  } catch (const coringlab::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const coringlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
