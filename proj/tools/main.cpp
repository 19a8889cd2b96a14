#include <iostream>

#include <CLI11.hpp>

#include "mstore/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"location-aware multi-store ORM harness"};
  app.require_subcommand(1);

  std::string schema_path;
  auto* validate = app.add_subcommand("validate", "check a schema file");
  validate->add_option("schema", schema_path, "schema JSON file")->required();

  std::string script_path;
  std::string report_path;
  bool wall_clock = false;
  auto* run = app.add_subcommand("run", "replay a workload script");
  run->add_option("script", script_path, "workload script JSON file")->required();
  run->add_option("--report", report_path, "write the report here instead of stdout");
  run->add_flag("--measure-wall-clock", wall_clock,
                "use real operation timing instead of the script's injected delays");

  std::string explain_script;
  std::string entity;
  std::int64_t payload = 0;
  auto* explain = app.add_subcommand("explain", "score stores for placing an entity");
  explain->add_option("script", explain_script, "workload script JSON file")->required();
  explain->add_option("--entity", entity, "entity to place")->required();
  explain->add_option("--payload", payload, "payload size in bytes")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return mstore::harness::kExitInput;
  }

  if (validate->parsed()) return mstore::harness::cmd_validate(schema_path, std::cout);
  if (run->parsed()) {
    std::optional<std::string> report;
    if (!report_path.empty()) report = report_path;
    return mstore::harness::cmd_run(script_path, report, wall_clock, std::cout, std::cerr);
  }
  return mstore::harness::cmd_explain(explain_script, entity, payload, std::cout, std::cerr);
}
