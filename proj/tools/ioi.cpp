#include <CLI11.hpp>

#include <iostream>

#include "ioi/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Integrated post-data inference engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ioi::kEngineVersion));

  std::string run_config;
  std::optional<std::uint64_t> seed;
  std::string out;
  auto* run = app.add_subcommand("run", "Run the analysis described by a JSON config");
  run->add_option("config", run_config, "Analysis config (JSON)")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out, "Override the report path");

  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Check a config and its inputs");
  validate->add_option("config", validate_config, "Analysis config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ioi::kExitValidation;
  }

  if (run->parsed()) {
    ioi::RunOverrides overrides;
    overrides.seed = seed;
    if (!out.empty()) overrides.out = out;
    return ioi::run(run_config, overrides, std::cerr);
  }
  return ioi::validate(validate_config, std::cout, std::cerr);
}
