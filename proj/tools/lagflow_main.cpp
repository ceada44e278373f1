#include <iostream>

#include "CLI11.hpp"
#include "lagflow/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian mean curvature flow of area-preserving torus maps"};
  app.require_subcommand(1);

  std::string config, snapshot;

  auto* run = app.add_subcommand("run", "integrate the flow described by a config file");
  run->add_option("config", config, "JSON config")->required();

  auto* verify = app.add_subcommand("verify", "run the randomized property suites");
  verify->add_option("config", config, "JSON config (uses seed and out_dir)")->required();
  std::size_t samples = 1'000'000;
  verify->add_option("--samples", samples, "samples for the inequality suites");

  auto* resume = app.add_subcommand("resume", "continue a run from a snapshot");
  resume->add_option("snapshot", snapshot, "snapshot file")->required();
  resume->add_option("config", config, "JSON config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lagflow::kExitBadInput;
  }

  try {
    if (*run) return lagflow::cmd_run(config, std::cerr);
    if (*resume) return lagflow::cmd_resume(snapshot, config, std::cerr);
    lagflow::VerifyOptions opt;
    opt.inequality_samples = samples;
    return lagflow::cmd_verify(config, std::cerr, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lagflow::kExitBadInput;
  }
}
