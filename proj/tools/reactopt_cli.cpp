// Command-line front end: one JSON config document per run, one
// subcommand per mode. Exit codes: 0 ok/converged, 1 error, 2 finished
// without converging.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "reactopt/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Two-species reactor design toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;

  auto add_mode = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("config", config_path, "JSON config file")->required();
    sub->add_option("--output-dir", output_override,
                    "overrides the config's output_dir");
    return sub;
  };
  CLI::App* solve = add_mode("solve", "solve the state for a fixed design");
  CLI::App* optimize = add_mode("optimize", "run the phase-field design evolution");
  CLI::App* relaxed = add_mode("relaxed-map", "export relaxed-density maps");
  CLI::App* validate = add_mode("validate1d", "run the 1D flux-condition checks");

  CLI11_PARSE(app, argc, argv);

  try {
    reactopt::RunConfig config = reactopt::load_run_config_file(config_path);
    reactopt::Mode mode = config.mode;
    if (solve->parsed()) mode = reactopt::Mode::Solve;
    if (optimize->parsed()) mode = reactopt::Mode::Optimize;
    if (relaxed->parsed()) mode = reactopt::Mode::RelaxedMap;
    if (validate->parsed()) mode = reactopt::Mode::Validate1d;
    config.mode = mode;
    if (!output_override.empty()) config.output_dir = output_override;
    return reactopt::run_command(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return reactopt::kExitError;
  }
}
