// gibbs-lab <experiment> [--config FILE] [--seed S] [--out DIR] [--n N]
//           [--temperature T] [--membrane-speed V] [--mode M]
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>

#include "gibbs/errors.hpp"
#include "gibbs/harness/output.hpp"
#include "gibbs/harness/run.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace gibbs::harness;

  CLI::App app{"Entropy-of-mixing and particle-identity experiments"};
  std::string experiment;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::int64_t> n;
  std::optional<double> temperature;
  std::optional<double> membrane_speed;
  std::optional<std::string> mode;

  std::string names;
  for (auto e : experiment_names()) names += (names.empty() ? "" : ", ") + std::string(e);
  app.add_option("experiment", experiment, "one of: " + names)->required();
  app.add_option("--config", config_path, "JSON config file (defaults are used without one)");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out, "output directory");
  app.add_option("--n", n, "particles per side");
  app.add_option("--temperature", temperature, "bath temperature kT");
  app.add_option("--membrane-speed", membrane_speed, "membrane speed");
  app.add_option("--mode", mode, "mixing mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  ExperimentConfig config;
  try {
    const Experiment e = require_experiment(experiment);
    if (config_path.empty()) {
      config = default_config(e);
    } else {
      config = load_config(config_path);
      if (config.experiment != e) {
        throw gibbs::ConfigError("config file describes experiment '" + std::string(to_string(config.experiment)) +
                                 "' but '" + experiment + "' was requested");
      }
    }
    if (seed) set_parameter(config, "seed", *seed);
    if (n) set_parameter(config, "n", *n);
    if (temperature) set_parameter(config, "temperature", *temperature);
    if (membrane_speed) set_parameter(config, "membrane_speed", *membrane_speed);
    if (mode) set_parameter(config, "mode", *mode);
    if (out) config.output_dir = *out;
  } catch (const gibbs::Error& e) {
    std::cerr << "gibbs-lab: config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const RunReport report = run(config);
    std::cout << report.summary.dump(2) << '\n';
    std::cout << "output: " << config.output_dir.string() << '\n';
    std::cout << "wall_time: " << format_number(report.wall_time) << " s\n";
  } catch (const gibbs::ConfigError& e) {
    std::cerr << "gibbs-lab: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "gibbs-lab: error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
