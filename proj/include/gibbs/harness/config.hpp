#pragma once

// Experiment configuration files.
//
//   {
//     "experiment": "mix-reversible",
//     "output_dir": "runs/mix",
//     "parameters": { "n": 1000, "mode": "SameGas-ByOrigin" }
//   }
//
// Every experiment has a fixed parameter table. Missing parameters take
// their defaults, unknown keys and wrongly typed values are rejected.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace gibbs::harness {

using Json = nlohmann::ordered_json;

enum class Experiment {
  MixReversible,
  Unmix,
  MixIrreversible,
  CountSweep,
  StatisticsSweep,
  Ehrenfest,
  Decompose,
  Orthogonality,
};

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);
const std::vector<std::string_view>& experiment_names();

/// Throws ConfigError listing the valid names.
Experiment require_experiment(std::string_view name);

struct ExperimentConfig {
  Experiment experiment = Experiment::MixReversible;
  std::filesystem::path output_dir;
  Json parameters;  ///< fully resolved: every key of the experiment's table is present
};

/// Default parameter table of an experiment.
Json default_parameters(Experiment e);

ExperimentConfig default_config(Experiment e);

/// Parses and resolves a config document. Syntax errors name line and column
/// of `source`, semantic errors name the offending key.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");

ExperimentConfig load_config(const std::filesystem::path& path);

/// Sets `parameters[key] = value` after checking key and type against the
/// experiment's table.
void set_parameter(ExperimentConfig& config, std::string_view key, const Json& value);

/// Config as a document that parse_config accepts and resolves to itself.
Json to_json(const ExperimentConfig& config);

}  // namespace gibbs::harness
