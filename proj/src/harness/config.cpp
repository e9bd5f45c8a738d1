#include "gibbs/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gibbs/errors.hpp"
#include "gibbs/kinetics/processes.hpp"

namespace gibbs::harness {
namespace {

struct Entry {
  Experiment experiment;
  std::string_view name;
};

constexpr Entry kExperiments[] = {
    {Experiment::MixReversible, "mix-reversible"},
    {Experiment::Unmix, "unmix"},
    {Experiment::MixIrreversible, "mix-irreversible"},
    {Experiment::CountSweep, "count-sweep"},
    {Experiment::StatisticsSweep, "statistics-sweep"},
    {Experiment::Ehrenfest, "ehrenfest"},
    {Experiment::Decompose, "decompose"},
    {Experiment::Orthogonality, "orthogonality"},
};

Json grid(double x_min, double x_max, std::int64_t points) {
  return Json{{"x_min", x_min}, {"x_max", x_max}, {"points", points}};
}

Json gas_defaults() {
  return Json{{"n", 1000},          {"temperature", 1.0}, {"seed", 7}, {"height", 0.5},
              {"side_walls", "diffuse"}, {"workers", 1}};
}

Json membrane_defaults() {
  return Json{{"membrane_speed", 0.01}, {"thermostat_interval", 0.1}, {"quasi_static_ratio", 0.01}};
}

void merge(Json& into, const Json& from) {
  for (const auto& [k, v] : from.items()) into[k] = v;
}

std::string kind_of(const Json& v) {
  if (v.is_boolean()) return "boolean";
  if (v.is_number_integer()) return "integer";
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  if (v.is_object()) return "object";
  return "null";
}

// `value` must have the shape of `reference`; integers are accepted where a
// floating default stands.
void check_shape(const Json& reference, const Json& value, const std::string& key) {
  const std::string want = kind_of(reference);
  const std::string got = kind_of(value);
  if (want == "number" && got == "integer") return;
  if (want != got) throw ConfigError("parameter '" + key + "' must be " + want + ", got " + got);
  if (reference.is_object()) {
    for (const auto& [k, v] : value.items()) {
      if (!reference.contains(k)) throw ConfigError("unknown key '" + key + "." + k + "'");
      check_shape(reference[k], v, key + "." + k);
    }
  } else if (reference.is_array() && !reference.empty()) {
    for (std::size_t i = 0; i < value.size(); ++i) check_shape(reference[0], value[i], key + "[" + std::to_string(i) + "]");
  }
}

std::string key_list(const Json& table) {
  std::string out;
  for (const auto& [k, v] : table.items()) out += (out.empty() ? "" : ", ") + k;
  return out;
}

void require(bool ok, std::string_view key, std::string_view what) {
  if (!ok) throw ConfigError("parameter '" + std::string(key) + "' " + std::string(what));
}

void check_positive(const Json& p, std::string_view key) {
  require(p.at(std::string(key)).get<double>() > 0.0, key, "must be positive");
}

void check_grid(const Json& p, std::string_view key) {
  const Json& g = p.at(std::string(key));
  const auto points = g.at("points").get<std::int64_t>();
  require(g.at("x_max").get<double>() > g.at("x_min").get<double>(), key, "needs x_max > x_min");
  require(points >= 256 && (points & (points - 1)) == 0, key, "needs points a power of two >= 256");
}

void validate(Experiment e, const Json& p) {
  switch (e) {
    case Experiment::MixReversible:
    case Experiment::Unmix:
    case Experiment::MixIrreversible: {
      require(p.at("n").get<std::int64_t>() >= 1, "n", "must be >= 1");
      check_positive(p, "temperature");
      check_positive(p, "height");
      require(p.at("workers").get<std::int64_t>() >= 1, "workers", "must be >= 1");
      const std::string walls = p.at("side_walls").get<std::string>();
      require(walls == "diffuse" || walls == "specular", "side_walls", "must be \"diffuse\" or \"specular\"");
      if (e == Experiment::MixIrreversible) {
        const std::string gases = p.at("gases").get<std::string>();
        require(gases == "same" || gases == "different", "gases", "must be \"same\" or \"different\"");
        require(p.at("membranes").empty(), "membranes", "must be empty: irreversible mixing has static walls only");
        for (auto key : {"sample_interval", "window", "tolerance", "max_time"}) check_positive(p, key);
        require(p.at("bins").get<std::int64_t>() >= 1, "bins", "must be >= 1");
        break;
      }
      for (auto key : {"membrane_speed", "thermostat_interval", "quasi_static_ratio"}) check_positive(p, key);
      if (e == Experiment::MixReversible) {
        require(kinetics::parse_mixing_mode(p.at("mode").get<std::string>()).has_value(), "mode",
                "must be one of DifferentGases-BySpecies, SameGas-ByOrigin, SameGas-BySpecies");
      } else {
        const std::string premix = p.at("premix").get<std::string>();
        require(premix == "reversible" || premix == "irreversible", "premix",
                "must be \"reversible\" or \"irreversible\"");
      }
      break;
    }
    case Experiment::CountSweep:
      require(!p.at("n_values").empty(), "n_values", "must not be empty");
      for (const Json& v : p.at("n_values")) require(v.get<std::int64_t>() >= 1, "n_values", "entries must be >= 1");
      require(p.at("per_particle_states").get<double>() >= 1.0, "per_particle_states", "must be >= 1");
      break;
    case Experiment::StatisticsSweep:
      for (auto key : {"m_values", "n_values"}) {
        require(!p.at(key).empty(), key, "must not be empty");
        for (const Json& v : p.at(key)) require(v.get<std::int64_t>() >= 1, key, "entries must be >= 1");
      }
      break;
    case Experiment::Ehrenfest: {
      const std::string pot = p.at("potential").get<std::string>();
      require(pot == "harmonic" || pot == "free", "potential", "must be \"harmonic\" or \"free\"");
      for (auto key : {"omega", "mass", "sigma", "t_max"}) check_positive(p, key);
      require(p.at("samples").get<std::int64_t>() >= 5, "samples", "must be >= 5");
      require(p.at("steps_per_sample").get<std::int64_t>() >= 1, "steps_per_sample", "must be >= 1");
      check_grid(p, "grid");
      break;
    }
    case Experiment::Decompose: {
      const std::string sym = p.at("symmetry").get<std::string>();
      require(sym == "bose" || sym == "fermi", "symmetry", "must be \"bose\" or \"fermi\"");
      check_positive(p, "sigma");
      require(p.at("separation").get<double>() >= 0.0, "separation", "must be >= 0");
      for (auto key : {"epsilon_support", "epsilon_reconstruct"}) {
        const double v = p.at(key).get<double>();
        require(v > 0.0 && v < 1.0, key, "must lie in (0, 1)");
      }
      require(p.at("perturbed_starts").get<std::int64_t>() >= 0, "perturbed_starts", "must be >= 0");
      check_grid(p, "grid");
      break;
    }
    case Experiment::Orthogonality:
      check_positive(p, "sigma");
      check_positive(p, "separation");
      require(p.at("t").get<double>() >= 0.0, "t", "must be >= 0");
      require(p.at("steps").get<std::int64_t>() >= 1, "steps", "must be >= 1");
      check_grid(p, "grid");
      break;
  }
}

std::string position_text(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

std::string_view to_string(Experiment e) {
  for (const Entry& x : kExperiments) {
    if (x.experiment == e) return x.name;
  }
  return "?";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const Entry& x : kExperiments) {
    if (x.name == name) return x.experiment;
  }
  return std::nullopt;
}

const std::vector<std::string_view>& experiment_names() {
  static const std::vector<std::string_view> names = [] {
    std::vector<std::string_view> v;
    for (const Entry& x : kExperiments) v.push_back(x.name);
    return v;
  }();
  return names;
}

Experiment require_experiment(std::string_view name) {
  if (auto e = parse_experiment(name)) return *e;
  std::string valid;
  for (auto n : experiment_names()) valid += (valid.empty() ? "" : ", ") + std::string(n);
  throw ConfigError("unknown experiment '" + std::string(name) + "'; valid experiments: " + valid);
}

Json default_parameters(Experiment e) {
  Json p;
  switch (e) {
    case Experiment::MixReversible:
      p = gas_defaults();
      merge(p, membrane_defaults());
      p["mode"] = "DifferentGases-BySpecies";
      break;
    case Experiment::Unmix:
      p = gas_defaults();
      merge(p, membrane_defaults());
      p["premix"] = "reversible";
      break;
    case Experiment::MixIrreversible:
      p = gas_defaults();
      p["gases"] = "different";
      p["membranes"] = Json::array();
      p["sample_interval"] = 0.1;
      p["window"] = 10.0;
      p["tolerance"] = 0.02;
      p["max_time"] = 500.0;
      p["bins"] = 20;
      break;
    case Experiment::CountSweep:
      p = Json{{"n_values", {10, 100, 1000}}, {"per_particle_states", 1.0e6}};
      break;
    case Experiment::StatisticsSweep:
      p = Json{{"m_values", {2, 4, 6, 10, 100, 1000, 1000000}}, {"n_values", {1, 2, 3, 4, 10}}};
      break;
    case Experiment::Ehrenfest:
      p = Json{{"potential", "harmonic"},
               {"omega", 1.0},
               {"mass", 1.0},
               {"x0", 2.0},
               {"p0", 0.0},
               {"sigma", 1.0},
               {"t_max", 2.0 * std::numbers::pi},
               {"samples", 1001},
               {"steps_per_sample", 4},
               {"grid", grid(-20.0, 20.0, 1024)}};
      break;
    case Experiment::Decompose:
      p = Json{{"separation", 12.0},
               {"sigma", 1.0},
               {"symmetry", "bose"},
               {"epsilon_support", 1e-6},
               {"epsilon_reconstruct", 1e-6},
               {"perturbed_starts", 10},
               {"seed", 7},
               {"grid", grid(-30.0, 30.0, 1024)}};
      break;
    case Experiment::Orthogonality:
      p = Json{{"separation", 16.0}, {"momentum", 5.0}, {"sigma", 1.0},
               {"t", 1.6},           {"steps", 1},       {"grid", grid(-30.0, 30.0, 2048)}};
      break;
  }
  return p;
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.output_dir = std::filesystem::path("runs") / std::string(to_string(e));
  c.parameters = default_parameters(e);
  return c;
}

void set_parameter(ExperimentConfig& config, std::string_view key, const Json& value) {
  const Json table = default_parameters(config.experiment);
  const std::string k(key);
  if (!table.contains(k)) {
    throw ConfigError("unknown parameter '" + k + "' for experiment " + std::string(to_string(config.experiment)) +
                      "; valid parameters: " + key_list(table));
  }
  check_shape(table[k], value, k);
  if (table[k].is_object()) {
    for (const auto& [sub, v] : value.items()) config.parameters[k][sub] = v;
  } else {
    config.parameters[k] = value;
  }
  validate(config.experiment, config.parameters);
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::string what = e.what();
    if (auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigError(std::string(source) + ": " + position_text(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + what);
  }
  auto fail = [&](const std::string& msg) { throw ConfigError(std::string(source) + ": " + msg); };
  if (!doc.is_object()) fail("top level must be an object");
  for (const auto& [k, v] : doc.items()) {
    if (k != "experiment" && k != "output_dir" && k != "parameters") {
      fail("unknown key '" + k + "'; valid keys: experiment, output_dir, parameters");
    }
  }
  if (!doc.contains("experiment") || !doc["experiment"].is_string()) fail("'experiment' must be a string");

  ExperimentConfig config;
  try {
    config = default_config(require_experiment(doc["experiment"].get<std::string>()));
    if (doc.contains("output_dir")) {
      if (!doc["output_dir"].is_string()) fail("'output_dir' must be a string");
      config.output_dir = doc["output_dir"].get<std::string>();
    }
    if (doc.contains("parameters")) {
      if (!doc["parameters"].is_object()) fail("'parameters' must be an object");
      for (const auto& [k, v] : doc["parameters"].items()) set_parameter(config, k, v);
    }
    validate(config.experiment, config.parameters);
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind(std::string(source) + ":", 0) == 0) throw;
    fail(what);
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

Json to_json(const ExperimentConfig& config) {
  return Json{{"experiment", std::string(to_string(config.experiment))},
              {"output_dir", config.output_dir.generic_string()},
              {"parameters", config.parameters}};
}

}  // namespace gibbs::harness
