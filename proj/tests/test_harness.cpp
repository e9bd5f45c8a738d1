#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gibbs/errors.hpp"
#include "gibbs/harness/output.hpp"
#include "gibbs/harness/run.hpp"
#include "gibbs/microstate/counting.hpp"

using namespace gibbs::harness;
namespace fs = std::filesystem;
using gibbs::ConfigError;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "gibbs_lab_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Strict CSV reader: exact header, fixed width, every cell a full decimal
// number ('.' separator, no spaces) or "nan".
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Table read_csv(const fs::path& p, const std::vector<std::string>& header) {
  const std::string text = slurp(p);
  REQUIRE_FALSE(text.empty());
  REQUIRE(text.back() == '\n');
  std::istringstream in(text);
  std::string line;
  Table t;
  REQUIRE(std::getline(in, line));
  t.header = split(line);
  REQUIRE(t.header == header);
  while (std::getline(in, line)) {
    const auto cells = split(line);
    REQUIRE(cells.size() == header.size());
    std::vector<double> row;
    for (const auto& c : cells) {
      if (c == "nan") {
        row.push_back(std::nan(""));
        continue;
      }
      double v = 0.0;
      const auto [end, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      INFO("cell '" << c << "' in " << p.string());
      REQUIRE(ec == std::errc{});
      REQUIRE(end == c.data() + c.size());
      REQUIRE(c.find_first_of(" \t+") == std::string::npos);
      row.push_back(v);
    }
    t.rows.push_back(row);
  }
  return t;
}

ExperimentConfig small_mixing(const fs::path& out) {
  ExperimentConfig c = default_config(Experiment::MixReversible);
  c.output_dir = out;
  set_parameter(c, "n", 200);
  set_parameter(c, "membrane_speed", 0.04);
  set_parameter(c, "quasi_static_ratio", 0.05);
  return c;
}

int run_cli(const std::string& args, const fs::path& log) {
  const char* exe = std::getenv("GIBBS_LAB");
  REQUIRE(exe != nullptr);
  const std::string cmd = std::string(exe) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("experiment names") {
  CHECK(experiment_names().size() == 8);
  for (auto name : experiment_names()) CHECK(to_string(require_experiment(name)) == name);
  try {
    require_experiment("mix-reversable");
    FAIL("no error");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("mix-reversable") != std::string::npos);
    for (auto name : experiment_names()) CHECK(what.find(std::string(name)) != std::string::npos);
  }
}

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(R"({"experiment": "mix-reversible", "parameters": {"n": 50}})");
  CHECK(c.experiment == Experiment::MixReversible);
  CHECK(c.parameters["n"] == 50);
  CHECK(c.parameters["temperature"] == 1.0);
  CHECK(c.parameters["membrane_speed"] == 0.01);
  CHECK(c.parameters["mode"] == "DifferentGases-BySpecies");

  const ExperimentConfig back = parse_config(to_json(c).dump());
  CHECK(back.parameters == c.parameters);
  CHECK(back.output_dir == c.output_dir);

  auto message = [](const std::string& text) {
    try {
      parse_config(text, "cfg.json");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{\n  \"experiment\": \"unmix\",\n  \"parameters\": {\"n\": 10,}\n}").find("line 3") !=
        std::string::npos);
  CHECK(message(R"({"experiment": "unmix", "extra": 1})").find("'extra'") != std::string::npos);
  CHECK(message(R"({"experiment": "unmix", "parameters": {"nn": 1}})").find("'nn'") != std::string::npos);
  CHECK(message(R"({"experiment": "unmix", "parameters": {"n": "many"}})").find("'n'") != std::string::npos);
  CHECK(message(R"({"experiment": "unmix", "parameters": {"n": 1.5}})").find("'n'") != std::string::npos);
  CHECK(message(R"({"experiment": "unmix", "parameters": {"n": 0}})").find("'n'") != std::string::npos);
  CHECK(message(R"({"experiment": "mix-reversible", "parameters": {"mode": "Same"}})").find("'mode'") !=
        std::string::npos);
  CHECK(message(R"({"experiment": "mix-irreversible", "parameters": {"membranes": [{"x": 0.5}]}})")
            .find("'membranes'") != std::string::npos);
  CHECK(message(R"({"experiment": "ehrenfest", "parameters": {"grid": {"points": 1000}}})").find("'grid'") !=
        std::string::npos);
  CHECK(message(R"({"experiment": "ehrenfest", "parameters": {"grid": {"dx": 0.1}}})").find("grid.dx") !=
        std::string::npos);
  CHECK(message(R"({"experiment": "mix-reversable"})").find("valid experiments") != std::string::npos);
  CHECK(message(R"([1, 2])").find("object") != std::string::npos);

  // Integers are accepted for real-valued parameters; partial grids merge.
  const ExperimentConfig e =
      parse_config(R"({"experiment": "ehrenfest", "parameters": {"omega": 2, "grid": {"points": 2048}}})");
  CHECK(e.parameters["omega"].get<double>() == 2.0);
  CHECK(e.parameters["grid"]["points"] == 2048);
  CHECK(e.parameters["grid"]["x_min"] == -20.0);

  ExperimentConfig d = default_config(Experiment::CountSweep);
  CHECK_THROWS_AS(set_parameter(d, "n", 5), ConfigError);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 1386.2943611198905, 6.02e23, -1e-300, 5e-324}) {
    const std::string s = format_number(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
    CHECK(s.find(',') == std::string::npos);
  }
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(std::int64_t{-42}) == "-42");
}

TEST_CASE("count-sweep writes a strict CSV with ratios rising toward 1") {
  ExperimentConfig c = default_config(Experiment::CountSweep);
  c.output_dir = scratch("count");
  const RunReport r = run(c);
  const Table t = read_csv(c.output_dir / "counting.csv", {"N", "delta_S_exact", "delta_S_asymptotic", "ratio"});
  REQUIRE(t.rows.size() == 3);
  double prev = 0.0;
  for (const auto& row : t.rows) {
    CHECK(row[3] > prev);
    CHECK(row[3] < 1.0);
    CHECK(row[3] == doctest::Approx(row[1] / row[2]).epsilon(1e-15));
    CHECK(row[2] == 2.0 * gibbs::microstate::volume_doubling_delta(static_cast<std::int64_t>(row[0]), false, false));
    prev = row[3];
  }
  CHECK(fs::exists(c.output_dir / "summary.json"));
  CHECK(fs::exists(c.output_dir / "resolved_config.json"));
  CHECK(r.artifacts.size() == 3);
  CHECK(parse_config(slurp(c.output_dir / "resolved_config.json")).parameters == c.parameters);
}

TEST_CASE("statistics-sweep keeps n <= m") {
  ExperimentConfig c = default_config(Experiment::StatisticsSweep);
  c.output_dir = scratch("stats");
  run(c);
  const Table t = read_csv(c.output_dir / "statistics.csv", {"m", "n", "be_ratio", "fd_ratio"});
  CHECK_FALSE(t.rows.empty());
  for (const auto& row : t.rows) {
    CHECK(row[1] <= row[0]);
    CHECK(row[3] <= 1.0);
    CHECK(row[2] >= 1.0);
  }
}

TEST_CASE("mixing run: ledger, summary and byte-identical reruns") {
  const fs::path root = scratch("repro");
  const RunReport a = run(small_mixing(root / "a"));
  ExperimentConfig cb = small_mixing(root / "b");
  set_parameter(cb, "workers", 3);
  const RunReport b = run(cb);

  for (const char* f : {"ledger.csv", "summary.json"}) {
    CAPTURE(f);
    CHECK(slurp(root / "a" / f) == slurp(root / "b" / f));
  }
  const Table t = read_csv(root / "a" / "ledger.csv", {"time", "membrane_id", "pressure", "work_cum", "heat_cum"});
  CHECK_FALSE(t.rows.empty());
  const double theory = 2.0 * gibbs::microstate::volume_doubling_delta(200, false, false);
  CHECK(a.summary["delta_S_theory"].get<double>() == theory);
  CHECK(a.summary["delta_S"].get<double>() == t.rows.back()[4]);
  CHECK(a.summary["relative_error"].get<double>() ==
        std::abs(a.summary["delta_S"].get<double>() - theory) / theory);
  for (const char* key : {"delta_S", "delta_S_theory", "relative_error", "n", "temperature", "membrane_speed", "seed",
                          "theory_source"}) {
    CHECK(a.summary.contains(key));
  }
  CHECK(slurp(root / "a" / "summary.json").find("wall_time") == std::string::npos);
}

TEST_CASE("quantum experiments") {
  SUBCASE("ehrenfest") {
    ExperimentConfig c = default_config(Experiment::Ehrenfest);
    c.output_dir = scratch("ehrenfest");
    set_parameter(c, "samples", 201);
    const RunReport r = run(c);
    const Table t = read_csv(c.output_dir / "ehrenfest.csv", {"t", "x_mean", "p_mean", "F_mean", "residual"});
    CHECK(t.rows.size() == 201);
    CHECK(std::isnan(t.rows.front()[4]));
    CHECK(r.summary["max_x_error"].get<double>() <= 1e-4);
  }
  SUBCASE("decompose, found and not found") {
    ExperimentConfig c = default_config(Experiment::Decompose);
    c.output_dir = scratch("decompose");
    set_parameter(c, "perturbed_starts", 2);
    const RunReport r = run(c);
    const Json doc = Json::parse(slurp(c.output_dir / "decomposition.json"));
    REQUIRE(doc["decomposition"].is_object());
    CHECK(doc["decomposition"]["packets"].size() == 2);
    CHECK(doc["decomposition"]["packets"][0]["center"].get<double>() == doctest::Approx(-6.0).epsilon(1e-6));
    CHECK(r.summary["unique_across_starts"] == true);

    set_parameter(c, "separation", 1.0);
    run(c);
    CHECK(Json::parse(slurp(c.output_dir / "decomposition.json"))["decomposition"].is_null());
  }
  SUBCASE("orthogonality") {
    ExperimentConfig c = default_config(Experiment::Orthogonality);
    c.output_dir = scratch("orth");
    const RunReport r = run(c);
    CHECK(r.summary["support_overlap_final"].get<double>() >= 0.5);
    CHECK(r.summary["inner_product_final"].get<double>() <= 1e-8);
  }
}

TEST_CASE("run wraps library errors with the experiment name") {
  ExperimentConfig c = default_config(Experiment::MixIrreversible);
  c.output_dir = scratch("timeout");
  set_parameter(c, "n", 100);
  set_parameter(c, "max_time", 0.5);
  set_parameter(c, "window", 0.5);
  try {
    run(c);
    FAIL("no error");
  } catch (const gibbs::SimulationError& e) {
    CHECK(std::string(e.what()).find("mix-irreversible") != std::string::npos);
  }
}

TEST_CASE("command line") {
  const fs::path dir = scratch("cli");
  const fs::path log = dir / "log.txt";

  CHECK(run_cli("mix-reversable", log) == 1);
  CHECK(slurp(log).find("count-sweep") != std::string::npos);

  CHECK(run_cli("count-sweep --out " + (dir / "count").string(), log) == 0);
  CHECK(fs::exists(dir / "count" / "counting.csv"));
  CHECK(slurp(log).find("wall_time") != std::string::npos);

  std::ofstream(dir / "cfg.json") << R"({"experiment": "mix-reversible", "parameters": {"n": 100, "seed": 3,
    "membrane_speed": 0.04, "quasi_static_ratio": 0.05}})";
  CHECK(run_cli("mix-reversible --config " + (dir / "cfg.json").string() + " --n 150 --seed 9 --out " +
                    (dir / "mix").string(),
                log) == 0);
  const ExperimentConfig resolved = parse_config(slurp(dir / "mix" / "resolved_config.json"));
  CHECK(resolved.parameters["n"] == 150);
  CHECK(resolved.parameters["seed"] == 9);
  CHECK(resolved.parameters["membrane_speed"] == 0.04);

  CHECK(run_cli("unmix --config " + (dir / "cfg.json").string(), log) == 1);
  CHECK(run_cli("count-sweep --n 5", log) == 1);
  CHECK(run_cli("mix-reversible --membrane-speed 0.5 --out " + (dir / "fast").string(), log) == 1);

  std::ofstream(dir / "slow.json") << R"({"experiment": "mix-irreversible", "parameters": {"n": 100,
    "max_time": 0.5, "window": 0.5}})";
  CHECK(run_cli("mix-irreversible --config " + (dir / "slow.json").string() + " --out " + (dir / "slow").string(),
                log) == 2);
  CHECK(slurp(log).find("did not equilibrate") != std::string::npos);
}
