#include "gibbs/harness/run.hpp"

#include <chrono>
#include <cmath>
#include <complex>

#include "gibbs/errors.hpp"
#include "gibbs/harness/output.hpp"
#include "gibbs/kinetics/processes.hpp"
#include "gibbs/microstate/counting.hpp"
#include "gibbs/quantum/decomposition.hpp"
#include "gibbs/quantum/dynamics.hpp"
#include "gibbs/rng.hpp"

namespace gibbs::harness {
namespace {

namespace fs = std::filesystem;
namespace kin = gibbs::kinetics;
namespace ms = gibbs::microstate;
namespace qm = gibbs::quantum;

// Seed splitting for the harness: the gas is initialised from stream 1 of
// the master seed, optimizer start k of the decomposition uses stream 100 + k.
constexpr std::uint64_t kGasStream = 1;
constexpr std::uint64_t kDecompositionStream = 100;

struct Context {
  const ExperimentConfig& config;
  const Json& p;
  RunReport& report;

  fs::path file(const std::string& name) {
    report.artifacts.push_back(config.output_dir / name);
    return report.artifacts.back();
  }
};

std::string num(double v) { return format_number(v); }
std::string num(std::int64_t v) { return format_number(v); }

kin::SimState make_gas(const Json& p, kin::Species left, kin::Species right) {
  kin::InitOptions init;
  init.height = p.at("height").get<double>();
  init.side_walls = p.at("side_walls").get<std::string>() == "specular" ? kin::SideWalls::Specular
                                                                        : kin::SideWalls::Diffuse;
  const auto n = p.at("n").get<std::int64_t>();
  const auto seed = derive_seed(p.at("seed").get<std::uint64_t>(), kGasStream);
  return kin::init_gas(n, n, left, right, p.at("temperature").get<double>(), seed, init);
}

kin::ProcessOptions process_options(const Json& p) {
  kin::ProcessOptions o;
  o.quasi_static_ratio = p.at("quasi_static_ratio").get<double>();
  o.workers = p.at("workers").get<unsigned>();
  return o;
}

void write_ledger(Context& ctx, std::initializer_list<const kin::ProcessLedger*> ledgers) {
  CsvWriter csv(ctx.file("ledger.csv"), {"time", "membrane_id", "pressure", "work_cum", "heat_cum"});
  for (const kin::ProcessLedger* l : ledgers) {
    for (const kin::PressureSample& s : l->pressure_samples) {
      csv.row({num(s.time), num(static_cast<std::int64_t>(s.membrane_id)), num(s.pressure), num(s.work_cum),
               num(s.heat_cum)});
    }
  }
}

Json notes_json(const kin::ProcessLedger& l) {
  Json a = Json::array();
  for (const auto& n : l.notes) a.push_back(n);
  return a;
}

// Thermodynamic entropy of mixing of two populations of n particles each:
// every population doubles its volume at fixed particle number.
double two_population_doubling(std::int64_t n) {
  return 2.0 * ms::volume_doubling_delta(n, false, false);
}

constexpr const char* kDoublingSource =
    "2 * microstate::volume_doubling_delta(n, fixed N, uncorrected): each population doubles its volume";

Json run_mix_reversible(Context& ctx) {
  const Json& p = ctx.p;
  const auto mode = *kin::parse_mixing_mode(p.at("mode").get<std::string>());
  const bool different = mode == kin::MixingMode::DifferentGasesBySpecies;
  kin::SimState gas = make_gas(p, kin::Species::A, different ? kin::Species::B : kin::Species::A);
  const kin::ProcessLedger ledger =
      kin::run_reversible_mixing(gas, mode, p.at("membrane_speed").get<double>(),
                                 p.at("thermostat_interval").get<double>(), process_options(p));
  write_ledger(ctx, {&ledger});

  const auto n = p.at("n").get<std::int64_t>();
  const double scale = two_population_doubling(n);
  double theory = scale;
  std::string source = kDoublingSource;
  if (mode == kin::MixingMode::SameGasBySpecies) {
    // One gas of 2n particles in twice the volume: W -> W^2 with the N!
    // correction, so S(2n, 2X) - 2 S(n, X) = 0.
    const ms::CountingModel one_side{1.0e6, n, true};
    theory = ms::volume_doubling_delta(n, true, true, ms::LogFactorialMethod::StirlingSimple, 1.0e6) -
             ms::entropy(one_side, ms::LogFactorialMethod::StirlingSimple).value;
    source =
        "microstate::volume_doubling_delta(n, doubled N, corrected, StirlingSimple) - "
        "microstate::entropy(n, corrected, StirlingSimple)";
  }
  const double ds = ledger.delta_S();
  return Json{{"delta_S", ds},
              {"delta_S_theory", theory},
              {"relative_error", std::abs(ds - theory) / scale},
              {"relative_error_scale", scale},
              {"theory_source", source},
              {"mode", std::string(kin::to_string(mode))},
              {"n", n},
              {"temperature", p.at("temperature").get<double>()},
              {"membrane_speed", p.at("membrane_speed").get<double>()},
              {"seed", p.at("seed").get<std::uint64_t>()},
              {"heat_injected", ledger.heat_injected},
              {"work_on_membranes", ledger.work_on_membranes},
              {"notes", notes_json(ledger)}};
}

Json run_unmix(Context& ctx) {
  const Json& p = ctx.p;
  kin::SimState gas = make_gas(p, kin::Species::A, kin::Species::A);
  const auto n = p.at("n").get<std::int64_t>();
  const double speed = p.at("membrane_speed").get<double>();
  const double interval = p.at("thermostat_interval").get<double>();
  const kin::ProcessOptions opts = process_options(p);

  kin::ProcessLedger mix;
  const bool reversible = p.at("premix").get<std::string>() == "reversible";
  if (reversible) {
    mix = kin::run_reversible_mixing(gas, kin::MixingMode::SameGasByOrigin, speed, interval, opts);
  } else {
    kin::FreeMixingOptions free;
    free.workers = opts.workers;
    mix = kin::run_free_mixing(gas, free).ledger;
  }
  const kin::ProcessLedger unmix = kin::run_unmixing(gas, speed, interval, opts);
  write_ledger(ctx, {&mix, &unmix});

  const double scale = two_population_doubling(n);
  const double net = mix.delta_S() + unmix.delta_S();
  return Json{{"delta_S", unmix.delta_S()},
              {"delta_S_theory", -scale},
              {"relative_error", std::abs(unmix.delta_S() + scale) / scale},
              {"theory_source", std::string("-") + kDoublingSource},
              {"premix", p.at("premix").get<std::string>()},
              {"delta_S_premix", mix.delta_S()},
              {"delta_S_cycle", net},
              {"cycle_relative", std::abs(net) / std::abs(unmix.delta_S())},
              {"left_origin_restored", kin::left_origin_restored_fraction(gas)},
              {"n", n},
              {"temperature", p.at("temperature").get<double>()},
              {"membrane_speed", speed},
              {"seed", p.at("seed").get<std::uint64_t>()}};
}

Json run_mix_irreversible(Context& ctx) {
  const Json& p = ctx.p;
  const bool different = p.at("gases").get<std::string>() == "different";
  kin::SimState gas = make_gas(p, kin::Species::A, different ? kin::Species::B : kin::Species::A);
  const auto bins = p.at("bins").get<std::size_t>();
  const std::vector<double> before = kin::density_profile(gas, bins);

  kin::FreeMixingOptions opts;
  opts.sample_interval = p.at("sample_interval").get<double>();
  opts.window = p.at("window").get<double>();
  opts.tolerance = p.at("tolerance").get<double>();
  opts.max_time = p.at("max_time").get<double>();
  opts.workers = p.at("workers").get<unsigned>();
  const kin::FreeMixingResult result = kin::run_free_mixing(gas, opts);
  const std::vector<double> after = kin::density_profile(gas, bins);

  {
    CsvWriter csv(ctx.file("occupancy.csv"), {"time", "left_fraction_left_origin", "left_fraction_right_origin"});
    for (const auto& s : result.occupancy) {
      csv.row({num(s.time), num(s.left_fraction_left_origin), num(s.left_fraction_right_origin)});
    }
  }
  double max_dev_before = 0.0;
  double max_dev_after = 0.0;
  {
    CsvWriter csv(ctx.file("profile.csv"), {"bin", "x_center", "density_before", "density_after"});
    const double w = gas.geometry.width / static_cast<double>(bins);
    for (std::size_t i = 0; i < bins; ++i) {
      csv.row({num(static_cast<std::int64_t>(i)), num((static_cast<double>(i) + 0.5) * w), num(before[i]),
               num(after[i])});
      max_dev_before = std::max(max_dev_before, std::abs(before[i] - 1.0));
      max_dev_after = std::max(max_dev_after, std::abs(after[i] - 1.0));
    }
  }
  const auto n = p.at("n").get<std::int64_t>();
  const double counting = two_population_doubling(n);
  return Json{{"delta_S", counting},
              {"delta_S_theory", counting},
              {"relative_error", 0.0},
              {"theory_source", kDoublingSource},
              {"delta_S_clausius", result.ledger.delta_S()},
              {"heat_injected", result.ledger.heat_injected},
              {"work_on_membranes", result.ledger.work_on_membranes},
              {"equilibration_time", result.equilibration_time},
              {"final_left_fraction_left_origin", kin::left_fraction(gas, kin::Origin::Left)},
              {"final_left_fraction_right_origin", kin::left_fraction(gas, kin::Origin::Right)},
              {"profile_max_deviation_before", max_dev_before},
              {"profile_max_deviation_after", max_dev_after},
              {"gases", p.at("gases").get<std::string>()},
              {"n", n},
              {"temperature", p.at("temperature").get<double>()},
              {"seed", p.at("seed").get<std::uint64_t>()}};
}

Json run_count_sweep(Context& ctx) {
  const Json& p = ctx.p;
  CsvWriter csv(ctx.file("counting.csv"), {"N", "delta_S_exact", "delta_S_asymptotic", "ratio"});
  Json rows = Json::array();
  for (const Json& v : p.at("n_values")) {
    const auto n = v.get<std::int64_t>();
    const double exact = ms::mixing_permutation_factor(n).delta_s;
    const double asymptotic = two_population_doubling(n);
    csv.row({num(n), num(exact), num(asymptotic), num(exact / asymptotic)});
    rows.push_back(Json{{"N", n}, {"ratio", exact / asymptotic}});
  }
  const auto n0 = p.at("n_values")[0].get<std::int64_t>();
  const double x = p.at("per_particle_states").get<double>();
  return Json{
      {"rows", rows},
      {"fixed_n_doubling", ms::volume_doubling_delta(n0, false, true, ms::LogFactorialMethod::Exact, x)},
      {"fixed_n_doubling_theory", static_cast<double>(n0) * std::log(2.0)},
      {"theory_source",
       "delta_S_exact: microstate::mixing_permutation_factor(N); delta_S_asymptotic: "
       "2 * microstate::volume_doubling_delta(N, fixed N, uncorrected)"}};
}

Json run_statistics_sweep(Context& ctx) {
  const Json& p = ctx.p;
  CsvWriter csv(ctx.file("statistics.csv"), {"m", "n", "be_ratio", "fd_ratio"});
  std::int64_t rows = 0;
  for (const Json& mv : p.at("m_values")) {
    for (const Json& nv : p.at("n_values")) {
      const auto m = mv.get<std::int64_t>();
      const auto n = nv.get<std::int64_t>();
      if (n > m) continue;
      csv.row({num(m), num(n), num(ms::statistics_reduction_ratio(m, n, ms::OccupancyStatistics::BoseEinstein)),
               num(ms::statistics_reduction_ratio(m, n, ms::OccupancyStatistics::FermiDirac))});
      ++rows;
    }
  }
  return Json{{"rows", rows},
              {"theory_source", "microstate::statistics_reduction_ratio(m, n, BoseEinstein | FermiDirac)"}};
}

qm::Grid make_grid(const Json& g) {
  qm::Grid grid{g.at("x_min").get<double>(), g.at("x_max").get<double>(), g.at("points").get<Eigen::Index>()};
  qm::validate(grid);
  return grid;
}

Json run_ehrenfest(Context& ctx) {
  const Json& p = ctx.p;
  const bool harmonic = p.at("potential").get<std::string>() == "harmonic";
  const double omega = p.at("omega").get<double>();
  const double mass = p.at("mass").get<double>();
  const double x0 = p.at("x0").get<double>();
  const double p0 = p.at("p0").get<double>();
  const double sigma = p.at("sigma").get<double>();
  const auto h = harmonic ? qm::HamiltonianSpec::harmonic(omega, mass) : qm::HamiltonianSpec::free_particle(mass);
  const qm::WaveFunction wf0 = qm::gaussian_packet(make_grid(p.at("grid")), x0, p0, sigma);
  const qm::EhrenfestTrace tr = qm::ehrenfest_trace(h, wf0, p.at("t_max").get<double>(),
                                                    p.at("samples").get<int>(), p.at("steps_per_sample").get<int>());

  auto x_classical = [&](double t) {
    return harmonic ? x0 * std::cos(omega * t) + p0 / (mass * omega) * std::sin(omega * t) : x0 + p0 * t / mass;
  };
  double max_x_error = 0.0;
  CsvWriter csv(ctx.file("ehrenfest.csv"), {"t", "x_mean", "p_mean", "F_mean", "residual"});
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    csv.row({num(tr.t[k]), num(tr.x_mean[k]), num(tr.p_mean[k]), num(tr.force_mean[k]), num(tr.residual[k])});
    max_x_error = std::max(max_x_error, std::abs(tr.x_mean[k] - x_classical(tr.t[k])));
  }
  Json s{{"max_residual", tr.max_residual},
         {"max_norm_drift", tr.max_norm_drift},
         {"max_x_error", max_x_error},
         {"x_theory_source", harmonic ? "analytic: x0 cos(omega t) + p0 / (m omega) sin(omega t)"
                                      : "analytic: x0 + p0 t / m"}};
  if (!harmonic) {
    const double t = tr.t.back();
    const qm::WaveFunction wf = qm::evolve(wf0, h, t);
    const double tau = t / (2.0 * mass * sigma * sigma);
    s["width_final"] = std::sqrt(qm::position_variance(wf));
    s["width_theory"] = sigma * std::sqrt(1.0 + tau * tau);
    s["width_theory_source"] = "analytic: sigma sqrt(1 + (t / 2 m sigma^2)^2)";
  }
  return s;
}

Json packet_json(const qm::WaveFunction& wf, std::span<const qm::WaveFunction> inputs) {
  double fidelity = 0.0;
  for (const auto& in : inputs) fidelity = std::max(fidelity, std::abs(qm::overlap(wf, in)));
  return Json{{"center", qm::mean_position(wf)},
              {"width", std::sqrt(qm::position_variance(wf))},
              {"fidelity", fidelity}};
}

Json run_decompose(Context& ctx) {
  const Json& p = ctx.p;
  const qm::Grid grid = make_grid(p.at("grid"));
  const double sep = p.at("separation").get<double>();
  const double sigma = p.at("sigma").get<double>();
  const std::vector<qm::WaveFunction> inputs{qm::gaussian_packet(grid, -0.5 * sep, 0.0, sigma),
                                             qm::gaussian_packet(grid, 0.5 * sep, 0.0, sigma)};
  const auto symmetry = p.at("symmetry").get<std::string>() == "fermi" ? qm::Symmetry::Fermi : qm::Symmetry::Bose;
  const qm::ManyBodyState state = qm::symmetrize(inputs, symmetry);

  qm::DecompositionOptions opts;
  opts.epsilon_support = p.at("epsilon_support").get<double>();
  opts.epsilon_reconstruct = p.at("epsilon_reconstruct").get<double>();
  const auto found = qm::detect_particle_decomposition(state, opts);

  Json doc;
  Json s{{"found", found.has_value()}};
  if (found) {
    Json packets = Json::array();
    double min_fidelity = 1.0;
    for (const auto& wf : found->packets) {
      packets.push_back(packet_json(wf, inputs));
      min_fidelity = std::min(min_fidelity, packets.back()["fidelity"].get<double>());
    }
    const auto starts = p.at("perturbed_starts").get<std::uint64_t>();
    const auto master = p.at("seed").get<std::uint64_t>();
    std::uint64_t agreeing = 0;
    for (std::uint64_t k = 0; k < starts; ++k) {
      qm::DecompositionOptions perturbed = opts;
      perturbed.start_seed = derive_seed(master, kDecompositionStream + k);
      const auto again = qm::detect_particle_decomposition(state, perturbed);
      if (again && qm::equivalent_up_to_phase_and_order(again->packets, found->packets, 1e-6)) ++agreeing;
    }
    doc["decomposition"] = Json{{"packets", packets},
                                {"degenerate_occupation", found->degenerate_occupation},
                                {"max_support_overlap", found->max_support_overlap},
                                {"reconstruction_error", found->reconstruction_error}};
    doc["perturbed_starts"] = starts;
    doc["perturbed_starts_agreeing"] = agreeing;
    s["min_fidelity"] = min_fidelity;
    s["unique_across_starts"] = agreeing == starts;
  } else {
    doc["decomposition"] = nullptr;
  }
  write_json(ctx.file("decomposition.json"), doc);
  s["separation"] = sep;
  s["symmetry"] = p.at("symmetry").get<std::string>();
  return s;
}

Json run_orthogonality(Context& ctx) {
  const Json& p = ctx.p;
  const qm::Grid grid = make_grid(p.at("grid"));
  const double sep = p.at("separation").get<double>();
  const double k = p.at("momentum").get<double>();
  const double sigma = p.at("sigma").get<double>();
  const double t = p.at("t").get<double>();
  const auto h = qm::HamiltonianSpec::free_particle();
  const qm::WaveFunction a = qm::gaussian_packet(grid, -0.5 * sep, k, sigma);
  const qm::WaveFunction b = qm::gaussian_packet(grid, 0.5 * sep, -k, sigma);
  const int steps = p.at("steps").get<int>();
  const qm::WaveFunction at = qm::evolve(a, h, t, steps);
  const qm::WaveFunction bt = qm::evolve(b, h, t, steps);
  return Json{{"inner_product_initial", std::abs(qm::overlap(a, b))},
              {"inner_product_final", std::abs(qm::overlap(at, bt))},
              {"deviation", qm::unitarity_orthogonality_check(a, b, h, t, steps)},
              {"support_overlap_initial", qm::support_overlap(a, b)},
              {"support_overlap_final", qm::support_overlap(at, bt)},
              {"t", t}};
}

template <typename E>
[[noreturn]] void rethrow_in(std::string_view experiment, const E& e) {
  throw E("experiment " + std::string(experiment) + ": " + e.what());
}

}  // namespace

RunReport run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  const Json& p = config.parameters;
  if (p.contains("seed")) report.seed = p.at("seed").get<std::uint64_t>();

  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw Error("cannot create output directory " + config.output_dir.string() + ": " + ec.message());

  Context ctx{config, p, report};
  const std::string_view name = to_string(config.experiment);
  Json body;
  try {
    switch (config.experiment) {
      case Experiment::MixReversible: body = run_mix_reversible(ctx); break;
      case Experiment::Unmix: body = run_unmix(ctx); break;
      case Experiment::MixIrreversible: body = run_mix_irreversible(ctx); break;
      case Experiment::CountSweep: body = run_count_sweep(ctx); break;
      case Experiment::StatisticsSweep: body = run_statistics_sweep(ctx); break;
      case Experiment::Ehrenfest: body = run_ehrenfest(ctx); break;
      case Experiment::Decompose: body = run_decompose(ctx); break;
      case Experiment::Orthogonality: body = run_orthogonality(ctx); break;
    }
  } catch (const ConfigError& e) {
    rethrow_in(name, e);
  } catch (const StateError& e) {
    rethrow_in(name, e);
  } catch (const SimulationError& e) {
    rethrow_in(name, e);
  } catch (const ThermostatError& e) {
    rethrow_in(name, e);
  } catch (const DomainError& e) {
    rethrow_in(name, e);
  } catch (const Error& e) {
    rethrow_in(name, e);
  }

  report.summary = Json{{"experiment", std::string(name)}};
  for (auto& [k, v] : body.items()) report.summary[k] = v;
  Json artifacts = Json::array();
  for (const auto& a : report.artifacts) artifacts.push_back(a.filename().string());
  artifacts.push_back("summary.json");
  artifacts.push_back("resolved_config.json");
  report.summary["artifacts"] = artifacts;

  report.artifacts.push_back(config.output_dir / "summary.json");
  write_json(report.artifacts.back(), report.summary);
  report.artifacts.push_back(config.output_dir / "resolved_config.json");
  write_json(report.artifacts.back(), to_json(config));
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace gibbs::harness
