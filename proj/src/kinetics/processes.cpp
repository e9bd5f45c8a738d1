#include "gibbs/kinetics/processes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gibbs/errors.hpp"

namespace gibbs::kinetics {
namespace {

void check_speed(const SimState& s, double speed, const ProcessOptions& options) {
  const double limit = options.quasi_static_ratio * std::sqrt(s.target_temperature);
  if (!(speed > 0.0) || speed > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "membrane speed " << speed << " violates the quasi-static bound 0 < |speed| <= " << limit;
    throw ConfigError(msg.str());
  }
}

void check_interval(double interval) {
  if (!(interval > 0.0) || !std::isfinite(interval)) throw ConfigError("thermostat interval must be positive");
}

Species population_species(const SimState& s, Origin origin) {
  std::optional<Species> found;
  for (const Particle& p : s.particles) {
    if (p.origin != origin) continue;
    if (found && *found != p.species) {
      throw StateError("the " + to_string(origin) + " population mixes species; species selection is undefined");
    }
    found = p.species;
  }
  if (!found) throw StateError("no particles of origin " + to_string(origin));
  return *found;
}

// Moves every membrane towards its target, thermostatting after each interval.
// A membrane stops when it arrives.
void drive_membranes(SimState& s, ProcessLedger& ledger, const std::vector<double>& targets, double interval,
                     const ProcessOptions& options) {
  const double w = s.geometry.width;
  const double snap = 1e-12 * w;
  const AdvanceOptions adv{options.workers};
  auto moving = [&] {
    return std::any_of(s.membranes.begin(), s.membranes.end(), [](const Membrane& m) { return m.speed != 0.0; });
  };
  while (moving()) {
    double dt = interval;
    for (std::size_t m = 0; m < s.membranes.size(); ++m) {
      const Membrane& mem = s.membranes[m];
      if (mem.speed != 0.0) dt = std::min(dt, std::max(0.0, (targets[m] - mem.x) / mem.speed));
    }
    const FlightTally t = advance(s, dt, ledger, adv);
    for (std::size_t m = 0; m < s.membranes.size(); ++m) {
      Membrane& mem = s.membranes[m];
      if (mem.speed == 0.0) continue;
      const double remaining = (targets[m] - mem.x) * (mem.speed > 0.0 ? 1.0 : -1.0);
      if (remaining <= snap) {
        mem.x = targets[m];
        mem.speed = 0.0;
      }
    }
    thermostat(s, ledger);
    if (dt > 0.0) {
      for (std::size_t m = 0; m < s.membranes.size(); ++m) {
        const double p = t.impulses.membranes[m] / (dt * s.geometry.height);
        ledger.pressure_samples.push_back({s.time, m, p, ledger.work_on_membranes, ledger.heat_injected});
      }
    }
  }
}

}  // namespace

std::string_view to_string(MixingMode mode) {
  switch (mode) {
    case MixingMode::DifferentGasesBySpecies:
      return "DifferentGases-BySpecies";
    case MixingMode::SameGasByOrigin:
      return "SameGas-ByOrigin";
    case MixingMode::SameGasBySpecies:
      return "SameGas-BySpecies";
  }
  return "";
}

std::optional<MixingMode> parse_mixing_mode(std::string_view text) {
  for (MixingMode m : {MixingMode::DifferentGasesBySpecies, MixingMode::SameGasByOrigin,
                       MixingMode::SameGasBySpecies}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

double crossing_time(const SimState& state) { return state.geometry.width / std::sqrt(state.target_temperature); }

ProcessLedger run_reversible_mixing(SimState& s, MixingMode mode, double membrane_speed, double thermostat_interval,
                                    const ProcessOptions& options) {
  check_speed(s, membrane_speed, options);
  check_interval(thermostat_interval);
  if (!s.membranes.empty()) throw StateError("membranes already installed");
  if (s.geometry.partition_x) {
    remove_partition(s);
  } else {
    for (const Particle& p : s.particles) {
      const bool misplaced = p.origin == Origin::Untagged ||
                             (p.origin == Origin::Left && p.position.x() > s.divider_x) ||
                             (p.origin == Origin::Right && p.position.x() < s.divider_x);
      if (misplaced) throw StateError("reversible mixing needs a separated gas with origin tags");
    }
  }

  ProcessLedger ledger;
  ledger.temperature = s.target_temperature;
  ProcessLedger bath = ledger;
  thermostat(s, bath);  // contact with the bath before the process starts

  Selectivity pass_left = Selectivity::by_origin(Origin::Left);
  Selectivity pass_right = Selectivity::by_origin(Origin::Right);
  const Species left_species = population_species(s, Origin::Left);
  const Species right_species = population_species(s, Origin::Right);
  if (mode != MixingMode::SameGasByOrigin) {
    pass_left = Selectivity::by_species({left_species});
    pass_right = Selectivity::by_species({right_species});
    if (left_species == right_species) {
      ledger.notes.push_back("warning: both halves hold species " + to_string(left_species) +
                             "; species-selective membranes are transparent to the whole gas (null experiment)");
    }
  }
  if (mode == MixingMode::DifferentGasesBySpecies && left_species == right_species) {
    ledger.notes.push_back("warning: mode DifferentGases-BySpecies run on a single gas");
  }
  if (mode != MixingMode::DifferentGasesBySpecies && left_species != right_species) {
    ledger.notes.push_back("warning: mode " + std::string(to_string(mode)) + " run on two different species");
  }

  const double center = s.divider_x;
  install_membrane(s, {center, -membrane_speed, pass_left});
  install_membrane(s, {center, membrane_speed, pass_right});
  drive_membranes(s, ledger, {0.0, s.geometry.width}, thermostat_interval, options);
  clear_membranes(s);
  return ledger;
}

ProcessLedger run_unmixing(SimState& s, double membrane_speed, double thermostat_interval,
                           const ProcessOptions& options) {
  check_speed(s, membrane_speed, options);
  check_interval(thermostat_interval);
  if (s.geometry.partition_x) throw StateError("partition in place; unmixing needs a mixed gas");
  if (!s.membranes.empty()) throw StateError("membranes already installed");
  for (const Particle& p : s.particles) {
    if (p.origin == Origin::Untagged) throw StateError("untagged particles present; origin selection is undefined");
  }

  ProcessLedger ledger;
  ledger.temperature = s.target_temperature;
  ProcessLedger bath = ledger;
  thermostat(s, bath);

  const double w = s.geometry.width;
  install_membrane(s, {w, -membrane_speed, Selectivity::by_origin(Origin::Right)});
  install_membrane(s, {0.0, membrane_speed, Selectivity::by_origin(Origin::Left)});
  drive_membranes(s, ledger, {s.divider_x, s.divider_x}, thermostat_interval, options);
  clear_membranes(s);
  insert_partition(s);
  return ledger;
}

double left_origin_restored_fraction(const SimState& s) {
  std::size_t total = 0;
  std::size_t home = 0;
  for (const Particle& p : s.particles) {
    if (p.origin != Origin::Left) continue;
    ++total;
    if (p.position.x() <= s.divider_x) ++home;
  }
  return total == 0 ? 0.0 : static_cast<double>(home) / static_cast<double>(total);
}

double left_fraction(const SimState& s, Origin origin) {
  const double half = 0.5 * s.geometry.width;
  std::size_t total = 0;
  std::size_t left = 0;
  for (const Particle& p : s.particles) {
    if (p.origin != origin) continue;
    ++total;
    if (p.position.x() < half) ++left;
  }
  return total == 0 ? 0.0 : static_cast<double>(left) / static_cast<double>(total);
}

FreeMixingResult run_free_mixing(SimState& s, const FreeMixingOptions& options) {
  if (!s.membranes.empty()) throw StateError("free mixing runs with static walls only; remove the membranes");
  if (!(options.sample_interval > 0.0) || !(options.window >= options.sample_interval) ||
      !(options.max_time > 0.0) || !(options.tolerance > 0.0)) {
    throw ConfigError("free mixing needs sample_interval > 0, window >= sample_interval, max_time > 0, tolerance > 0");
  }
  if (s.geometry.partition_x) remove_partition(s);

  FreeMixingResult result;
  result.ledger.temperature = s.target_temperature;
  ProcessLedger bath = result.ledger;
  thermostat(s, bath);

  const double ct = crossing_time(s);
  const double dt = options.sample_interval * ct;
  const auto per_window = static_cast<std::size_t>(std::llround(options.window / options.sample_interval));
  const auto max_samples = static_cast<std::size_t>(std::ceil(options.max_time / options.sample_interval));
  const double start = s.time;
  const double band = options.tolerance * 0.5;

  double sum_left = 0.0;
  double sum_right = 0.0;
  std::size_t in_window = 0;
  double last_left = 0.0;
  double last_right = 0.0;
  for (std::size_t k = 0; k < max_samples; ++k) {
    advance(s, dt, result.ledger, AdvanceOptions{options.workers});
    OccupancySample sample{s.time - start, left_fraction(s, Origin::Left), left_fraction(s, Origin::Right)};
    result.occupancy.push_back(sample);
    sum_left += sample.left_fraction_left_origin;
    sum_right += sample.left_fraction_right_origin;
    if (++in_window == per_window) {
      last_left = sum_left / static_cast<double>(per_window);
      last_right = sum_right / static_cast<double>(per_window);
      if (std::abs(last_left - 0.5) <= band && std::abs(last_right - 0.5) <= band) {
        result.equilibration_time = s.time - start;
        thermostat(s, result.ledger);
        return result;
      }
      sum_left = sum_right = 0.0;
      in_window = 0;
    }
  }
  std::ostringstream msg;
  msg << "gas did not equilibrate within " << options.max_time << " crossing times; last window averages of the "
      << "left-half occupancy: Left-origin " << last_left << ", Right-origin " << last_right << " (target 0.5 +- "
      << band << ")";
  throw SimulationError(msg.str());
}

std::vector<double> density_profile(const SimState& s, std::size_t bins) {
  if (bins == 0) throw DomainError("density profile needs at least one bin");
  std::vector<double> h(bins, 0.0);
  const double w = s.geometry.width;
  for (const Particle& p : s.particles) {
    auto b = static_cast<std::size_t>(p.position.x() / w * static_cast<double>(bins));
    h[std::min(b, bins - 1)] += 1.0;
  }
  const double expected = static_cast<double>(s.size()) / static_cast<double>(bins);
  for (double& v : h) v /= expected;
  return h;
}

SimState mirrored(const SimState& s) {
  SimState m = s;
  const double w = s.geometry.width;
  for (Particle& p : m.particles) {
    p.position.x() = w - p.position.x();
    p.velocity.x() = -p.velocity.x();
    if (p.origin == Origin::Left) p.origin = Origin::Right;
    else if (p.origin == Origin::Right) p.origin = Origin::Left;
  }
  if (s.geometry.partition_x) m.geometry.partition_x = w - *s.geometry.partition_x;
  m.divider_x = w - s.divider_x;
  for (auto& side : m.partition_sides) side = static_cast<std::int8_t>(-side);
  for (std::size_t k = 0; k < m.membranes.size(); ++k) {
    Membrane& mem = m.membranes[k];
    mem.x = w - mem.x;
    mem.speed = -mem.speed;
    mem.selectivity = mem.selectivity.mirrored();
    for (auto& side : m.membrane_sides[k]) side = static_cast<std::int8_t>(-side);
  }
  std::swap(m.tally.walls[0], m.tally.walls[1]);
  return m;
}

}  // namespace gibbs::kinetics
