#include "gibbs/kinetics/gas.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "gibbs/errors.hpp"
#include "gibbs/rng.hpp"

namespace gibbs::kinetics {

std::string to_string(Species s) { return s == Species::A ? "A" : "B"; }

std::string to_string(Origin o) {
  switch (o) {
    case Origin::Left:
      return "Left";
    case Origin::Right:
      return "Right";
    case Origin::Untagged:
      break;
  }
  return "Untagged";
}

Selectivity Selectivity::by_species(std::initializer_list<Species> pass_set) {
  Selectivity s(Rule::BySpecies);
  for (Species sp : pass_set) s.species_mask_ |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(sp));
  return s;
}

Selectivity Selectivity::by_origin(Origin pass_side) {
  if (pass_side == Origin::Untagged) throw ConfigError("origin-selective membrane needs Left or Right");
  Selectivity s(Rule::ByOrigin);
  s.pass_origin_ = pass_side;
  return s;
}

bool Selectivity::passes(const Particle& p) const {
  switch (rule_) {
    case Rule::BySpecies:
      return (species_mask_ >> static_cast<unsigned>(p.species)) & 1u;
    case Rule::ByOrigin:
      return p.origin == pass_origin_;
    case Rule::Opaque:
      return false;
    case Rule::Transparent:
      return true;
  }
  return false;
}

Selectivity Selectivity::mirrored() const {
  Selectivity s = *this;
  if (rule_ == Rule::ByOrigin) s.pass_origin_ = pass_origin_ == Origin::Left ? Origin::Right : Origin::Left;
  return s;
}

SimState init_gas(std::int64_t n_left, std::int64_t n_right, Species species_left, Species species_right,
                  double temperature, std::uint64_t seed, const InitOptions& options) {
  if (n_left <= 0 || n_right <= 0) {
    throw ConfigError("particle counts must be positive (got " + std::to_string(n_left) + ", " +
                      std::to_string(n_right) + ")");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) throw ConfigError("temperature must be positive");
  if (!(options.width > 0.0) || !(options.height > 0.0)) throw ConfigError("box dimensions must be positive");

  SimState s;
  s.geometry.width = options.width;
  s.geometry.height = options.height;
  s.geometry.side_walls = options.side_walls;
  s.divider_x = 0.5 * options.width;
  s.geometry.partition_x = s.divider_x;
  s.target_temperature = temperature;
  s.seed = seed;

  const auto n = static_cast<std::size_t>(n_left + n_right);
  s.particles.reserve(n);
  s.streams.reserve(n);
  s.partition_sides.reserve(n);

  std::mt19937_64 gen(derive_seed(seed, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> thermal(0.0, std::sqrt(temperature));  // variance kT/m

  const double half = s.divider_x;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = i < static_cast<std::size_t>(n_left);
    Particle p;
    p.species = left ? species_left : species_right;
    const double u = unit(gen);
    p.position.x() = left ? u * half : half + u * (options.width - half);
    p.position.y() = unit(gen) * options.height;
    if (!left && p.position.x() == half) p.position.x() = std::nextafter(half, options.width);
    p.velocity.x() = thermal(gen);
    p.velocity.y() = thermal(gen);
    s.particles.push_back(p);
    s.streams.push_back(derive_seed(seed, i + 1));
    s.partition_sides.push_back(left ? -1 : 1);
  }
  return s;
}

void remove_partition(SimState& state) {
  if (!state.geometry.partition_x) throw StateError("partition already removed");
  for (std::size_t i = 0; i < state.size(); ++i) {
    Particle& p = state.particles[i];
    if (p.origin == Origin::Untagged) p.origin = state.partition_sides[i] < 0 ? Origin::Left : Origin::Right;
  }
  state.geometry.partition_x.reset();
  state.partition_sides.clear();
}

void insert_partition(SimState& state) {
  if (state.geometry.partition_x) throw StateError("partition already in place");
  const double px = state.divider_x;
  const double slack = 1e-9 * state.geometry.width;
  state.partition_sides.assign(state.size(), 0);
  for (std::size_t i = 0; i < state.size(); ++i) {
    Particle& p = state.particles[i];
    std::int8_t side = 0;
    if (p.origin == Origin::Left) {
      side = -1;
    } else if (p.origin == Origin::Right) {
      side = 1;
    } else {
      side = (p.position.x() < px || (p.position.x() == px && p.velocity.x() < 0.0)) ? -1 : 1;
    }
    double& x = p.position.x();
    if (side < 0 && x >= px) {
      if (x - px > slack) throw StateError("Left-origin particle lies right of the divider");
      x = std::nextafter(px, 0.0);
    } else if (side > 0 && x <= px) {
      if (px - x > slack) throw StateError("Right-origin particle lies left of the divider");
      x = std::nextafter(px, state.geometry.width);
    }
    state.partition_sides[i] = side;
  }
  state.geometry.partition_x = px;
}

std::size_t install_membrane(SimState& state, const Membrane& membrane) {
  const double w = state.geometry.width;
  if (!(membrane.x >= 0.0 && membrane.x <= w)) throw SimulationError("membrane placed outside the box");
  std::vector<std::int8_t> sides(state.size(), 0);
  for (std::size_t i = 0; i < state.size(); ++i) {
    Particle& p = state.particles[i];
    if (membrane.selectivity.passes(p)) continue;
    double& x = p.position.x();
    if (x == membrane.x) {
      double target = p.velocity.x() < 0.0 ? -std::numeric_limits<double>::infinity()
                                           : std::numeric_limits<double>::infinity();
      double moved = std::nextafter(x, target);
      if (moved < 0.0 || moved > w) moved = std::nextafter(x, -target);
      x = moved;
    }
    sides[i] = x < membrane.x ? -1 : 1;
  }
  state.membranes.push_back(membrane);
  state.membrane_sides.push_back(std::move(sides));
  state.tally.membranes.push_back(0.0);
  state.tally.membrane_work.push_back(0.0);
  return state.membranes.size() - 1;
}

void clear_membranes(SimState& state) {
  state.membranes.clear();
  state.membrane_sides.clear();
  state.tally.membranes.clear();
  state.tally.membrane_work.clear();
}

double kinetic_energy(const SimState& state) {
  double e = 0.0;
  for (const Particle& p : state.particles) e += 0.5 * p.velocity.squaredNorm();
  return e;
}

double kinetic_energy_x(const SimState& state) {
  double e = 0.0;
  for (const Particle& p : state.particles) e += 0.5 * p.velocity.x() * p.velocity.x();
  return e;
}

double FlightTally::membrane_work() const {
  double w = 0.0;
  for (double x : impulses.membrane_work) w += x;
  return w;
}

double surface_length(const SimState& state, SurfaceId surface) {
  using K = SurfaceId::Kind;
  switch (surface.kind) {
    case K::BottomWall:
    case K::TopWall:
      return state.geometry.width;
    case K::Partition:
      if (!state.geometry.partition_x) throw StateError("no partition in place");
      return state.geometry.height;
    case K::Membrane:
      if (surface.index >= state.membranes.size()) {
        throw StateError("unknown membrane id " + std::to_string(surface.index));
      }
      return state.geometry.height;
    case K::LeftWall:
    case K::RightWall:
      break;
  }
  return state.geometry.height;
}

double surface_impulse(const ImpulseTally& tally, SurfaceId surface) {
  using K = SurfaceId::Kind;
  switch (surface.kind) {
    case K::LeftWall:
      return tally.walls[0];
    case K::RightWall:
      return tally.walls[1];
    case K::BottomWall:
      return tally.walls[2];
    case K::TopWall:
      return tally.walls[3];
    case K::Partition:
      return tally.partition;
    case K::Membrane:
      if (surface.index >= tally.membranes.size()) {
        throw StateError("unknown membrane id " + std::to_string(surface.index));
      }
      return tally.membranes[surface.index];
  }
  return 0.0;
}

double measure_pressure(const SimState& state, SurfaceId surface, double window, const AdvanceOptions& options) {
  if (!(window > 0.0)) throw DomainError("pressure window must be positive");
  const double length = surface_length(state, surface);
  SimState copy = state;
  const FlightTally t = advance(copy, window, options);
  return surface_impulse(t.impulses, surface) / (window * length);
}

double thermostat(SimState& state, ProcessLedger& ledger) {
  if (state.particles.empty()) throw ThermostatError("thermostat needs at least one particle");
  const double ke = kinetic_energy(state);
  if (!(ke > 0.0)) throw ThermostatError("total kinetic energy is zero; cannot rescale");
  const double target = static_cast<double>(state.size()) * state.target_temperature;
  if (std::abs(target - ke) <= 4.0 * std::numeric_limits<double>::epsilon() * target) return 1.0;
  const double factor = std::sqrt(target / ke);
  for (Particle& p : state.particles) p.velocity *= factor;
  ledger.heat_injected += target - ke;
  return factor;
}

}  // namespace gibbs::kinetics
