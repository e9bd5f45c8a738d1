#pragma once

// Collisionless classical gas in a 2D box, natural units k = m = 1.
//
// Particles fly freely between analytically scheduled boundary events:
// the four box walls, an optional fixed partition and any number of
// moving semi-permeable membranes. The left and right walls reflect
// specularly. The bottom and top walls are specular or "diffuse": a diffuse
// wall keeps the particle's speed and re-emits it with the cosine law,
// which is what lets a gas without inter-particle collisions share energy
// between the x and y degrees of freedom.

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gibbs::kinetics {

using Vec2 = Eigen::Vector2d;

enum class Species : std::uint8_t { A, B };
enum class Origin : std::uint8_t { Untagged, Left, Right };

std::string to_string(Species s);
std::string to_string(Origin o);

struct Particle {
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  Species species = Species::A;
  Origin origin = Origin::Untagged;  ///< written once by remove_partition
};

enum class SideWalls { Specular, Diffuse };

struct BoxGeometry {
  double width = 1.0;
  double height = 0.5;
  std::optional<double> partition_x;  ///< present while the partition is in place
  SideWalls side_walls = SideWalls::Diffuse;
};

/// Which particles a membrane lets through. A particle that fails the rule
/// reflects specularly in the membrane frame.
class Selectivity {
 public:
  enum class Rule { BySpecies, ByOrigin, Opaque, Transparent };

  static Selectivity by_species(std::initializer_list<Species> pass_set);
  static Selectivity by_origin(Origin pass_side);
  static Selectivity opaque() { return Selectivity(Rule::Opaque); }
  static Selectivity transparent() { return Selectivity(Rule::Transparent); }

  Rule rule() const { return rule_; }
  bool passes(const Particle& p) const;
  /// Same rule with Left and Right origins exchanged.
  Selectivity mirrored() const;

 private:
  explicit Selectivity(Rule r) : rule_(r) {}
  Rule rule_;
  std::uint8_t species_mask_ = 0;
  Origin pass_origin_ = Origin::Untagged;
};

struct Membrane {
  double x = 0.5;
  double speed = 0.0;  ///< signed, along +x
  Selectivity selectivity = Selectivity::opaque();
};

struct SurfaceId {
  enum class Kind { LeftWall, RightWall, BottomWall, TopWall, Partition, Membrane };
  Kind kind = Kind::LeftWall;
  std::size_t index = 0;  ///< membrane index for Kind::Membrane

  static SurfaceId membrane(std::size_t i) { return {Kind::Membrane, i}; }
};

/// Cumulative normal impulse delivered to each surface. Membrane and
/// partition entries count both faces.
struct ImpulseTally {
  double walls[4] = {0.0, 0.0, 0.0, 0.0};  ///< left, right, bottom, top
  double partition = 0.0;
  std::vector<double> membranes;
  std::vector<double> membrane_work;  ///< energy given by the gas to each membrane
};

struct SimState {
  std::vector<Particle> particles;
  BoxGeometry geometry;
  std::vector<Membrane> membranes;
  double time = 0.0;
  double target_temperature = 1.0;
  std::uint64_t seed = 0;
  double divider_x = 0.5;  ///< where the partition sits when it is in place

  // Per-particle random streams (diffuse wall scattering).
  std::vector<std::uint64_t> streams;
  // Side (-1 left, +1 right) of each particle with respect to the partition
  // and to every membrane that blocks it; 0 when the membrane lets it pass.
  std::vector<std::int8_t> partition_sides;
  std::vector<std::vector<std::int8_t>> membrane_sides;

  ImpulseTally tally;

  std::size_t size() const { return particles.size(); }
};

struct PressureSample {
  double time = 0.0;
  std::size_t membrane_id = 0;
  double pressure = 0.0;
  double work_cum = 0.0;
  double heat_cum = 0.0;
};

/// Heat and work bookkeeping for an isothermal process.
struct ProcessLedger {
  double temperature = 1.0;
  double work_on_membranes = 0.0;
  double heat_injected = 0.0;
  std::vector<PressureSample> pressure_samples;
  std::vector<std::string> notes;

  /// Clausius entropy change, heat / T.
  double delta_S() const { return heat_injected / temperature; }
};

struct InitOptions {
  double width = 1.0;
  double height = 0.5;
  SideWalls side_walls = SideWalls::Diffuse;
};

SimState init_gas(std::int64_t n_left, std::int64_t n_right, Species species_left, Species species_right,
                  double temperature, std::uint64_t seed, const InitOptions& options = {});

/// Removes the partition and tags every untagged particle with the half it
/// occupies now. Existing tags are never changed.
void remove_partition(SimState& state);

/// Puts the partition back at `divider_x`. Tagged particles are placed on the
/// side of their origin, untagged ones on the side they occupy.
void insert_partition(SimState& state);

/// Adds a membrane and fixes, for every particle it blocks, the side it is
/// on. A blocked particle lying exactly on the membrane line is moved by one
/// representable step along its velocity (inward when that would leave the box).
std::size_t install_membrane(SimState& state, const Membrane& membrane);
void clear_membranes(SimState& state);

double kinetic_energy(const SimState& state);
double kinetic_energy_x(const SimState& state);

struct AdvanceOptions {
  unsigned workers = 1;
};

/// Impulse and work delivered during one advance call.
struct FlightTally {
  ImpulseTally impulses;
  double duration = 0.0;
  double membrane_work() const;
};

/// Exact event-driven free flight over `duration`. Membranes move by
/// speed * duration. Results are bit-identical for any worker count.
FlightTally advance(SimState& state, double duration, const AdvanceOptions& options = {});

/// As above, and adds the membrane work to the ledger.
FlightTally advance(SimState& state, double duration, ProcessLedger& ledger,
                    const AdvanceOptions& options = {});

double surface_length(const SimState& state, SurfaceId surface);
double surface_impulse(const ImpulseTally& tally, SurfaceId surface);

/// Time-averaged normal momentum transfer per unit length over `window`,
/// measured on a copy: the caller's state is not touched.
double measure_pressure(const SimState& state, SurfaceId surface, double window,
                        const AdvanceOptions& options = {});

/// Rescales all velocities so that the kinetic energy is N k T and books
/// the (signed) energy added as heat. Returns the scale factor.
double thermostat(SimState& state, ProcessLedger& ledger);

}  // namespace gibbs::kinetics
