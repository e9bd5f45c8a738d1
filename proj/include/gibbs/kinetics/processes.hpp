#pragma once

// Quasi-static isothermal mixing and unmixing with selective membranes, and
// free (irreversible) mixing after removal of the partition.

#include <optional>
#include <string_view>
#include <vector>

#include "gibbs/kinetics/gas.hpp"

namespace gibbs::kinetics {

enum class MixingMode {
  DifferentGasesBySpecies,  ///< membranes select by species, species differ
  SameGasByOrigin,          ///< membranes select by origin tag
  SameGasBySpecies,         ///< species selection on one gas: the null experiment
};

std::string_view to_string(MixingMode mode);
std::optional<MixingMode> parse_mixing_mode(std::string_view text);

struct ProcessOptions {
  double quasi_static_ratio = 0.01;  ///< |speed| <= ratio * sqrt(kT/m)
  unsigned workers = 1;
};

/// Replaces the partition by two membranes at its position and moves them
/// to the walls at `membrane_speed`, thermostatting every
/// `thermostat_interval`. The membrane travelling left passes the left
/// population, the one travelling right passes the right population. If the
/// partition is still in place it is removed first (tagging origins). The
/// gas is brought to the bath temperature before bookkeeping starts.
/// On return the membranes are gone and the gas fills the whole box.
ProcessLedger run_reversible_mixing(SimState& state, MixingMode mode, double membrane_speed,
                                    double thermostat_interval, const ProcessOptions& options = {});

/// Origin-selective compression: a membrane starting at the right wall and
/// opaque to Left-origin particles, and one starting at the left wall and
/// opaque to Right-origin particles, meet at the divider. The partition is
/// then re-inserted.
ProcessLedger run_unmixing(SimState& state, double membrane_speed, double thermostat_interval,
                           const ProcessOptions& options = {});

/// Fraction of Left-origin particles at x <= divider_x.
double left_origin_restored_fraction(const SimState& state);

/// Fraction of the particles with the given origin that lie in the left half.
double left_fraction(const SimState& state, Origin origin);

struct OccupancySample {
  double time = 0.0;
  double left_fraction_left_origin = 0.0;
  double left_fraction_right_origin = 0.0;
};

struct FreeMixingOptions {
  double sample_interval = 0.1;
  double window = 10.0;       ///< box-crossing times averaged per equilibration test
  double tolerance = 0.02;    ///< relative deviation of the windowed fraction from 1/2
  double max_time = 500.0;    ///< box-crossing times
  unsigned workers = 1;
};

struct FreeMixingResult {
  std::vector<OccupancySample> occupancy;
  double equilibration_time = 0.0;
  ProcessLedger ledger;
};

/// Removes the partition (if present) and lets the gas spread with static
/// walls only until both origin populations occupy each half equally, as
/// judged on consecutive windows. Throws SimulationError on timeout.
FreeMixingResult run_free_mixing(SimState& state, const FreeMixingOptions& options = {});

/// Histogram of particle x positions in `bins` equal slices, as number densities
/// normalised so that a uniform gas gives 1 in every bin.
std::vector<double> density_profile(const SimState& state, std::size_t bins);

/// Mirror image x -> width - x, v_x -> -v_x with Left/Right tags and layouts
/// swapped. Random streams are kept, so a mirrored run replays the original.
SimState mirrored(const SimState& state);

/// Box-crossing time width / sqrt(kT/m).
double crossing_time(const SimState& state);

}  // namespace gibbs::kinetics
