#pragma once

// Detection of a particle decomposition: an expression of a (anti)symmetric
// many-body state as the symmetrised product of spatially non-overlapping
// one-particle packets.
//
// Candidates come from the one-slot reduced density operator. Its eigenbasis
// is unique except inside degenerate eigenspaces, and that freedom is fixed
// by rotating each degenerate eigenspace to minimise the summed pairwise
// support overlap (Jacobi sweeps of 2x2 unitary rotations; every rotation is
// a coarse angle/phase scan refined by Nelder-Mead). The result is accepted
// only if the packets are non-overlapping and re-symmetrise to the input.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gibbs/quantum/many_body.hpp"

namespace gibbs::quantum {

struct DecompositionOptions {
  double epsilon_support = 1e-6;      ///< max pairwise support overlap between distinct packets
  double epsilon_reconstruct = 1e-6;  ///< max phase-aligned distance to the input state
  double degeneracy_tolerance = 1e-6;
  std::uint64_t start_seed = 0;  ///< nonzero: random unitary start and scan offsets
  int scan_points = 24;          ///< angle samples over [0, pi/2); phase gets twice as many
};

struct ParticleDecomposition {
  std::vector<WaveFunction> packets;  ///< N packets ordered by mean position
  bool degenerate_occupation = false;  ///< some packet is occupied more than once (bosons)
  double max_support_overlap = 0.0;
  double reconstruction_error = 0.0;
};

std::optional<ParticleDecomposition> detect_particle_decomposition(const ManyBodyState& state,
                                                                   const DecompositionOptions& options = {});

std::optional<ParticleDecomposition> detect_particle_decomposition(const ManyBodyState& state,
                                                                   double epsilon_support,
                                                                   double epsilon_reconstruct);

/// True if the two lists match one-to-one with |<a_i|b_j>| >= 1 - tolerance.
bool equivalent_up_to_phase_and_order(std::span<const WaveFunction> a, std::span<const WaveFunction> b,
                                      double tolerance);

}  // namespace gibbs::quantum
