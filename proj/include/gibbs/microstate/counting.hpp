#pragma once

// Combinatorial entropy bookkeeping, S = k ln W with k = 1.
//
// Every count is held as a natural logarithm: (2N)! overflows a 64-bit
// integer already at N = 11, and every quantity of interest is a difference
// of logarithms anyway.
//
// The per-particle state count X is an abstract number proportional to the
// accessible volume. No phase-space cell constant is modelled; it cancels in
// every entropy difference computed here, so absolute entropies from
// `entropy()` are not physical.

#include <cstdint>

namespace gibbs::microstate {

enum class LogFactorialMethod {
  Exact,              ///< sum_{i<=n} ln i (evaluated through lgamma)
  StirlingSimple,     ///< n ln n - n
  StirlingCorrected,  ///< n ln n - n + ln(2 pi n) / 2
};

enum class Exactness { Exact, Stirling };

enum class OccupancyStatistics {
  MaxwellBoltzmann,           ///< labelled particles: m^n
  MaxwellBoltzmannCorrected,  ///< m^n / n!
  BoseEinstein,               ///< C(m + n - 1, n)
  FermiDirac,                 ///< C(m, n)
};

struct CountingModel {
  double per_particle_states = 1.0;  ///< X >= 1
  std::int64_t n_particles = 0;      ///< N >= 0
  bool corrected = false;            ///< divide W by N!
};

struct EntropyValue {
  double value = 0.0;  ///< units of k
  Exactness exactness = Exactness::Exact;
};

struct PermutationFactor {
  double log_m = 0.0;    ///< ln[(2N)! / (N! N!)]
  double delta_s = 0.0;  ///< k ln M, identical to log_m for k = 1
};

double log_factorial(std::int64_t n, LogFactorialMethod method = LogFactorialMethod::Exact);

/// ln C(a, k) for 0 <= k <= a. Small k uses a product of ratios so that
/// nearly-cancelling lgamma terms never appear.
double log_binomial(std::int64_t a, std::int64_t k);

EntropyValue entropy(const CountingModel& model,
                     LogFactorialMethod method = LogFactorialMethod::Exact);

/// S_after - S_before when X -> 2X (and N -> 2N if `double_n_too`).
/// For fixed N the result is N ln 2 independent of X and of `corrected`.
/// The doubled-N, corrected case depends on X; `per_particle_states` sets it.
double volume_doubling_delta(std::int64_t n_particles, bool double_n_too, bool corrected,
                             LogFactorialMethod method = LogFactorialMethod::Exact,
                             double per_particle_states = 1.0e6);

/// The number of left/right exchanges discarded by the (2N)! correction.
PermutationFactor mixing_permutation_factor(std::int64_t n_per_side);

/// ln of the number of ways to place n particles into m modes.
double count_occupancies(std::int64_t modes, std::int64_t particles, OccupancyStatistics statistics);

/// count(statistics) / count(MaxwellBoltzmannCorrected); BoseEinstein or
/// FermiDirac only. Evaluated as prod_{i<n} (1 +- i/m) to keep full relative
/// precision in the dilute limit.
double statistics_reduction_ratio(std::int64_t modes, std::int64_t particles,
                                  OccupancyStatistics statistics);

}  // namespace gibbs::microstate
