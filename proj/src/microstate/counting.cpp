#include "gibbs/microstate/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gibbs/errors.hpp"

namespace gibbs::microstate {
namespace {

void require_non_negative(std::int64_t v, const char* what) {
  if (v < 0) throw DomainError(std::string(what) + " must be non-negative, got " + std::to_string(v));
}

void check_occupancy_domain(std::int64_t modes, std::int64_t particles, OccupancyStatistics statistics) {
  if (modes < 1) throw DomainError("number of modes must be >= 1, got " + std::to_string(modes));
  require_non_negative(particles, "number of particles");
  if (statistics == OccupancyStatistics::FermiDirac && particles > modes) {
    throw DomainError("Fermi-Dirac occupancy needs n <= m (got n = " + std::to_string(particles) +
                      ", m = " + std::to_string(modes) + ")");
  }
}

}  // namespace

double log_factorial(std::int64_t n, LogFactorialMethod method) {
  require_non_negative(n, "n");
  if (n == 0) return 0.0;
  const double x = static_cast<double>(n);
  switch (method) {
    case LogFactorialMethod::Exact:
      return std::lgamma(x + 1.0);
    case LogFactorialMethod::StirlingSimple:
      return x * std::log(x) - x;
    case LogFactorialMethod::StirlingCorrected:
      return x * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi * x);
  }
  return 0.0;
}

double log_binomial(std::int64_t a, std::int64_t k) {
  require_non_negative(a, "a");
  if (k < 0 || k > a) throw DomainError("log_binomial needs 0 <= k <= a");
  k = std::min(k, a - k);
  if (k <= 64) {
    double s = 0.0;
    for (std::int64_t i = 1; i <= k; ++i) {
      s += std::log(static_cast<double>(a - k + i) / static_cast<double>(i));
    }
    return s;
  }
  return log_factorial(a) - log_factorial(k) - log_factorial(a - k);
}

EntropyValue entropy(const CountingModel& model, LogFactorialMethod method) {
  if (!(model.per_particle_states >= 1.0) || !std::isfinite(model.per_particle_states)) {
    throw DomainError("per-particle state count X must be finite and >= 1");
  }
  require_non_negative(model.n_particles, "N");
  const double n = static_cast<double>(model.n_particles);
  double s = model.n_particles == 0 ? 0.0 : n * std::log(model.per_particle_states);
  if (model.corrected) s -= log_factorial(model.n_particles, method);
  const auto exactness =
      (model.corrected && method != LogFactorialMethod::Exact) ? Exactness::Stirling : Exactness::Exact;
  return {s, exactness};
}

double volume_doubling_delta(std::int64_t n_particles, bool double_n_too, bool corrected,
                             LogFactorialMethod method, double per_particle_states) {
  if (n_particles < 1) throw DomainError("volume doubling needs N >= 1");
  const CountingModel before{per_particle_states, n_particles, corrected};
  if (!double_n_too) {
    // ln((2X)^N / c) - ln(X^N / c): the N! term cancels identically.
    return static_cast<double>(n_particles) * std::numbers::ln2;
  }
  const CountingModel after{2.0 * per_particle_states, 2 * n_particles, corrected};
  return entropy(after, method).value - entropy(before, method).value;
}

PermutationFactor mixing_permutation_factor(std::int64_t n_per_side) {
  if (n_per_side < 1) throw DomainError("mixing permutation factor needs N >= 1");
  const double log_m = log_binomial(2 * n_per_side, n_per_side);
  return {log_m, log_m};
}

double count_occupancies(std::int64_t modes, std::int64_t particles, OccupancyStatistics statistics) {
  check_occupancy_domain(modes, particles, statistics);
  const double n = static_cast<double>(particles);
  const double m = static_cast<double>(modes);
  switch (statistics) {
    case OccupancyStatistics::MaxwellBoltzmann:
      return n * std::log(m);
    case OccupancyStatistics::MaxwellBoltzmannCorrected:
      return n * std::log(m) - log_factorial(particles);
    case OccupancyStatistics::BoseEinstein:
      return log_binomial(modes + particles - 1, particles);
    case OccupancyStatistics::FermiDirac:
      return log_binomial(modes, particles);
  }
  return 0.0;
}

double statistics_reduction_ratio(std::int64_t modes, std::int64_t particles,
                                  OccupancyStatistics statistics) {
  if (statistics != OccupancyStatistics::BoseEinstein && statistics != OccupancyStatistics::FermiDirac) {
    throw DomainError("reduction ratio is defined for Bose-Einstein or Fermi-Dirac statistics only");
  }
  check_occupancy_domain(modes, particles, statistics);
  // BE: prod (m + i) / m^n, FD: prod (m - i) / m^n, i = 0 .. n-1.
  const double sign = statistics == OccupancyStatistics::BoseEinstein ? 1.0 : -1.0;
  const double m = static_cast<double>(modes);
  double log_ratio = 0.0;
  for (std::int64_t i = 1; i < particles; ++i) {
    log_ratio += std::log1p(sign * static_cast<double>(i) / m);
  }
  return std::exp(log_ratio);
}

}  // namespace gibbs::microstate
