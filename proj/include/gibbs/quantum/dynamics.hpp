#pragma once

#include <vector>

#include "gibbs/quantum/evolution.hpp"

namespace gibbs::quantum {

/// <x>, <p>, <F> at `samples` equally spaced times in [0, t_max] and the
/// Ehrenfest residual |m d2<x>/dt2 - <F>| from a five-point central
/// difference (NaN at the first two and last two samples).
struct EhrenfestTrace {
  std::vector<double> t;
  std::vector<double> x_mean;
  std::vector<double> p_mean;
  std::vector<double> force_mean;
  std::vector<double> residual;
  double max_residual = 0.0;
  double max_norm_drift = 0.0;
};

EhrenfestTrace ehrenfest_trace(const HamiltonianSpec& h, const WaveFunction& wf0, double t_max, int samples,
                               int steps_per_sample = 4);

double ehrenfest_residual(const HamiltonianSpec& h, const WaveFunction& wf0, double t_max, int samples,
                          int steps_per_sample = 4);

/// | <a(t)|b(t)> - <a|b> | after evolving both with the same Hamiltonian.
double unitarity_orthogonality_check(const WaveFunction& a, const WaveFunction& b, const HamiltonianSpec& h,
                                     double t, int steps = 256);

}  // namespace gibbs::quantum
