#include "gibbs/quantum/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gibbs::quantum {

EhrenfestTrace ehrenfest_trace(const HamiltonianSpec& h, const WaveFunction& wf0, double t_max, int samples,
                               int steps_per_sample) {
  if (samples < 5) throw DomainError("Ehrenfest trace needs at least 5 samples");
  if (!(t_max > 0.0)) throw DomainError("Ehrenfest trace needs t_max > 0");
  const double dt = t_max / (samples - 1);
  const double norm0 = norm_squared(wf0);

  EhrenfestTrace tr;
  WaveFunction wf = wf0;
  for (int k = 0; k < samples; ++k) {
    if (k > 0) wf = evolve(wf, h, dt, steps_per_sample);
    tr.t.push_back(k * dt);
    tr.x_mean.push_back(mean_position(wf));
    tr.p_mean.push_back(mean_momentum(wf));
    tr.force_mean.push_back(mean_force(wf, h));
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(norm_squared(wf) - norm0));
  }
  tr.residual.assign(static_cast<std::size_t>(samples), std::numeric_limits<double>::quiet_NaN());
  const auto& x = tr.x_mean;
  for (std::size_t k = 2; k + 2 < tr.t.size(); ++k) {
    // Fourth-order central second difference.
    const double accel =
        (-x[k + 2] + 16.0 * x[k + 1] - 30.0 * x[k] + 16.0 * x[k - 1] - x[k - 2]) / (12.0 * dt * dt);
    tr.residual[k] = std::abs(h.mass * accel - tr.force_mean[k]);
    tr.max_residual = std::max(tr.max_residual, tr.residual[k]);
  }
  return tr;
}

double ehrenfest_residual(const HamiltonianSpec& h, const WaveFunction& wf0, double t_max, int samples,
                          int steps_per_sample) {
  return ehrenfest_trace(h, wf0, t_max, samples, steps_per_sample).max_residual;
}

double unitarity_orthogonality_check(const WaveFunction& a, const WaveFunction& b, const HamiltonianSpec& h,
                                     double t, int steps) {
  const std::complex<double> before = overlap(a, b);
  const std::complex<double> after = overlap(evolve(a, h, t, steps), evolve(b, h, t, steps));
  return std::abs(after - before);
}

}  // namespace gibbs::quantum
