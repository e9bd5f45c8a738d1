#pragma once

#include <cmath>
#include <complex>

#include "gibbs/quantum/wavefunction.hpp"

namespace gibbs::quantum {

/// H = p^2 / 2m + V(x) with V = 0 (free) or m omega^2 x^2 / 2 (harmonic).
struct HamiltonianSpec {
  enum class Kind { Free, Harmonic };
  Kind kind = Kind::Free;
  double omega = 0.0;
  double mass = 1.0;

  static HamiltonianSpec free_particle(double mass = 1.0) {
    if (!(mass > 0.0)) throw DomainError("mass must be positive");
    return {Kind::Free, 0.0, mass};
  }
  static HamiltonianSpec harmonic(double omega, double mass = 1.0) {
    if (!(omega > 0.0) || !(mass > 0.0)) throw DomainError("harmonic oscillator needs omega > 0 and mass > 0");
    return {Kind::Harmonic, omega, mass};
  }

  double potential(double x) const { return kind == Kind::Free ? 0.0 : 0.5 * mass * omega * omega * x * x; }
  /// F = -dV/dx
  double force(double x) const { return kind == Kind::Free ? 0.0 : -mass * omega * omega * x; }
};

/// Edge amplitude above which a propagated packet is considered to have
/// reached the boundary of the periodic grid.
inline constexpr double kEdgeAmplitudeLimit = 1e-8;

/// Free: one exact multiplication by exp(-i k^2 t / 2m) in momentum space.
/// Harmonic: `steps` symmetric split-operator steps (half potential, kinetic,
/// half potential), error O((t/steps)^2).
template <typename Real>
BasicWaveFunction<Real> evolve(const BasicWaveFunction<Real>& wf, const HamiltonianSpec& h, Real t, int steps = 1) {
  if (steps < 1) throw DomainError("evolve needs steps >= 1");
  if (t == Real(0)) return wf;

  const Eigen::Index n = wf.amplitudes.size();
  const RealVector<Real> k = wf.grid.wavenumbers();
  const std::complex<Real> i(0, 1);
  const Real m = static_cast<Real>(h.mass);
  Eigen::FFT<Real> fft;
  ComplexVector<Real> psi = wf.amplitudes;
  ComplexVector<Real> spectrum(n);

  if (h.kind == HamiltonianSpec::Kind::Free) {
    fft.fwd(spectrum, psi);
    for (Eigen::Index j = 0; j < n; ++j) spectrum[j] *= std::exp(-i * k[j] * k[j] * t / (Real(2) * m));
    fft.inv(psi, spectrum);
  } else {
    const Real dt = t / static_cast<Real>(steps);
    ComplexVector<Real> kinetic(n);
    ComplexVector<Real> half_v(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      kinetic[j] = std::exp(-i * k[j] * k[j] * dt / (Real(2) * m));
      half_v[j] = std::exp(-i * static_cast<Real>(h.potential(static_cast<double>(wf.grid.x(j)))) * dt / Real(2));
    }
    const ComplexVector<Real> full_v = half_v.cwiseProduct(half_v);
    psi = psi.cwiseProduct(half_v);
    for (int s = 0; s < steps; ++s) {
      fft.fwd(spectrum, psi);
      spectrum = spectrum.cwiseProduct(kinetic);
      fft.inv(psi, spectrum);
      psi = psi.cwiseProduct(s + 1 < steps ? full_v : half_v);
    }
  }

  BasicWaveFunction<Real> out{wf.grid, std::move(psi)};
  if (edge_amplitude(out) >= static_cast<Real>(kEdgeAmplitudeLimit)) {
    throw DomainError("wave packet reached the domain edge during evolution");
  }
  return out;
}

template <typename Real>
Real mean_force(const BasicWaveFunction<Real>& wf, const HamiltonianSpec& h) {
  const RealVector<Real> rho = wf.amplitudes.cwiseAbs2();
  Real f = 0;
  for (Eigen::Index j = 0; j < rho.size(); ++j) f += rho[j] * static_cast<Real>(h.force(wf.grid.x(j)));
  return f / rho.sum();
}

}  // namespace gibbs::quantum
