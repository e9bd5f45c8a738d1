#pragma once

// One-particle wave functions sampled on a uniform periodic grid, with
// hbar = m = 1. All single-particle operations are free functions templated
// on the real scalar type.

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <unsupported/Eigen/FFT>

#include "gibbs/errors.hpp"

namespace gibbs::quantum {

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

/// Uniform grid x_j = x_min + j (x_max - x_min) / points, j = 0 .. points-1.
template <typename Real>
struct BasicGrid {
  Real x_min = Real(-20);
  Real x_max = Real(20);
  Eigen::Index points = 1024;

  Real length() const { return x_max - x_min; }
  Real spacing() const { return length() / static_cast<Real>(points); }
  Real x(Eigen::Index j) const { return x_min + static_cast<Real>(j) * spacing(); }

  RealVector<Real> positions() const {
    RealVector<Real> out(points);
    for (Eigen::Index j = 0; j < points; ++j) out[j] = x(j);
    return out;
  }

  /// Angular wavenumbers in FFT order (0, 1, .., n/2-1, -n/2, .., -1) * 2 pi / L.
  RealVector<Real> wavenumbers() const {
    RealVector<Real> k(points);
    const Real dk = Real(2) * std::numbers::pi_v<Real> / length();
    for (Eigen::Index j = 0; j < points; ++j) {
      const Eigen::Index m = j < points / 2 ? j : j - points;
      k[j] = dk * static_cast<Real>(m);
    }
    return k;
  }

  bool operator==(const BasicGrid&) const = default;
};

template <typename Real>
void validate(const BasicGrid<Real>& g) {
  if (!(g.x_max > g.x_min)) throw DomainError("grid needs x_max > x_min");
  if (g.points < 2 || (g.points & (g.points - 1)) != 0) {
    throw DomainError("grid point count must be a power of two, got " + std::to_string(g.points));
  }
}

template <typename Real>
struct BasicWaveFunction {
  BasicGrid<Real> grid;
  ComplexVector<Real> amplitudes;
};

using Grid = BasicGrid<double>;
using WaveFunction = BasicWaveFunction<double>;

template <typename Real>
void require_same_grid(const BasicWaveFunction<Real>& a, const BasicWaveFunction<Real>& b) {
  if (!(a.grid == b.grid)) throw DomainError("wave functions live on different grids");
}

/// <a|b> = sum conj(a) b dx.
template <typename Real>
std::complex<Real> overlap(const BasicWaveFunction<Real>& a, const BasicWaveFunction<Real>& b) {
  require_same_grid(a, b);
  return a.amplitudes.dot(b.amplitudes) * a.grid.spacing();
}

template <typename Real>
Real norm_squared(const BasicWaveFunction<Real>& a) {
  return a.amplitudes.squaredNorm() * a.grid.spacing();
}

template <typename Real>
BasicWaveFunction<Real> normalized(BasicWaveFunction<Real> a) {
  const Real n2 = norm_squared(a);
  if (!(n2 > Real(0))) throw DomainError("cannot normalise a zero wave function");
  a.amplitudes /= std::sqrt(n2);
  return a;
}

/// Integral of min(|a|^2, |b|^2): the operational measure of spatial overlap.
template <typename Real>
Real support_overlap(const BasicWaveFunction<Real>& a, const BasicWaveFunction<Real>& b) {
  require_same_grid(a, b);
  return a.amplitudes.cwiseAbs2().cwiseMin(b.amplitudes.cwiseAbs2()).sum() * a.grid.spacing();
}

template <typename Real>
Real mean_position(const BasicWaveFunction<Real>& a) {
  const RealVector<Real> rho = a.amplitudes.cwiseAbs2();
  return rho.dot(a.grid.positions()) / rho.sum();
}

template <typename Real>
Real position_variance(const BasicWaveFunction<Real>& a) {
  const RealVector<Real> rho = a.amplitudes.cwiseAbs2();
  const RealVector<Real> x = a.grid.positions();
  const Real mean = rho.dot(x) / rho.sum();
  return rho.dot((x.array() - mean).square().matrix()) / rho.sum();
}

template <typename Real>
ComplexVector<Real> to_momentum_space(const BasicWaveFunction<Real>& a) {
  Eigen::FFT<Real> fft;
  ComplexVector<Real> out(a.amplitudes.size());
  fft.fwd(out, a.amplitudes);
  return out;
}

template <typename Real>
Real mean_momentum(const BasicWaveFunction<Real>& a) {
  const RealVector<Real> w = to_momentum_space(a).cwiseAbs2();
  return w.dot(a.grid.wavenumbers()) / w.sum();
}

/// Largest amplitude magnitude at the two boundary points.
template <typename Real>
Real edge_amplitude(const BasicWaveFunction<Real>& a) {
  const Eigen::Index n = a.amplitudes.size();
  return std::max(std::abs(a.amplitudes[0]), std::abs(a.amplitudes[n - 1]));
}

/// Normalised Gaussian with position standard deviation `width` and mean
/// momentum `momentum`. Needs [center - 6 width, center + 6 width] inside
/// the grid.
template <typename Real>
BasicWaveFunction<Real> gaussian_packet(const BasicGrid<Real>& grid, Real center, Real momentum, Real width) {
  validate(grid);
  if (!(width > Real(0))) throw DomainError("packet width must be positive");
  const Real x_last = grid.x(grid.points - 1);
  if (center - Real(6) * width < grid.x_min || center + Real(6) * width > x_last) {
    throw DomainError("packet tail (6 sigma) reaches the domain edge");
  }
  BasicWaveFunction<Real> wf{grid, ComplexVector<Real>(grid.points)};
  const std::complex<Real> i(0, 1);
  for (Eigen::Index j = 0; j < grid.points; ++j) {
    const Real d = grid.x(j) - center;
    wf.amplitudes[j] = std::exp(-d * d / (Real(4) * width * width) + i * momentum * grid.x(j));
  }
  return normalized(std::move(wf));
}

}  // namespace gibbs::quantum
