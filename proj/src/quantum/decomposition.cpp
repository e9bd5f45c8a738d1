#include "gibbs/quantum/decomposition.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "gibbs/quantum/density.hpp"

namespace gibbs::quantum {
namespace {

using Eigen::Index;

constexpr double kPi = std::numbers::pi;

// Densities are cached; the objective only ever needs |u|^2.
struct Cluster {
  std::vector<Eigen::VectorXcd> vectors;
  std::vector<Eigen::VectorXd> densities;
  double dx = 1.0;
};

double pair_overlap(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double dx) {
  return a.cwiseMin(b).sum() * dx;
}

double total_overlap(const Cluster& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < c.vectors.size(); ++j) s += pair_overlap(c.densities[i], c.densities[j], c.dx);
  }
  return s;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> rotate(const Eigen::VectorXcd& ui, const Eigen::VectorXcd& uj,
                                                     double theta, double alpha) {
  const std::complex<double> phase = std::polar(1.0, alpha);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * ui + phase * s * uj, -std::conj(phase) * s * ui + c * uj};
}

// Overlap terms that involve slot i or j after rotating that pair.
double pair_objective(const Cluster& c, std::size_t i, std::size_t j, double theta, double alpha) {
  const auto [ri, rj] = rotate(c.vectors[i], c.vectors[j], theta, alpha);
  const Eigen::VectorXd di = ri.cwiseAbs2();
  const Eigen::VectorXd dj = rj.cwiseAbs2();
  double f = pair_overlap(di, dj, c.dx);
  for (std::size_t k = 0; k < c.vectors.size(); ++k) {
    if (k == i || k == j) continue;
    f += pair_overlap(di, c.densities[k], c.dx) + pair_overlap(dj, c.densities[k], c.dx);
  }
  return f;
}

// Nelder-Mead on (theta, alpha); both are periodic so no bounds are needed.
template <typename F>
std::pair<std::array<double, 2>, double> nelder_mead(F&& f, std::array<double, 2> start, std::array<double, 2> step) {
  using P = std::array<double, 2>;
  std::array<P, 3> x{start, P{start[0] + step[0], start[1]}, P{start[0], start[1] + step[1]}};
  std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};
  auto combine = [](const P& a, const P& b, double t) { return P{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])}; };
  for (int iter = 0; iter < 4000; ++iter) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = order[0], mid = order[1], worst = order[2];
    const double size = std::max(std::abs(x[mid][0] - x[best][0]) + std::abs(x[mid][1] - x[best][1]),
                                 std::abs(x[worst][0] - x[best][0]) + std::abs(x[worst][1] - x[best][1]));
    if (size < 1e-13 || fx[worst] - fx[best] < 1e-18) break;
    const P centroid{0.5 * (x[best][0] + x[mid][0]), 0.5 * (x[best][1] + x[mid][1])};
    const P reflected = combine(centroid, x[worst], -1.0);
    const double fr = f(reflected);
    if (fr < fx[best]) {
      const P expanded = combine(centroid, x[worst], -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        x[worst] = expanded;
        fx[worst] = fe;
      } else {
        x[worst] = reflected;
        fx[worst] = fr;
      }
    } else if (fr < fx[mid]) {
      x[worst] = reflected;
      fx[worst] = fr;
    } else {
      const P contracted = fr < fx[worst] ? combine(centroid, reflected, 0.5) : combine(centroid, x[worst], 0.5);
      const double fc = f(contracted);
      if (fc < std::min(fr, fx[worst])) {
        x[worst] = contracted;
        fx[worst] = fc;
      } else {
        for (int k : {mid, worst}) {
          x[k] = combine(x[best], x[k], 0.5);
          fx[k] = f(x[k]);
        }
      }
    }
  }
  const auto it = std::min_element(fx.begin(), fx.end());
  return {x[static_cast<std::size_t>(it - fx.begin())], *it};
}

void localize(Cluster& c, const DecompositionOptions& options, std::mt19937_64* rng) {
  const std::size_t d = c.vectors.size();
  double theta0 = 0.0;
  double alpha0 = 0.0;
  const int n_theta = std::max(4, options.scan_points);
  const int n_alpha = 2 * n_theta;
  const double d_theta = 0.5 * kPi / n_theta;
  const double d_alpha = 2.0 * kPi / n_alpha;

  if (rng) {
    // Random unitary start within the eigenspace (QR of a complex Gaussian matrix).
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd z(static_cast<Index>(d), static_cast<Index>(d));
    for (Index i = 0; i < z.rows(); ++i) {
      for (Index j = 0; j < z.cols(); ++j) z(i, j) = {gauss(*rng), gauss(*rng)};
    }
    const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(z).householderQ();
    std::vector<Eigen::VectorXcd> mixed(d, Eigen::VectorXcd::Zero(c.vectors.front().size()));
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < d; ++i) mixed[j] += q(static_cast<Index>(i), static_cast<Index>(j)) * c.vectors[i];
    }
    c.vectors = std::move(mixed);
    for (std::size_t i = 0; i < d; ++i) c.densities[i] = c.vectors[i].cwiseAbs2();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    theta0 = unit(*rng) * d_theta;
    alpha0 = unit(*rng) * d_alpha;
  }

  double current = total_overlap(c);
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool improved = false;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        auto f = [&](const std::array<double, 2>& p) { return pair_objective(c, i, j, p[0], p[1]); };
        std::array<double, 2> best{0.0, 0.0};
        double best_f = f(best);
        for (int a = 0; a < n_theta; ++a) {
          for (int b = 0; b < n_alpha; ++b) {
            const std::array<double, 2> p{theta0 + a * d_theta, alpha0 + b * d_alpha};
            const double v = f(p);
            if (v < best_f) {
              best_f = v;
              best = p;
            }
          }
        }
        const auto [p, value] = nelder_mead(f, best, {0.5 * d_theta, 0.5 * d_alpha});
        const double before = f({0.0, 0.0});
        if (value < before - 1e-15 * std::max(1.0, before)) {
          auto [ri, rj] = rotate(c.vectors[i], c.vectors[j], p[0], p[1]);
          c.vectors[i] = std::move(ri);
          c.vectors[j] = std::move(rj);
          c.densities[i] = c.vectors[i].cwiseAbs2();
          c.densities[j] = c.vectors[j].cwiseAbs2();
          improved = true;
        }
      }
    }
    const double next = total_overlap(c);
    if (!improved || current - next <= 1e-16) break;
    current = next;
  }
}

WaveFunction canonical_phase(WaveFunction wf) {
  Index peak = 0;
  wf.amplitudes.cwiseAbs().maxCoeff(&peak);
  const std::complex<double> z = wf.amplitudes[peak];
  if (std::abs(z) > 0.0) wf.amplitudes *= std::conj(z) / std::abs(z);
  return wf;
}

}  // namespace

std::optional<ParticleDecomposition> detect_particle_decomposition(const ManyBodyState& state,
                                                                   const DecompositionOptions& options) {
  if (!(options.epsilon_support > 0.0 && options.epsilon_support < 1.0) ||
      !(options.epsilon_reconstruct > 0.0 && options.epsilon_reconstruct < 1.0)) {
    throw DomainError("decomposition tolerances must lie in (0, 1)");
  }
  if (state.symmetry == Symmetry::None || state.n_particles < 2) return std::nullopt;

  const auto n = static_cast<double>(state.n_particles);
  const Spectrum spec = spectrum(reduced_density(state, 0));

  // Occupation numbers: eigenvalue * N rounded; eigenvalues rounding to 0 are dropped.
  std::vector<std::size_t> kept;
  std::vector<long> occupation;
  long total = 0;
  for (Index k = 0; k < spec.eigenvalues.size(); ++k) {
    const long occ = std::lround(spec.eigenvalues[k] * n);
    if (occ <= 0) continue;
    kept.push_back(static_cast<std::size_t>(k));
    occupation.push_back(occ);
    total += occ;
  }
  if (total != static_cast<long>(state.n_particles)) return std::nullopt;

  std::mt19937_64 rng(options.start_seed);
  std::mt19937_64* start = options.start_seed != 0 ? &rng : nullptr;

  std::vector<WaveFunction> distinct;
  std::vector<long> distinct_occupation;
  const Grid& grid = state.orbitals.front().grid;
  for (std::size_t a = 0; a < kept.size();) {
    std::size_t b = a + 1;
    while (b < kept.size() && std::abs(spec.eigenvalues[static_cast<Index>(kept[b])] -
                                       spec.eigenvalues[static_cast<Index>(kept[b - 1])]) <=
                                  options.degeneracy_tolerance) {
      ++b;
    }
    Cluster c;
    c.dx = grid.spacing();
    for (std::size_t k = a; k < b; ++k) {
      c.vectors.push_back(spec.eigenfunctions[kept[k]].amplitudes);
      c.densities.push_back(c.vectors.back().cwiseAbs2());
    }
    if (c.vectors.size() > 1) localize(c, options, start);
    for (std::size_t k = a; k < b; ++k) {
      distinct.push_back(normalized(WaveFunction{grid, c.vectors[k - a]}));
      distinct_occupation.push_back(occupation[k]);
    }
    a = b;
  }

  ParticleDecomposition out;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    for (std::size_t j = i + 1; j < distinct.size(); ++j) {
      out.max_support_overlap = std::max(out.max_support_overlap, support_overlap(distinct[i], distinct[j]));
    }
  }
  if (out.max_support_overlap > options.epsilon_support) return std::nullopt;

  for (auto& wf : distinct) wf = canonical_phase(std::move(wf));
  std::vector<std::size_t> order(distinct.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return mean_position(distinct[x]) < mean_position(distinct[y]);
  });
  for (std::size_t i : order) {
    for (long r = 0; r < distinct_occupation[i]; ++r) out.packets.push_back(distinct[i]);
    out.degenerate_occupation = out.degenerate_occupation || distinct_occupation[i] > 1;
  }

  try {
    const ManyBodyState rebuilt = symmetrize(out.packets, state.symmetry);
    out.reconstruction_error = phase_aligned_distance(state, rebuilt);
  } catch (const DomainError&) {
    return std::nullopt;  // e.g. doubly occupied fermion packet
  }
  if (out.reconstruction_error > options.epsilon_reconstruct) return std::nullopt;
  return out;
}

std::optional<ParticleDecomposition> detect_particle_decomposition(const ManyBodyState& state,
                                                                   double epsilon_support,
                                                                   double epsilon_reconstruct) {
  DecompositionOptions options;
  options.epsilon_support = epsilon_support;
  options.epsilon_reconstruct = epsilon_reconstruct;
  return detect_particle_decomposition(state, options);
}

bool equivalent_up_to_phase_and_order(std::span<const WaveFunction> a, std::span<const WaveFunction> b,
                                      double tolerance) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const WaveFunction& x : a) {
    bool matched = false;
    for (std::size_t j = 0; j < b.size() && !matched; ++j) {
      if (used[j]) continue;
      if (std::abs(overlap(x, b[j])) >= 1.0 - tolerance) {
        used[j] = true;
        matched = true;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace gibbs::quantum
