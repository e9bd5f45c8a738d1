#include "gibbs/quantum/many_body.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <numeric>

namespace gibbs::quantum {
namespace {

constexpr std::size_t kMaxParticles = 8;

Eigen::MatrixXcd stacked(std::span<const WaveFunction> fs) {
  Eigen::MatrixXcd m(fs.front().amplitudes.size(), static_cast<Eigen::Index>(fs.size()));
  for (std::size_t j = 0; j < fs.size(); ++j) {
    require_same_grid(fs.front(), fs[j]);
    m.col(static_cast<Eigen::Index>(j)) = fs[j].amplitudes;
  }
  return m;
}

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

int parity(const std::vector<std::size_t>& p) {
  int inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) inversions += p[i] > p[j] ? 1 : 0;
  }
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace

Eigen::MatrixXcd gram_matrix(std::span<const WaveFunction> bra, std::span<const WaveFunction> ket) {
  if (bra.empty() || ket.empty()) {
    return Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(bra.size()), static_cast<Eigen::Index>(ket.size()));
  }
  require_same_grid(bra.front(), ket.front());
  return stacked(bra).adjoint() * stacked(ket) * bra.front().grid.spacing();
}

std::complex<double> permanent(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw DomainError("permanent needs a square matrix");
  if (n == 0) return 1.0;
  if (n > 20) throw DomainError("permanent: matrix too large");
  std::complex<double> total = 0.0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  Eigen::VectorXcd row_sums(n);
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    row_sums.setZero();
    for (Eigen::Index j = 0; j < n; ++j) {
      if ((mask >> j) & 1u) row_sums += a.col(j);
    }
    const std::complex<double> prod = row_sums.prod();
    const int size = std::popcount(mask);
    total += ((n - size) % 2 == 0) ? prod : -prod;
  }
  return total;
}

std::complex<double> inner_product(const ManyBodyState& a, const ManyBodyState& b) {
  if (a.n_particles != b.n_particles) throw DomainError("inner product of states with different particle numbers");
  const Eigen::MatrixXcd g = gram_matrix(a.orbitals, b.orbitals);
  std::complex<double> total = 0.0;
  for (const ProductTerm& s : a.terms) {
    for (const ProductTerm& t : b.terms) {
      std::complex<double> prod = std::conj(s.coefficient) * t.coefficient;
      for (std::size_t k = 0; k < a.n_particles; ++k) {
        prod *= g(static_cast<Eigen::Index>(s.orbitals[k]), static_cast<Eigen::Index>(t.orbitals[k]));
      }
      total += prod;
    }
  }
  return total;
}

double norm(const ManyBodyState& state) { return std::sqrt(std::max(0.0, inner_product(state, state).real())); }

double phase_aligned_distance(const ManyBodyState& a, const ManyBodyState& b) {
  const double aa = inner_product(a, a).real();
  const double bb = inner_product(b, b).real();
  return std::sqrt(std::max(0.0, aa + bb - 2.0 * std::abs(inner_product(a, b))));
}

ManyBodyState product_state(std::vector<WaveFunction> factors) {
  if (factors.empty()) throw DomainError("product state needs at least one factor");
  ManyBodyState s;
  s.n_particles = factors.size();
  ProductTerm term{1.0, std::vector<std::size_t>(factors.size())};
  std::iota(term.orbitals.begin(), term.orbitals.end(), std::size_t{0});
  s.terms.push_back(std::move(term));
  s.orbitals = std::move(factors);
  return s;
}

ManyBodyState symmetrize(std::span<const WaveFunction> packets, Symmetry symmetry) {
  const std::size_t n = packets.size();
  if (n < 2) throw DomainError("symmetrisation needs at least two packets");
  if (n > kMaxParticles) throw DomainError("symmetrisation supports at most 8 packets");
  if (symmetry == Symmetry::None) throw DomainError("symmetrize needs Bose or Fermi symmetry");

  const Eigen::MatrixXcd g = gram_matrix(packets, packets);
  double norm_sq = 0.0;
  if (symmetry == Symmetry::Fermi) {
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(g, Eigen::EigenvaluesOnly).eigenvalues();
    if (ev.minCoeff() <= 1e-10 * ev.maxCoeff()) {
      throw DomainError("antisymmetrised product of linearly dependent packets is the zero state");
    }
    norm_sq = factorial(n) * g.determinant().real();
  } else {
    norm_sq = factorial(n) * permanent(g).real();
  }
  if (!(norm_sq > 0.0)) throw DomainError("symmetrised product has zero norm");
  const double c = 1.0 / std::sqrt(norm_sq);

  ManyBodyState s;
  s.n_particles = n;
  s.symmetry = symmetry;
  s.orbitals.assign(packets.begin(), packets.end());
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    const double sign = symmetry == Symmetry::Fermi ? parity(perm) : 1.0;
    s.terms.push_back({sign * c, perm});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return s;
}

ManyBodyState transposed(const ManyBodyState& state, std::size_t i, std::size_t j) {
  if (i >= state.n_particles || j >= state.n_particles) throw DomainError("transposition index out of range");
  ManyBodyState out = state;
  for (ProductTerm& t : out.terms) std::swap(t.orbitals[i], t.orbitals[j]);
  return out;
}

PermutationClass permutation_check(const ManyBodyState& state, std::pair<std::size_t, std::size_t> transposition,
                                   double tolerance) {
  const auto [i, j] = transposition;
  if (i == j) throw DomainError("transposition needs two distinct slots");
  const ManyBodyState swapped = transposed(state, i, j);
  const std::complex<double> ratio = inner_product(state, swapped) / inner_product(state, state).real();
  if (std::abs(ratio - 1.0) <= tolerance) return PermutationClass::Invariant;
  if (std::abs(ratio + 1.0) <= tolerance) return PermutationClass::SignFlip;
  return PermutationClass::Neither;
}

}  // namespace gibbs::quantum
