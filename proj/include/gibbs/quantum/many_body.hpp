#pragma once

// Many-body states kept symbolically as sums of product terms over a pool of
// one-particle grid functions. All inner products reduce to the Gram matrix
// of the pool, so no N-index tensor is ever formed.

#include <Eigen/Core>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gibbs/quantum/wavefunction.hpp"

namespace gibbs::quantum {

enum class Symmetry { None, Bose, Fermi };
enum class PermutationClass { Invariant, SignFlip, Neither };

/// coefficient * |orbitals[slot 0]> |orbitals[slot 1]> ...
struct ProductTerm {
  std::complex<double> coefficient;
  std::vector<std::size_t> orbitals;
};

struct ManyBodyState {
  std::size_t n_particles = 0;
  std::vector<WaveFunction> orbitals;
  std::vector<ProductTerm> terms;
  Symmetry symmetry = Symmetry::None;
};

/// G(i, j) = <bra_i | ket_j>.
Eigen::MatrixXcd gram_matrix(std::span<const WaveFunction> bra, std::span<const WaveFunction> ket);

/// Ryser's formula, O(2^n n).
std::complex<double> permanent(const Eigen::MatrixXcd& a);

/// Term-by-term sum over both expansions with Gram-matrix factors.
std::complex<double> inner_product(const ManyBodyState& a, const ManyBodyState& b);
double norm(const ManyBodyState& state);

/// min over a global phase of || a - e^{i phi} b ||, for normalised states.
double phase_aligned_distance(const ManyBodyState& a, const ManyBodyState& b);

/// Plain (unsymmetrised) product |f_1>|f_2>...
ManyBodyState product_state(std::vector<WaveFunction> factors);

/// Normalised (anti)symmetrised product over all N! permutations. The
/// normalisation is 1 / sqrt(N! perm G) for bosons and 1 / sqrt(N! det G)
/// for fermions, which reduces to 1 / sqrt(N!) for orthonormal packets.
/// Throws DomainError for N < 2 or for linearly dependent fermion packets.
ManyBodyState symmetrize(std::span<const WaveFunction> packets, Symmetry symmetry);

/// The state with slots i and j exchanged in every term.
ManyBodyState transposed(const ManyBodyState& state, std::size_t i, std::size_t j);

/// Compares P_ij |psi> with +-|psi> through <psi|P_ij psi>.
PermutationClass permutation_check(const ManyBodyState& state, std::pair<std::size_t, std::size_t> transposition,
                                   double tolerance = 1e-8);

}  // namespace gibbs::quantum
