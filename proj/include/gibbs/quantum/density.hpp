#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "gibbs/quantum/many_body.hpp"

namespace gibbs::quantum {

/// rho = sum_ab matrix(a, b) |basis_a><basis_b| in a possibly non-orthogonal,
/// possibly linearly dependent basis.
struct DensityOperator {
  std::vector<WaveFunction> basis;
  Eigen::MatrixXcd matrix;
};

/// Canonical (Loewdin) orthonormalisation of a Gram matrix G: chi_j =
/// sum_a coefficients(a, j) |a>, and <chi_j|a> = projection(j, a). Directions
/// with Gram eigenvalue below cutoff * max are dropped.
struct OrthonormalFrame {
  Eigen::MatrixXcd coefficients;
  Eigen::MatrixXcd projection;
};

OrthonormalFrame orthonormal_frame(const Eigen::MatrixXcd& gram, double relative_cutoff = 1e-12);

/// Partial trace over every slot except `slot`:
///   matrix(s_k, t_k) += c_s conj(c_t) prod_{l != k} <t_l|s_l>.
DensityOperator reduced_density(const ManyBodyState& state, std::size_t slot);

/// Tr rho = tr(matrix * G).
std::complex<double> trace(const DensityOperator& rho);

/// Matrix of rho in the orthonormal frame of its basis (Hermitian when rho is).
Eigen::MatrixXcd orthonormal_matrix(const DensityOperator& rho);

struct Spectrum {
  Eigen::VectorXd eigenvalues;               ///< descending
  std::vector<WaveFunction> eigenfunctions;  ///< normalised grid functions
};

Spectrum spectrum(const DensityOperator& rho);

/// Spectral norm of rho_a - rho_b (bases may differ).
double operator_distance(const DensityOperator& a, const DensityOperator& b);

/// Frobenius norm of the anti-Hermitian part in the orthonormal frame.
double hermiticity_error(const DensityOperator& rho);

}  // namespace gibbs::quantum
