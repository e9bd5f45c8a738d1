#include "gibbs/quantum/density.hpp"

#include <Eigen/Dense>
#include <algorithm>

namespace gibbs::quantum {

OrthonormalFrame orthonormal_frame(const Eigen::MatrixXcd& gram, double relative_cutoff) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  const Eigen::VectorXd& g = es.eigenvalues();
  const double cutoff = relative_cutoff * std::max(g.maxCoeff(), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    if (g[j] > cutoff) keep.push_back(j);
  }
  OrthonormalFrame f;
  f.coefficients.resize(gram.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    f.coefficients.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) / std::sqrt(g[keep[c]]);
  }
  f.projection = f.coefficients.adjoint() * gram;
  return f;
}

DensityOperator reduced_density(const ManyBodyState& state, std::size_t slot) {
  if (slot >= state.n_particles) throw DomainError("reduced density: slot out of range");
  const Eigen::MatrixXcd g = gram_matrix(state.orbitals, state.orbitals);
  const auto m = static_cast<Eigen::Index>(state.orbitals.size());
  DensityOperator rho{state.orbitals, Eigen::MatrixXcd::Zero(m, m)};
  for (const ProductTerm& s : state.terms) {
    for (const ProductTerm& t : state.terms) {
      std::complex<double> w = s.coefficient * std::conj(t.coefficient);
      for (std::size_t l = 0; l < state.n_particles; ++l) {
        if (l == slot) continue;
        w *= g(static_cast<Eigen::Index>(t.orbitals[l]), static_cast<Eigen::Index>(s.orbitals[l]));
      }
      rho.matrix(static_cast<Eigen::Index>(s.orbitals[slot]), static_cast<Eigen::Index>(t.orbitals[slot])) += w;
    }
  }
  return rho;
}

std::complex<double> trace(const DensityOperator& rho) {
  return (rho.matrix * gram_matrix(rho.basis, rho.basis)).trace();
}

Eigen::MatrixXcd orthonormal_matrix(const DensityOperator& rho) {
  const OrthonormalFrame f = orthonormal_frame(gram_matrix(rho.basis, rho.basis));
  return f.projection * rho.matrix * f.projection.adjoint();
}

Spectrum spectrum(const DensityOperator& rho) {
  const OrthonormalFrame f = orthonormal_frame(gram_matrix(rho.basis, rho.basis));
  Eigen::MatrixXcd m = f.projection * rho.matrix * f.projection.adjoint();
  m = (0.5 * (m + m.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);

  Eigen::MatrixXcd amplitudes(rho.basis.front().amplitudes.size(), static_cast<Eigen::Index>(rho.basis.size()));
  for (std::size_t a = 0; a < rho.basis.size(); ++a) amplitudes.col(static_cast<Eigen::Index>(a)) = rho.basis[a].amplitudes;

  Spectrum out;
  const Eigen::Index r = m.rows();
  out.eigenvalues.resize(r);
  for (Eigen::Index c = 0; c < r; ++c) {
    const Eigen::Index src = r - 1 - c;  // solver sorts ascending
    out.eigenvalues[c] = es.eigenvalues()[src];
    WaveFunction wf{rho.basis.front().grid, amplitudes * (f.coefficients * es.eigenvectors().col(src))};
    out.eigenfunctions.push_back(normalized(std::move(wf)));
  }
  return out;
}

double operator_distance(const DensityOperator& a, const DensityOperator& b) {
  std::vector<WaveFunction> basis = a.basis;
  basis.insert(basis.end(), b.basis.begin(), b.basis.end());
  const Eigen::Index na = a.matrix.rows();
  const Eigen::Index nb = b.matrix.rows();
  Eigen::MatrixXcd diff = Eigen::MatrixXcd::Zero(na + nb, na + nb);
  diff.topLeftCorner(na, na) = a.matrix;
  diff.bottomRightCorner(nb, nb) = -b.matrix;
  const OrthonormalFrame f = orthonormal_frame(gram_matrix(basis, basis));
  Eigen::MatrixXcd m = f.projection * diff * f.projection.adjoint();
  m = (0.5 * (m + m.adjoint())).eval();
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m, Eigen::EigenvaluesOnly).eigenvalues();
  return ev.cwiseAbs().maxCoeff();
}

double hermiticity_error(const DensityOperator& rho) {
  const Eigen::MatrixXcd m = orthonormal_matrix(rho);
  return (m - m.adjoint()).norm();
}

}  // namespace gibbs::quantum
