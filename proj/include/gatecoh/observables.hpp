/* This file is part of gatecoh, a library for coherence budgets of
 * energy non-preserving gates.
 *
 * Distributed under the MIT license; see LICENSE for terms.
 */

#ifndef GATECOH_OBSERVABLES_HPP
#define GATECOH_OBSERVABLES_HPP

#include <cmath>

#include "common.hpp"
#include "hamiltonian.hpp"
#include "linalg.hpp"
#include "states.hpp"

namespace gatecoh {

struct Moments {
  double mean;
  double variance;
};

/** Mean and variance of the energy in a state.
 *
 *  Uses the level decomposition, so H and H^2 share exact projectors.
 */
inline Moments energy_moments(const DensityOperator& rho, const Hamiltonian& h) {
  if (rho.dim() != h.dim())
    throw schema_error("energy_moments: dimension mismatch");
  double m1 = 0.0, m2 = 0.0;
  for (int k = 0; k < h.level_count(); ++k) {
    const double p = (rho.matrix() * h.projector(k)).trace().real();
    m1 += h.energy(k) * p;
    m2 += h.energy(k) * h.energy(k) * p;
  }
  return {m1, std::max(m2 - m1 * m1, 0.0)};
}

/** Quantum Fisher information of rho for the phase family e^{-iHt}.
 *
 *  Symmetric-logarithmic-derivative form
 *    QFI = 2 sum_{j,k} (l_j - l_k)^2 / (l_j + l_k) |<j|H|k>|^2 ,
 *  which reduces to 4 Var(H) on pure states.
 */
inline double quantum_fisher_information(const DensityOperator& rho,
                                         const Hamiltonian& h) {
  if (rho.dim() != h.dim())
    throw schema_error("quantum_fisher_information: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(rho.matrix()));
  const RealVector lam = es.eigenvalues();
  const Matrix hh = es.eigenvectors().adjoint() * h.matrix() * es.eigenvectors();
  const int d = rho.dim();
  double q = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      const double lj = std::max(lam(j), 0.0), lk = std::max(lam(k), 0.0);
      if (lj + lk <= tol::entropy_clamp) continue;
      q += 2.0 * sq(lj - lk) / (lj + lk) * std::norm(hh(j, k));
    }
  return q;
}

/** Haar-random unitary commuting with H: an independent Haar block on each
 *  energy eigenspace.  For a nondegenerate spectrum this is a random phase
 *  per eigenvector. */
inline Matrix random_energy_preserving_unitary(const Hamiltonian& h, Rng& rng) {
  Matrix u = Matrix::Zero(h.dim(), h.dim());
  for (int k = 0; k < h.level_count(); ++k) {
    const Matrix& iso = h.isometry(k);
    const Matrix block = haar_unitary(static_cast<int>(iso.cols()), rng);
    u += iso * block * iso.adjoint();
  }
  return u;
}

} // namespace gatecoh

#endif // GATECOH_OBSERVABLES_HPP
