/* This file is part of gatecoh, a library for coherence budgets of
 * energy non-preserving gates.
 *
 * Distributed under the MIT license; see LICENSE for terms.
 */

#ifndef GATECOH_COHERENCE_HPP
#define GATECOH_COHERENCE_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "common.hpp"
#include "hamiltonian.hpp"
#include "linalg.hpp"
#include "observables.hpp"
#include "states.hpp"

namespace gatecoh {

//=============================================================================
// EnergyDistribution: outcome distribution of an energy measurement.
//=============================================================================

struct EnergyDistribution {
  struct Entry {
    double energy;
    double probability;
  };
  std::vector<Entry> support;

  EnergyDistribution() = default;
  explicit EnergyDistribution(std::vector<Entry> entries)
      : support(std::move(entries)) {
    double total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (!(support[i].probability > 0.0))
        throw schema_error("EnergyDistribution: probabilities must be positive");
      for (std::size_t j = 0; j < i; ++j)
        if (support[j].energy == support[i].energy)
          throw schema_error("EnergyDistribution: energies must be distinct");
      total += support[i].probability;
    }
    if (std::abs(total - 1.0) > tol::trace)
      throw schema_error("EnergyDistribution: probabilities must sum to 1");
  }

  /** Shannon entropy in bits. */
  double entropy() const {
    double s = 0.0;
    for (const auto& e : support) s -= xlog2x(e.probability);
    return s;
  }

  double mean() const {
    double m = 0.0;
    for (const auto& e : support) m += e.energy * e.probability;
    return m;
  }
};

//=============================================================================
// Twirling and the coherence functional
//=============================================================================

/** Dephase in the energy eigenbasis: sum of P rho P over level projectors. */
inline DensityOperator twirl(const DensityOperator& rho, const Hamiltonian& h) {
  if (rho.dim() != h.dim()) throw schema_error("twirl: dimension mismatch");
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (int k = 0; k < h.level_count(); ++k)
    out += h.projector(k) * rho.matrix() * h.projector(k);
  return DensityOperator::trusted(hermitize(out));
}

/** Entropic coherence C(rho, H) = S(twirl(rho)) - S(rho), in bits. */
inline double entropic_coherence(const DensityOperator& rho,
                                 const Hamiltonian& h) {
  return von_neumann_entropy(twirl(rho, h).matrix()) -
         von_neumann_entropy(rho.matrix());
}

/** Quantum relative entropy S(rho || sigma) in bits; +infinity when the
 *  support of rho leaks out of the support of sigma. */
inline double relative_entropy(const DensityOperator& rho,
                               const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim())
    throw schema_error("relative_entropy: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(sigma.matrix()));
  const RealVector lam = es.eigenvalues();
  const double support_cut = tol::support * sigma.trace();
  // Support check: weight of rho on sigma's kernel.
  double kernel_weight = 0.0;
  double tr_rho_log_sigma = 0.0;
  for (int j = 0; j < sigma.dim(); ++j) {
    const double w =
        (es.eigenvectors().col(j).adjoint() * rho.matrix() *
         es.eigenvectors().col(j))(0)
            .real();
    if (lam(j) <= support_cut)
      kernel_weight += std::max(w, 0.0);
    else
      tr_rho_log_sigma += std::max(w, 0.0) * std::log2(lam(j));
  }
  if (kernel_weight > tol::support)
    return std::numeric_limits<double>::infinity();
  return -von_neumann_entropy(rho.matrix()) - tr_rho_log_sigma;
}

/** True when rho is unchanged by twirling, i.e. C(rho,H) = 0. */
inline bool is_incoherent(const DensityOperator& rho, const Hamiltonian& h,
                          double tolerance = 1e-10) {
  return max_abs_diff(rho.matrix(), twirl(rho, h).matrix()) <= tolerance;
}

/** Local coherence of a bipartite state: dephase each factor in its own
 *  energy eigenbasis before comparing entropies.  Local dephasing refines
 *  total-energy dephasing, so this is at least the total coherence. */
inline double local_coherence(const DensityOperator& rho_ab,
                              const Hamiltonian& h_a, const Hamiltonian& h_b) {
  const long long d = static_cast<long long>(h_a.dim()) * h_b.dim();
  if (rho_ab.dim() != d)
    throw schema_error("local_coherence: dimension mismatch");
  const Matrix eye_a = Matrix::Identity(h_a.dim(), h_a.dim());
  const Matrix eye_b = Matrix::Identity(h_b.dim(), h_b.dim());
  Matrix out = Matrix::Zero(rho_ab.dim(), rho_ab.dim());
  for (int j = 0; j < h_a.level_count(); ++j) {
    const Matrix pa = kron(h_a.projector(j), eye_b);
    Matrix partial = Matrix::Zero(rho_ab.dim(), rho_ab.dim());
    for (int k = 0; k < h_b.level_count(); ++k) {
      const Matrix pb = kron(eye_a, h_b.projector(k));
      partial += pb * (pa * rho_ab.matrix() * pa) * pb;
    }
    out += partial;
  }
  return von_neumann_entropy(hermitize(out)) -
         von_neumann_entropy(rho_ab.matrix());
}

/** Distribution of an energy measurement on a pure state; probabilities
 *  below 1e-14 are dropped. */
inline EnergyDistribution energy_distribution(const PureState& psi,
                                              const Hamiltonian& h) {
  if (psi.dim() != h.dim())
    throw schema_error("energy_distribution: dimension mismatch");
  std::vector<EnergyDistribution::Entry> entries;
  for (int k = 0; k < h.level_count(); ++k) {
    const double p =
        (psi.vector().adjoint() * h.projector(k) * psi.vector())(0).real();
    if (p > tol::prob_drop) entries.push_back({h.energy(k), p});
  }
  return EnergyDistribution(std::move(entries));
}

/** Pure state with the same energy distribution as sigma:
 *  |lift> = sum_E sqrt(<E|sigma|E>) |E>.
 *
 *  For a degenerate level a representative unit vector must be supplied in
 *  basis_choice (indexed by level); its coherence never drops below sigma's.
 */
inline PureState pure_lift(
    const DensityOperator& sigma, const Hamiltonian& h,
    const std::optional<std::vector<Vector>>& basis_choice = std::nullopt) {
  if (sigma.dim() != h.dim()) throw schema_error("pure_lift: dimension mismatch");
  Vector out = Vector::Zero(h.dim());
  for (int k = 0; k < h.level_count(); ++k) {
    const double p = (sigma.matrix() * h.projector(k)).trace().real();
    if (p <= 0.0) continue;
    Vector rep;
    if (h.degeneracy(k) == 1) {
      rep = h.isometry(k).col(0);
    } else {
      if (!basis_choice || k >= static_cast<int>(basis_choice->size()))
        throw schema_error(
            "basis required: degenerate level needs an explicit representative");
      rep = (*basis_choice)[k];
      if (rep.size() != h.dim() || std::abs(rep.norm() - 1.0) > tol::norm)
        throw schema_error("pure_lift: representative must be a unit vector");
      if ((h.projector(k) * rep - rep).norm() > 1e-9)
        throw schema_error("pure_lift: representative not in its eigenspace");
    }
    out += std::sqrt(std::max(p, 0.0)) * rep;
  }
  return PureState(out / out.norm());
}

//=============================================================================
// Refined continuity bound
//=============================================================================

struct EntropyContinuityBound {
  double bound;    ///< S(rho) - S(sigma) is guaranteed <= bound.
  double distance; ///< trace distance D(rho, sigma)
  double s_plus;   ///< entropy of the normalized positive difference part
  double s_minus;  ///< entropy of the normalized negative difference part
};

/** One-sided refined continuity bound
 *    S(rho) - S(sigma) <= D * (S(d+) - S(d-)) + h2(D)
 *  with d± the Jordan-Hahn parts of rho - sigma normalized by D.
 *  Eigenvalues of the difference within ±1e-12 go to the positive part. */
inline EntropyContinuityBound refined_fannes_audenaert(
    const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim())
    throw schema_error("refined_fannes_audenaert: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      hermitize(rho.matrix() - sigma.matrix()));
  const RealVector lam = es.eigenvalues();
  std::vector<double> plus, minus;
  double d_plus = 0.0, d_minus = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) >= -tol::dual_route) {
      plus.push_back(lam(i));
      d_plus += lam(i);
    } else {
      minus.push_back(-lam(i));
      d_minus += -lam(i);
    }
  }
  const double dist = 0.5 * (d_plus + d_minus);
  if (dist <= 0.0) return {0.0, 0.0, 0.0, 0.0};
  double s_plus = 0.0, s_minus = 0.0;
  for (double x : plus) s_plus -= xlog2x(x / dist);
  for (double x : minus) s_minus -= xlog2x(x / dist);
  const double h = (dist <= 1.0) ? binary_entropy(std::min(dist, 1.0)) : 0.0;
  return {dist * (s_plus - s_minus) + h, dist, s_plus, s_minus};
}

} // namespace gatecoh

#endif // GATECOH_COHERENCE_HPP
