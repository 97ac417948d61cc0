/* This file is part of gatecoh, a library for coherence budgets of
 * energy non-preserving gates.
 *
 * Distributed under the MIT license; see LICENSE for terms.
 */

#ifndef GATECOH_HAMILTONIAN_HPP
#define GATECOH_HAMILTONIAN_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "common.hpp"
#include "linalg.hpp"

namespace gatecoh {

/// Largest dimension for dense matrices (2^20 entries = 1024 x 1024).
inline constexpr long long kMaxDenseDim = 1024;

//=============================================================================
// Hamiltonian: a finite spectrum presented as (energy, projector) levels.
//
// Levels are strictly increasing in energy, separated by more than the
// grouping tolerance, with orthogonal projectors resolving the identity.
//=============================================================================

class Hamiltonian {
public:
  struct Level {
    double energy;
    Matrix projector;
  };

  Hamiltonian(int dim, std::vector<Level> levels, double grouping_tol)
      : dim_(dim), grouping_tol_(grouping_tol), levels_(std::move(levels)) {
    validate_();
    build_isometries_();
  }

  /** Diagonalize a Hermitian matrix and group eigenvalues closer than the
   *  tolerance into degenerate levels (level energy = group mean).
   *
   *  A negative grouping_tol selects the adaptive default
   *  1e-9 * (spectral radius + 1). */
  static Hamiltonian from_matrix(const Matrix& h, double grouping_tol = -1.0) {
    if (h.rows() != h.cols() || h.rows() < 1)
      throw schema_error("Hamiltonian: matrix must be square and nonempty");
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > tol::projector)
      throw schema_error("Hamiltonian: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(h));
    const RealVector lam = es.eigenvalues();
    const Matrix& vecs = es.eigenvectors();
    const int d = static_cast<int>(h.rows());
    if (grouping_tol < 0.0)
      grouping_tol = 1e-9 * (lam.cwiseAbs().maxCoeff() + 1.0);
    std::vector<Level> levels;
    int start = 0;
    for (int i = 1; i <= d; ++i) {
      if (i == d || lam(i) - lam(i - 1) > grouping_tol) {
        const int r = i - start;
        const Matrix iso = vecs.middleCols(start, r);
        double e = 0.0;
        for (int j = start; j < i; ++j) e += lam(j);
        levels.push_back({e / r, iso * iso.adjoint()});
        start = i;
      }
    }
    return Hamiltonian(d, std::move(levels), grouping_tol);
  }

  /** Hamiltonian diagonal in the computational basis with the given energies. */
  static Hamiltonian from_energies(const RealVector& energies,
                                   double grouping_tol = -1.0) {
    return from_matrix(Matrix(energies.cast<cplx>().asDiagonal()), grouping_tol);
  }

  int dim() const { return dim_; }
  double grouping_tol() const { return grouping_tol_; }
  int level_count() const { return static_cast<int>(levels_.size()); }
  double energy(int k) const { return levels_.at(k).energy; }
  const Matrix& projector(int k) const { return levels_.at(k).projector; }
  /** Orthonormal basis of level k as a dim x degeneracy isometry. */
  const Matrix& isometry(int k) const { return isometries_.at(k); }
  int degeneracy(int k) const {
    return static_cast<int>(isometries_.at(k).cols());
  }
  const std::vector<Level>& levels() const { return levels_; }

  std::vector<double> energies() const {
    std::vector<double> e;
    e.reserve(levels_.size());
    for (const auto& l : levels_) e.push_back(l.energy);
    return e;
  }

  /** Dense matrix: sum of energy * projector. */
  Matrix matrix() const {
    Matrix h = Matrix::Zero(dim_, dim_);
    for (const auto& l : levels_) h += l.energy * l.projector;
    return h;
  }

  /** Largest |energy|; used to scale commutator tolerances. */
  double spectral_radius() const {
    double r = 0.0;
    for (const auto& l : levels_) r = std::max(r, std::abs(l.energy));
    return r;
  }

  /** Sign-flipped Hamiltonian (levels reversed so energies stay increasing). */
  Hamiltonian negated() const {
    std::vector<Level> flipped;
    flipped.reserve(levels_.size());
    for (auto it = levels_.rbegin(); it != levels_.rend(); ++it)
      flipped.push_back({-it->energy, it->projector});
    return Hamiltonian(dim_, std::move(flipped), grouping_tol_);
  }

private:
  void validate_() {
    if (dim_ < 1) throw schema_error("Hamiltonian: dim must be positive");
    if (levels_.empty()) throw schema_error("Hamiltonian: no levels");
    if (!(grouping_tol_ >= 0.0))
      throw schema_error("Hamiltonian: grouping_tol must be nonnegative");
    Matrix sum = Matrix::Zero(dim_, dim_);
    for (std::size_t k = 0; k < levels_.size(); ++k) {
      const Matrix& p = levels_[k].projector;
      if (p.rows() != dim_ || p.cols() != dim_)
        throw schema_error("Hamiltonian: projector shape mismatch");
      if ((p - p.adjoint()).cwiseAbs().maxCoeff() > tol::projector)
        throw schema_error("Hamiltonian: projector is not Hermitian");
      if ((p * p - p).cwiseAbs().maxCoeff() > tol::projector)
        throw schema_error("Hamiltonian: projector is not idempotent");
      for (std::size_t j = 0; j < k; ++j)
        if ((levels_[j].projector * p).cwiseAbs().maxCoeff() > tol::projector)
          throw schema_error("Hamiltonian: projectors are not orthogonal");
      if (k > 0 &&
          !(levels_[k].energy - levels_[k - 1].energy > grouping_tol_))
        throw schema_error(
            "Hamiltonian: energies must be strictly increasing and separated "
            "by more than grouping_tol");
      sum += p;
    }
    if ((sum - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > tol::projector)
      throw schema_error("Hamiltonian: projectors do not resolve the identity");
  }

  void build_isometries_() {
    isometries_.clear();
    isometries_.reserve(levels_.size());
    for (const auto& l : levels_) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(l.projector));
      const RealVector lam = es.eigenvalues();
      int r = 0;
      for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (lam(i) > 0.5) ++r;
      // Eigenvalues ascend, so the trailing r columns span the level.
      isometries_.push_back(es.eigenvectors().rightCols(r));
    }
  }

  int dim_;
  double grouping_tol_;
  std::vector<Level> levels_;
  std::vector<Matrix> isometries_;
};

//=============================================================================
// Composites
//=============================================================================

/** Matrix/vector tensor products share the name used for Hamiltonians. */
inline Matrix tensor(const Matrix& a, const Matrix& b) { return kron(a, b); }
inline Vector tensor(const Vector& a, const Vector& b) { return kron_vec(a, b); }

/** Non-interacting composite H (x) 1 + 1 (x) H'.
 *
 *  The composite spectrum is the sum-set of the factor spectra, regrouped at
 *  the larger of the two grouping tolerances.  Throws once the composite
 *  dimension would exceed the global cap.
 */
inline Hamiltonian tensor(const Hamiltonian& a, const Hamiltonian& b) {
  const long long d = static_cast<long long>(a.dim()) * b.dim();
  if (d > kMaxDenseDim)
    throw cap_error("dimension limit: composite Hamiltonian would exceed cap");
  const double gtol = std::max(a.grouping_tol(), b.grouping_tol());
  // Collect sum-set energies with their (i,j) level pairs, then regroup.
  struct Pair {
    double e;
    int i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(a.level_count()) * b.level_count());
  for (int i = 0; i < a.level_count(); ++i)
    for (int j = 0; j < b.level_count(); ++j)
      pairs.push_back({a.energy(i) + b.energy(j), i, j});
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& x, const Pair& y) { return x.e < y.e; });
  std::vector<Hamiltonian::Level> levels;
  std::size_t start = 0;
  const int dd = static_cast<int>(d);
  for (std::size_t i = 1; i <= pairs.size(); ++i) {
    if (i == pairs.size() || pairs[i].e - pairs[i - 1].e > gtol) {
      Matrix proj = Matrix::Zero(dd, dd);
      double e = 0.0;
      int mult = 0;
      for (std::size_t k = start; k < i; ++k) {
        const Matrix block =
            kron(a.projector(pairs[k].i), b.projector(pairs[k].j));
        proj += block;
        const int r = a.degeneracy(pairs[k].i) * b.degeneracy(pairs[k].j);
        e += pairs[k].e * r;
        mult += r;
      }
      levels.push_back({e / mult, std::move(proj)});
      start = i;
    }
  }
  return Hamiltonian(dd, std::move(levels), gtol);
}

} // namespace gatecoh

#endif // GATECOH_HAMILTONIAN_HPP
