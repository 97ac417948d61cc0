/* This file is part of gatecoh, a library for coherence budgets of
 * energy non-preserving gates.
 *
 * Distributed under the MIT license; see LICENSE for terms.
 */

#ifndef GATECOH_LINALG_HPP
#define GATECOH_LINALG_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <vector>

#include "common.hpp"

namespace gatecoh {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

//=============================================================================
// Tensor products and factor bookkeeping
//=============================================================================

/** Kronecker product of two matrices, row-major factor convention. */
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/** Kronecker product of two column vectors. */
inline Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline long long product_dim(const std::vector<int>& dims) {
  long long p = 1;
  for (int d : dims) p *= d;
  return p;
}

/** Row-major strides for a factor list: stride of the last factor is 1. */
inline std::vector<long long> factor_strides(const std::vector<int>& dims) {
  std::vector<long long> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * dims[i + 1];
  return s;
}

/** Full-space offsets of every joint index of the selected factors.
 *
 *  Entry j of the result is the contribution to the flattened index when the
 *  selected factors (in the given order) hold joint value j and all other
 *  factors hold zero.
 */
inline std::vector<long long> subsystem_offsets(const std::vector<int>& dims,
                                                const std::vector<int>& factors) {
  const auto strides = factor_strides(dims);
  std::vector<long long> offsets{0};
  for (int f : factors) {
    if (f < 0 || f >= static_cast<int>(dims.size()))
      throw schema_error("subsystem_offsets: factor index out of range");
    std::vector<long long> next;
    next.reserve(offsets.size() * dims[f]);
    for (long long base : offsets)
      for (int v = 0; v < dims[f]; ++v) next.push_back(base + v * strides[f]);
    offsets = std::move(next);
  }
  return offsets;
}

/** Complement of a sorted factor subset. */
inline std::vector<int> complement_factors(int n_factors, const std::vector<int>& subset) {
  std::vector<bool> in(n_factors, false);
  for (int f : subset) in[f] = true;
  std::vector<int> rest;
  for (int i = 0; i < n_factors; ++i)
    if (!in[i]) rest.push_back(i);
  return rest;
}

/** Partial trace keeping the listed factors (in their original order). */
inline Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  const long long total = product_dim(dims);
  if (m.rows() != total || m.cols() != total)
    throw schema_error("partial_trace: shape mismatch between matrix and factor dims");
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  if (std::adjacent_find(keep_sorted.begin(), keep_sorted.end()) != keep_sorted.end())
    throw schema_error("partial_trace: repeated factor in keep list");
  const auto traced = complement_factors(static_cast<int>(dims.size()), keep_sorted);
  const auto keep_off = subsystem_offsets(dims, keep_sorted);
  const auto tr_off = subsystem_offsets(dims, traced);
  const auto nk = static_cast<Eigen::Index>(keep_off.size());
  Matrix out = Matrix::Zero(nk, nk);
  for (Eigen::Index a = 0; a < nk; ++a)
    for (Eigen::Index b = 0; b < nk; ++b) {
      cplx acc = 0.0;
      for (long long t : tr_off) acc += m(keep_off[a] + t, keep_off[b] + t);
      out(a, b) = acc;
    }
  return out;
}

/** Apply an operator on the selected factors of a state vector.
 *
 *  `op` is a square matrix on the ordered tensor product of the listed
 *  factors; all other factors are untouched.
 */
inline Vector apply_on_factors(const Vector& v, const std::vector<int>& dims,
                               const std::vector<int>& factors, const Matrix& op) {
  const long long total = product_dim(dims);
  if (v.size() != total)
    throw schema_error("apply_on_factors: shape mismatch between vector and factor dims");
  const auto target_off = subsystem_offsets(dims, factors);
  const auto m = static_cast<Eigen::Index>(target_off.size());
  if (op.rows() != m || op.cols() != m)
    throw schema_error("apply_on_factors: operator dimension does not match factors");
  const auto rest = complement_factors(static_cast<int>(dims.size()), factors);
  const auto rest_off = subsystem_offsets(dims, rest);
  Vector out(total);
  Vector x(m);
  for (long long base : rest_off) {
    for (Eigen::Index j = 0; j < m; ++j) x(j) = v(base + target_off[j]);
    Vector y = op * x;
    for (Eigen::Index j = 0; j < m; ++j) out(base + target_off[j]) = y(j);
  }
  return out;
}

/** Embed an operator on selected factors into the full space (identity elsewhere). */
inline Matrix embed_on_factors(const std::vector<int>& dims,
                               const std::vector<int>& factors, const Matrix& op) {
  const long long total = product_dim(dims);
  const auto target_off = subsystem_offsets(dims, factors);
  const auto m = static_cast<Eigen::Index>(target_off.size());
  if (op.rows() != m || op.cols() != m)
    throw schema_error("embed_on_factors: operator dimension does not match factors");
  const auto rest = complement_factors(static_cast<int>(dims.size()), factors);
  const auto rest_off = subsystem_offsets(dims, rest);
  Matrix out = Matrix::Zero(total, total);
  for (long long base : rest_off)
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        out(base + target_off[i], base + target_off[j]) = op(i, j);
  return out;
}

//=============================================================================
// Hermitian utilities
//=============================================================================

inline Matrix dagger(const Matrix& m) { return m.adjoint(); }

/** Symmetrize roundoff: (M + M†)/2. */
inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

/** Eigenvalues of a Hermitian matrix, ascending. */
inline RealVector eigvals_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/** Principal square root of a positive semidefinite matrix. */
inline Matrix sqrt_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m));
  RealVector lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    lam(i) = std::sqrt(std::max(lam(i), 0.0));
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

/** Von Neumann entropy in bits; spectrum weight below the clamp is dropped. */
inline double von_neumann_entropy(const Matrix& rho,
                                  double clamp = tol::entropy_clamp) {
  const RealVector lam = eigvals_hermitian(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > clamp) s -= lam(i) * std::log2(lam(i));
  return s;
}

/** Shannon entropy in bits of a nonnegative weight vector. */
inline double shannon_entropy_bits(const std::vector<double>& p,
                                   double clamp = tol::entropy_clamp) {
  double s = 0.0;
  for (double x : p)
    if (x > clamp) s -= x * std::log2(x);
  return s;
}

/** Uhlmann fidelity F = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. */
inline double state_fidelity(const Matrix& rho, const Matrix& sigma) {
  const Matrix a = sqrt_psd(rho);
  const RealVector lam = eigvals_hermitian(a * sigma * a);
  double f = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    f += std::sqrt(std::max(lam(i), 0.0));
  return f * f;
}

/** Trace distance D = ||rho - sigma||_1 / 2. */
inline double trace_distance(const Matrix& rho, const Matrix& sigma) {
  const RealVector lam = eigvals_hermitian(rho - sigma);
  return 0.5 * lam.cwiseAbs().sum();
}

inline double purity(const Matrix& rho) {
  return (rho * rho).trace().real();
}

//=============================================================================
// Random objects (deterministic given the Rng)
//=============================================================================

/** Haar-random unitary via QR of a Ginibre matrix with phase fix. */
inline Matrix haar_unitary(int n, Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal_c();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    const double ad = std::abs(d);
    if (ad > 0.0) q.col(i) *= d / ad;
  }
  return q;
}

/** Uniformly random unit vector. */
inline Vector random_unit_vector(int n, Rng& rng) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal_c();
  return v / v.norm();
}

/** Random mixed state of the given rank (Ginibre construction). */
inline Matrix random_density_matrix(int n, int rank, Rng& rng) {
  Matrix g(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = rng.normal_c();
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitize(rho);
}

/** Largest absolute entry of A - B; the workhorse of closeness checks. */
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

} // namespace gatecoh

#endif // GATECOH_LINALG_HPP
