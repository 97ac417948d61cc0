/* This file is part of gatecoh, a library for coherence budgets of
 * energy non-preserving gates.
 *
 * Distributed under the MIT license; see LICENSE for terms.
 */

#ifndef GATECOH_STATES_HPP
#define GATECOH_STATES_HPP

#include <utility>
#include <vector>

#include "common.hpp"
#include "linalg.hpp"

namespace gatecoh {

//=============================================================================
// CompositeLabel: the factor dimensions of a tensor-product space.
//=============================================================================

struct CompositeLabel {
  std::vector<int> dims;

  CompositeLabel() = default;
  CompositeLabel(std::initializer_list<int> d) : dims(d) { validate(); }
  explicit CompositeLabel(std::vector<int> d) : dims(std::move(d)) { validate(); }

  void validate() const {
    if (dims.empty()) throw schema_error("CompositeLabel: no factors");
    for (int d : dims)
      if (d < 1) throw schema_error("CompositeLabel: factor dims must be positive");
  }

  long long total() const { return product_dim(dims); }
  int factor_count() const { return static_cast<int>(dims.size()); }
};

//=============================================================================
// DensityOperator: validated Hermitian PSD unit-trace matrix.
//=============================================================================

class DensityOperator {
public:
  explicit DensityOperator(Matrix rho) : rho_(std::move(rho)) { validate_(); }

  /** Construct without validation; reserved for internal steps whose output
   *  is a density operator by construction (e.g. unitary conjugation). */
  static DensityOperator trusted(Matrix rho) {
    DensityOperator d;
    d.rho_ = std::move(rho);
    return d;
  }

  const Matrix& matrix() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }
  double trace() const { return rho_.trace().real(); }

private:
  DensityOperator() = default;

  void validate_() const {
    if (rho_.rows() != rho_.cols() || rho_.rows() < 1)
      throw schema_error("DensityOperator: matrix must be square and nonempty");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol::projector)
      throw schema_error("DensityOperator: matrix is not Hermitian");
    if (std::abs(rho_.trace().real() - 1.0) > tol::trace ||
        std::abs(rho_.trace().imag()) > tol::trace)
      throw schema_error("DensityOperator: trace is not 1");
    const RealVector lam = eigvals_hermitian(rho_);
    if (lam.minCoeff() < tol::psd_floor)
      throw schema_error("DensityOperator: matrix is not positive semidefinite");
  }

  Matrix rho_;
};

//=============================================================================
// PureState: validated unit vector.
//=============================================================================

class PureState {
public:
  explicit PureState(Vector v) : v_(std::move(v)) {
    if (v_.size() < 1) throw schema_error("PureState: empty vector");
    if (std::abs(v_.norm() - 1.0) > tol::norm)
      throw schema_error("PureState: vector is not normalized");
  }

  const Vector& vector() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }

  /** Rank-one density operator |v><v|. */
  DensityOperator density() const {
    return DensityOperator::trusted(v_ * v_.adjoint());
  }

private:
  Vector v_;
};

} // namespace gatecoh

#endif // GATECOH_STATES_HPP
