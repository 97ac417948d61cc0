/* This file is part of gatecoh, a library for coherence budgets of
 * energy non-preserving gates.
 *
 * Distributed under the MIT license; see LICENSE for terms.
 */

#ifndef GATECOH_CHANNELS_HPP
#define GATECOH_CHANNELS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "coherence.hpp"
#include "common.hpp"
#include "hamiltonian.hpp"
#include "linalg.hpp"
#include "states.hpp"

namespace gatecoh {

/// Largest state-vector length for the multi-copy protocol simulation.
inline constexpr long long kMaxProtocolVectorDim = 1LL << 21;

//=============================================================================
// TepChannel: trace out a battery after a total-energy-preserving unitary.
//=============================================================================

class TepChannel {
public:
  /** A negative commutator_tol selects the default
   *  1e-9 * spectral radius of H_S (+) H_B. */
  TepChannel(Hamiltonian h_s, Hamiltonian h_b, DensityOperator beta_b,
             Matrix u_sb, double commutator_tol = -1.0)
      : h_s_(std::move(h_s)), h_b_(std::move(h_b)), beta_b_(std::move(beta_b)),
        u_sb_(std::move(u_sb)), commutator_tol_(commutator_tol) {
    const long long d = static_cast<long long>(h_s_.dim()) * h_b_.dim();
    if (u_sb_.rows() != d || u_sb_.cols() != d)
      throw schema_error("TepChannel: joint unitary has the wrong shape");
    if (beta_b_.dim() != h_b_.dim())
      throw schema_error("TepChannel: battery state dimension mismatch");
    if (max_abs_diff(u_sb_ * u_sb_.adjoint(), Matrix::Identity(d, d)) >
        tol::projector)
      throw schema_error("TepChannel: joint operator is not unitary");
    const Matrix h_tot = kron(h_s_.matrix(), Matrix::Identity(h_b_.dim(), h_b_.dim())) +
                         kron(Matrix::Identity(h_s_.dim(), h_s_.dim()), h_b_.matrix());
    const double radius = eigvals_hermitian(h_tot).cwiseAbs().maxCoeff();
    if (commutator_tol_ < 0.0) commutator_tol_ = 1e-9 * radius;
    if ((u_sb_ * h_tot - h_tot * u_sb_).cwiseAbs().maxCoeff() > commutator_tol_)
      throw schema_error("TepChannel: joint unitary does not preserve energy");
  }

  const Hamiltonian& system_hamiltonian() const { return h_s_; }
  const Hamiltonian& battery_hamiltonian() const { return h_b_; }
  const DensityOperator& battery_state() const { return beta_b_; }
  const Matrix& joint_unitary() const { return u_sb_; }
  double commutator_tol() const { return commutator_tol_; }
  int d_s() const { return h_s_.dim(); }
  int d_b() const { return h_b_.dim(); }

  /** Channel action: trace out the battery after the joint unitary. */
  DensityOperator apply(const DensityOperator& rho_s) const {
    if (rho_s.dim() != d_s())
      throw schema_error("TepChannel: input dimension mismatch");
    const Matrix joint = kron(rho_s.matrix(), beta_b_.matrix());
    const Matrix evolved = u_sb_ * joint * u_sb_.adjoint();
    return DensityOperator::trusted(
        hermitize(partial_trace(evolved, {d_s(), d_b()}, {0})));
  }

  /** Extended action on system + ancilla, the battery coupling only to S. */
  DensityOperator apply_with_ancilla(const DensityOperator& rho_sa,
                                     int d_a) const {
    if (rho_sa.dim() != d_s() * d_a)
      throw schema_error("TepChannel: extended input dimension mismatch");
    const std::vector<int> dims{d_s(), d_a, d_b()};
    const Matrix joint = kron(rho_sa.matrix(), beta_b_.matrix());
    const Matrix u_full = embed_on_factors(dims, {0, 2}, u_sb_);
    const Matrix evolved = u_full * joint * u_full.adjoint();
    return DensityOperator::trusted(
        hermitize(partial_trace(evolved, dims, {0, 1})));
  }

  /** Kraus operators K_{k,j} = sqrt(q_j) (1 (x) <k|) U (1 (x) |b_j>) from the
   *  eigendecomposition beta = sum q_j |b_j><b_j|. */
  std::vector<Matrix> kraus() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(beta_b_.matrix()));
    std::vector<Matrix> ops;
    for (int j = 0; j < d_b(); ++j) {
      const double q = es.eigenvalues()(j);
      if (q <= 1e-15) continue;
      const Vector bj = es.eigenvectors().col(j);
      for (int k = 0; k < d_b(); ++k) {
        Matrix op(d_s(), d_s());
        for (int sp = 0; sp < d_s(); ++sp)
          for (int s = 0; s < d_s(); ++s) {
            cplx acc = 0.0;
            for (int b = 0; b < d_b(); ++b)
              acc += u_sb_(sp * d_b() + k, s * d_b() + b) * bj(b);
            op(sp, s) = std::sqrt(q) * acc;
          }
        ops.push_back(std::move(op));
      }
    }
    return ops;
  }

private:
  Hamiltonian h_s_, h_b_;
  DensityOperator beta_b_;
  Matrix u_sb_;
  double commutator_tol_;
};

//=============================================================================
// Construction: block unitaries over the eigenspaces of a total Hamiltonian
//=============================================================================

/** General energy-preserving unitary: one unitary block per eigenspace. */
inline Matrix assemble_block_unitary(const Hamiltonian& h_total,
                                     const std::vector<Matrix>& blocks) {
  if (static_cast<int>(blocks.size()) != h_total.level_count())
    throw schema_error("block shape: need one block per eigenspace");
  Matrix u = Matrix::Zero(h_total.dim(), h_total.dim());
  for (int k = 0; k < h_total.level_count(); ++k) {
    const Matrix& iso = h_total.isometry(k);
    const auto r = iso.cols();
    if (blocks[k].rows() != r || blocks[k].cols() != r)
      throw schema_error("block shape: block size must match eigenspace rank");
    u += iso * blocks[k] * iso.adjoint();
  }
  return u;
}

//=============================================================================
// Approximation diagnostics
//=============================================================================

struct ChannelApproxReport {
  double eps_choi = 0.0;
  double eps_wc_lower = 0.0;
  double eps_wc_estimate = 0.0;
  double eps_wc_upper = 0.0;
  double diamond_lower = 0.0;
  double diamond_upper = 0.0;
  bool converged = true;
};

/** Fuchs-van de Graaf bracket for the diamond-distance scale:
 *  (1 - sqrt(1-eps), sqrt(eps)). */
inline std::pair<double, double> fvdg_interval(double eps_wc) {
  if (!(eps_wc >= 0.0 && eps_wc <= 1.0))
    throw schema_error("domain: infidelity must lie in [0,1]");
  return {1.0 - std::sqrt(1.0 - eps_wc), std::sqrt(eps_wc)};
}

/** Choi-state infidelity between the channel and the unitary target:
 *  1 - (1/d^2) sum_k |tr(V^dag K_k)|^2. */
inline double choi_infidelity(const TepChannel& ch, const Matrix& v) {
  const int d = ch.d_s();
  if (v.rows() != d || v.cols() != d)
    throw schema_error("choi_infidelity: target dimension mismatch");
  double f = 0.0;
  for (const Matrix& k : ch.kraus()) f += std::norm((v.adjoint() * k).trace());
  f /= double(d) * double(d);
  return std::clamp(1.0 - f, 0.0, 1.0);
}

struct WorstCaseOptions {
  int starts = 32;
  int max_iters = 500;
  double tol = 1e-9;
  std::uint64_t seed = 7u;
};

/** Worst-case infidelity report.
 *
 *  The estimate is 1 minus the lowest channel-vs-target fidelity found by a
 *  multi-start projected-gradient descent over pure inputs on S (x) A with
 *  dim(A) = d_S.  Every iterate is a feasible input, so the estimate is a
 *  lower-biased estimate of the true worst case; the rigorous bracket is
 *  always [eps_choi, d_S * eps_choi].  Start 0 is the maximally entangled
 *  input, whose fidelity equals the Choi fidelity, so the estimate can never
 *  fall below eps_choi.
 */
inline ChannelApproxReport worst_case_infidelity(
    const TepChannel& ch, const Matrix& v, const WorstCaseOptions& opts = {}) {
  const int d = ch.d_s();
  if (v.rows() != d || v.cols() != d)
    throw schema_error("worst_case_infidelity: target dimension mismatch");
  const int dim = d * d; // S (x) A with dim(A) = d_S
  std::vector<Matrix> amps; // A_k = (V^dag K_k) (x) 1_A
  for (const Matrix& k : ch.kraus())
    amps.push_back(kron(v.adjoint() * k, Matrix::Identity(d, d)));

  const auto fidelity_of = [&](const Vector& phi) {
    double f = 0.0;
    for (const Matrix& a : amps) f += std::norm((phi.adjoint() * a * phi)(0));
    return f;
  };
  const auto gradient_of = [&](const Vector& phi) {
    Vector g = Vector::Zero(dim);
    for (const Matrix& a : amps) {
      const cplx c = (phi.adjoint() * a * phi)(0);
      g += std::conj(c) * (a * phi) + c * (a.adjoint() * phi);
    }
    return g;
  };

  double best_f = 2.0;
  bool best_converged = false;
  Rng base(opts.seed);
  for (int s = 0; s < std::max(1, opts.starts); ++s) {
    Vector phi;
    if (s == 0) {
      phi = Vector::Zero(dim);
      for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(double(d));
    } else {
      Rng stream = base.derive(static_cast<std::uint64_t>(s));
      phi = random_unit_vector(dim, stream);
    }
    double f = fidelity_of(phi);
    double step = 0.5;
    bool converged = false;
    for (int it = 0; it < opts.max_iters; ++it) {
      const Vector g = gradient_of(phi);
      const Vector tangent = g - (phi.adjoint() * g)(0) * phi;
      if (tangent.norm() <= opts.tol) {
        converged = true;
        break;
      }
      bool accepted = false;
      for (int bt = 0; bt < 40; ++bt) {
        Vector cand = phi - step * tangent;
        cand.normalize();
        const double fc = fidelity_of(cand);
        if (fc < f - 1e-16) {
          phi = cand;
          f = fc;
          step = std::min(step * 1.5, 8.0);
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        // No descent direction at line-search resolution: fixed point.
        converged = tangent.norm() <= std::max(opts.tol, 1e-7);
        break;
      }
    }
    if (f < best_f) {
      best_f = f;
      best_converged = converged;
    }
  }

  ChannelApproxReport report;
  report.eps_choi = choi_infidelity(ch, v);
  report.eps_wc_lower = report.eps_choi;
  report.eps_wc_upper = std::min(1.0, d * report.eps_choi);
  report.eps_wc_estimate = std::clamp(1.0 - best_f, report.eps_wc_lower,
                                      report.eps_wc_upper);
  report.converged = best_converged;
  report.diamond_lower = fvdg_interval(report.eps_wc_estimate).first;
  report.diamond_upper = fvdg_interval(report.eps_wc_upper).second;
  return report;
}

//=============================================================================
// Multi-copy protocol discrepancy
//=============================================================================

namespace detail {

/** Accumulate the energy distribution of the system+ancilla factors of a
 *  protocol state into a keyed histogram. */
inline void accumulate_energy_histogram(const Vector& state,
                                        const std::vector<double>& digit_energy,
                                        const std::vector<int>& dims,
                                        int n_energy_factors, double weight,
                                        double resolution,
                                        std::map<long long, double>& hist) {
  const auto strides = factor_strides(dims);
  const long long total = product_dim(dims);
  for (long long idx = 0; idx < total; ++idx) {
    const double p = std::norm(state(idx));
    if (p <= 0.0) continue;
    double e = 0.0;
    long long rest = idx;
    for (int f = 0; f < n_energy_factors; ++f) {
      const long long digit = rest / strides[f];
      rest %= strides[f];
      e += digit_energy[f * dims[f] + static_cast<int>(digit)];
    }
    hist[llround(e / resolution)] += weight * p;
  }
}

/** Accumulate the ideal-sequence and protocol energy statistics of one pure
 *  2m-copy input branch into shared histograms. */
inline void accumulate_mcopy_branch(const TepChannel& ch, const Matrix& v,
                                    int m, const Vector& psi_in, double weight,
                                    std::map<long long, double>& ideal_hist,
                                    std::map<long long, double>& protocol_hist,
                                    double& resolution_out) {
  const int d = ch.d_s();
  const int copies = 2 * m;
  const Hamiltonian& h_s = ch.system_hamiltonian();
  // Rotate every factor into the H_S eigenbasis so that energies are labels.
  Matrix w(d, d);
  std::vector<double> level_of_column;
  {
    int at = 0;
    for (int k = 0; k < h_s.level_count(); ++k) {
      const Matrix& iso = h_s.isometry(k);
      for (int c = 0; c < iso.cols(); ++c) {
        w.col(at++) = iso.col(c);
        level_of_column.push_back(h_s.energy(k));
      }
    }
  }

  // digit -> energy tables, one row per factor: +E on S copies, -E on A.
  std::vector<int> sa_dims(2 * copies, d);
  std::vector<double> digit_energy;
  for (int f = 0; f < 2 * copies; ++f)
    for (int c = 0; c < d; ++c)
      digit_energy.push_back((f < copies ? 1.0 : -1.0) * level_of_column[c]);

  const double scale = std::max(1.0, h_s.spectral_radius() * 2.0 * copies);
  resolution_out = 1e-9 * scale;
  const Matrix w_dag = w.adjoint();

  // Ideal branch: V on odd copies, V^dag on even copies, no battery.
  {
    Vector state = psi_in;
    for (int c = 0; c < copies; ++c)
      state = apply_on_factors(state, sa_dims, {c},
                               (c % 2 == 0) ? v : Matrix(v.adjoint()));
    for (int f = 0; f < 2 * copies; ++f)
      state = apply_on_factors(state, sa_dims, {f}, w_dag);
    detail::accumulate_energy_histogram(state, digit_energy, sa_dims,
                                        2 * copies, weight, resolution_out,
                                        ideal_hist);
  }

  // Protocol branch: one battery, eigenbranch by eigenbranch of beta.
  {
    std::vector<int> dims = sa_dims;
    dims.push_back(ch.d_b());
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        hermitize(ch.battery_state().matrix()));
    for (int j = 0; j < ch.d_b(); ++j) {
      const double q = es.eigenvalues()(j);
      if (q <= 1e-15) continue;
      Vector state = kron_vec(psi_in, es.eigenvectors().col(j));
      for (int c = 0; c < copies; ++c)
        state = apply_on_factors(
            state, dims, {c, 2 * copies},
            (c % 2 == 0) ? ch.joint_unitary()
                         : Matrix(ch.joint_unitary().adjoint()));
      for (int f = 0; f < 2 * copies; ++f)
        state = apply_on_factors(state, dims, {f}, w_dag);
      detail::accumulate_energy_histogram(state, digit_energy, dims, 2 * copies,
                                          weight * q, resolution_out,
                                          protocol_hist);
    }
  }
}

/** Total variation over the union grid of two keyed histograms. */
inline double histogram_total_variation(
    const std::map<long long, double>& a,
    const std::map<long long, double>& b) {
  double tv = 0.0;
  for (const auto& [key, p] : a) {
    const auto it = b.find(key);
    tv += std::abs(p - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [key, p] : b)
    if (a.find(key) == a.end()) tv += p;
  return 0.5 * tv;
}

inline void check_mcopy_shapes(const TepChannel& ch, const Matrix& v, int m,
                               long long input_dim) {
  const int d = ch.d_s();
  if (m < 1) throw schema_error("mcopy_discrepancy: m must be positive");
  if (v.rows() != d || v.cols() != d)
    throw schema_error("mcopy_discrepancy: target dimension mismatch");
  long long sa_dim = 1;
  for (int i = 0; i < 4 * m; ++i) {
    sa_dim *= d;
    if (sa_dim * ch.d_b() > kMaxProtocolVectorDim)
      throw cap_error("dimension limit: protocol state exceeds the cap");
  }
  if (input_dim != sa_dim)
    throw schema_error("mcopy_discrepancy: input dimension mismatch");
}

} // namespace detail

/** Total-variation distance between the energy statistics of the battery
 *  protocol and of the ideal gate sequence on a 2m-copy input.
 *
 *  Factors are ordered [S_1..S_2m, A_1..A_2m]; each S copy carries H_S, each
 *  ancilla copy carries -H_S.  The protocol applies the joint unitary to
 *  (S_i, battery) for odd i and its adjoint for even i, reusing one battery,
 *  then measures total energy; the ideal sequence applies the target V for
 *  odd copies and V^dag for even copies.
 */
inline double mcopy_discrepancy(const TepChannel& ch, const Matrix& v, int m,
                                const PureState& psi_in) {
  detail::check_mcopy_shapes(ch, v, m, psi_in.dim());
  std::map<long long, double> ideal_hist, protocol_hist;
  double resolution = 0.0;
  detail::accumulate_mcopy_branch(ch, v, m, psi_in.vector(), 1.0, ideal_hist,
                                  protocol_hist, resolution);
  return detail::histogram_total_variation(ideal_hist, protocol_hist);
}

/** Mixed-input overload: the measurement statistics are linear in the state,
 *  so both distributions are averaged over input eigenbranches before the
 *  single total-variation comparison. */
inline double mcopy_discrepancy(const TepChannel& ch, const Matrix& v, int m,
                                const DensityOperator& rho_in) {
  detail::check_mcopy_shapes(ch, v, m, rho_in.dim());
  if (rho_in.dim() > kMaxDenseDim)
    throw cap_error("dimension limit: mixed protocol input exceeds the cap");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(rho_in.matrix()));
  std::map<long long, double> ideal_hist, protocol_hist;
  double resolution = 0.0;
  for (int j = 0; j < rho_in.dim(); ++j) {
    const double q = es.eigenvalues()(j);
    if (q <= 1e-15) continue;
    detail::accumulate_mcopy_branch(ch, v, m, es.eigenvectors().col(j), q,
                                    ideal_hist, protocol_hist, resolution);
  }
  return detail::histogram_total_variation(ideal_hist, protocol_hist);
}

} // namespace gatecoh

#endif // GATECOH_CHANNELS_HPP
