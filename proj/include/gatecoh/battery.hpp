/* This file is part of gatecoh, a library for coherence budgets of
 * energy non-preserving gates.
 *
 * Distributed under the MIT license; see LICENSE for terms.
 */

#ifndef GATECOH_BATTERY_HPP
#define GATECOH_BATTERY_HPP

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "channels.hpp"
#include "coherence.hpp"
#include "common.hpp"
#include "hamiltonian.hpp"
#include "observables.hpp"
#include "states.hpp"

namespace gatecoh {

//=============================================================================
// Ladder batteries
//=============================================================================

/** Truncated harmonic ladder: spectrum 0, omega, ..., (d_b-1) omega. */
inline Hamiltonian ladder_hamiltonian(int d_b, double omega) {
  if (d_b < 2) throw schema_error("ladder_hamiltonian: need at least 2 levels");
  if (!(omega > 0.0)) throw schema_error("ladder_hamiltonian: omega must be positive");
  RealVector e(d_b);
  for (int k = 0; k < d_b; ++k) e(k) = k * omega;
  return Hamiltonian::from_energies(e);
}

struct LadderBattery {
  int d_b;
  double omega;
  Hamiltonian hamiltonian() const { return ladder_hamiltonian(d_b, omega); }
};

/** Equal-amplitude superposition of L consecutive ladder levels starting at
 *  n0; its coherence is exactly log2(L) bits. */
inline PureState uniform_ladder_state(int d_b, int n0, int big_l) {
  if (big_l < 1) throw schema_error("uniform_ladder_state: need L >= 1");
  if (n0 < 0 || n0 + big_l > d_b)
    throw schema_error("support exceeds battery");
  Vector v = Vector::Zero(d_b);
  for (int n = n0; n < n0 + big_l; ++n) v(n) = 1.0 / std::sqrt(double(big_l));
  return PureState(v);
}

/** Smooth alternative support profile: amplitudes proportional to
 *  sin(pi (i+1) / (L+1)) across the L occupied levels.  Its discrete
 *  curvature is O(1/L^2) rather than the O(1/L) of the sharp-edged uniform
 *  profile, which improves the gate-error scaling of ladder channels. */
inline PureState sine_ladder_state(int d_b, int n0, int big_l) {
  if (big_l < 1) throw schema_error("sine_ladder_state: need L >= 1");
  if (n0 < 0 || n0 + big_l > d_b)
    throw schema_error("support exceeds battery");
  Vector v = Vector::Zero(d_b);
  for (int i = 0; i < big_l; ++i)
    v(n0 + i) = std::sin(M_PI * (i + 1) / (big_l + 1));
  v.normalize();
  return PureState(v);
}

//=============================================================================
// Resonant qubit gate via a ladder battery
//=============================================================================

/** Joint unitary acting as V on each interior two-dimensional total-energy
 *  eigenspace {|0,k>, |1,k-1>} (1 <= k <= d_b-1) and as the identity on the
 *  two one-dimensional edge eigenspaces |0,0> and |1,d_b-1>. */
inline Matrix qubit_ladder_unitary(const Matrix& v, int d_b) {
  if (v.rows() != 2 || v.cols() != 2)
    throw schema_error("qubit_ladder_channel: target must be a qubit gate");
  if (max_abs_diff(v * v.adjoint(), Matrix::Identity(2, 2)) > tol::projector)
    throw schema_error("qubit_ladder_channel: target must be unitary");
  const auto idx = [d_b](int s, int b) { return s * d_b + b; };
  Matrix u = Matrix::Zero(2 * d_b, 2 * d_b);
  u(idx(0, 0), idx(0, 0)) = 1.0;
  u(idx(1, d_b - 1), idx(1, d_b - 1)) = 1.0;
  for (int k = 1; k <= d_b - 1; ++k) {
    u(idx(0, k), idx(0, k)) = v(0, 0);
    u(idx(1, k - 1), idx(0, k)) = v(1, 0);
    u(idx(0, k), idx(1, k - 1)) = v(0, 1);
    u(idx(1, k - 1), idx(1, k - 1)) = v(1, 1);
  }
  return u;
}

/** Battery-coupled channel implementing a qubit gate through a resonant
 *  ladder; the system Hamiltonian is diag(0, omega). */
inline TepChannel qubit_ladder_channel(const Matrix& v,
                                       const LadderBattery& battery,
                                       const DensityOperator& beta) {
  const Hamiltonian h_s =
      Hamiltonian::from_energies((RealVector(2) << 0.0, battery.omega).finished());
  return TepChannel(h_s, battery.hamiltonian(), beta,
                    qubit_ladder_unitary(v, battery.d_b), 1e-12);
}

/** Overload taking an explicit system Hamiltonian, which must match the
 *  ladder spacing exactly. */
inline TepChannel qubit_ladder_channel(const Matrix& v, const Hamiltonian& h_s,
                                       const LadderBattery& battery,
                                       const DensityOperator& beta) {
  const bool resonant =
      h_s.dim() == 2 && h_s.level_count() == 2 &&
      std::abs(h_s.energy(0)) <= 1e-12 * battery.omega &&
      std::abs(h_s.energy(1) - battery.omega) <= 1e-12 * battery.omega;
  if (!resonant)
    throw schema_error(
        "resonance required: system spectrum must be {0, omega}");
  // The explicit Hamiltonian must also be diagonal in the coupling basis.
  const Hamiltonian diag_h =
      Hamiltonian::from_energies((RealVector(2) << 0.0, battery.omega).finished());
  if (max_abs_diff(h_s.matrix(), diag_h.matrix()) > 1e-12 * battery.omega)
    throw schema_error(
        "resonance required: system must be diagonal in the coupling basis");
  return TepChannel(h_s, battery.hamiltonian(), beta,
                    qubit_ladder_unitary(v, battery.d_b), 1e-12);
}

//=============================================================================
// Spectral diagnostics
//=============================================================================

/** Number of energy eigenstates at or below E (degeneracy-weighted). */
inline int spectral_count(double energy, const Hamiltonian& h) {
  const double slack = 1e-9 * (h.spectral_radius() + 1.0);
  int count = 0;
  for (int k = 0; k < h.level_count(); ++k)
    if (h.energy(k) <= energy + slack) count += h.degeneracy(k);
  return count;
}

struct BatteryReport {
  double coherence = 0.0;    ///< bits
  double mean_energy = 0.0;
  double variance = 0.0;
  double qfi = 0.0;
  double e_max = 0.0;        ///< top of the energy support
  int n_levels_2emax = 0;    ///< eigenstates at or below twice e_max
};

/** Resource summary of a battery state: coherence, energy moments, Fisher
 *  information, and the level count within twice the supported energy. */
inline BatteryReport battery_report(const DensityOperator& beta,
                                    const Hamiltonian& h_b) {
  if (beta.dim() != h_b.dim())
    throw schema_error("battery_report: dimension mismatch");
  BatteryReport report;
  report.coherence = entropic_coherence(beta, h_b);
  const Moments moments = energy_moments(beta, h_b);
  report.mean_energy = moments.mean;
  report.variance = moments.variance;
  report.qfi = quantum_fisher_information(beta, h_b);
  report.e_max = h_b.energy(0);
  for (int k = 0; k < h_b.level_count(); ++k) {
    const double weight = (h_b.projector(k) * beta.matrix()).trace().real();
    if (weight > 1e-12) report.e_max = h_b.energy(k);
  }
  report.n_levels_2emax = spectral_count(2.0 * report.e_max, h_b);
  return report;
}

//=============================================================================
// Sweep driver
//=============================================================================

enum class LadderProfile { uniform, sine };

struct LadderSweepRow {
  int big_l = 0;
  double eps_choi = 0.0;
  double eps_wc_estimate = 0.0;
  double eps_wc_upper = 0.0;
  double coherence_bits = 0.0;
  double mean_energy = 0.0;
  double variance = 0.0;
  double qfi = 0.0;
  double bound_value = 0.0;
  bool converged = true;
};

struct LadderSweepOptions {
  Matrix target;                       ///< qubit gate to implement
  std::vector<int> l_values;           ///< battery support sizes
  int d_b = 0;                         ///< 0 selects the smallest battery (L+2)
  double omega = 1.0;
  LadderProfile profile = LadderProfile::sine;
  WorstCaseOptions wc{};
  std::function<double(double)> bound_fn; ///< eps_wc_upper -> bits; optional
};

/** Error-versus-support sweep over ladder batteries implementing one gate.
 *  Each support size L gets one battery state (centred, one empty level kept
 *  at each edge), one channel, and one approximation report. */
inline std::vector<LadderSweepRow> run_ladder_sweep(
    const LadderSweepOptions& opts) {
  if (opts.l_values.empty())
    throw schema_error("run_ladder_sweep: need at least one support size");
  std::vector<LadderSweepRow> rows;
  for (const int big_l : opts.l_values) {
    if (big_l < 1)
      throw schema_error("run_ladder_sweep: support sizes must be positive");
    const int d_eff = opts.d_b > 0 ? opts.d_b : big_l + 2;
    const int n0 = std::max(1, (d_eff - big_l) / 2);
    if (n0 + big_l - 1 > d_eff - 2) throw schema_error("support exceeds battery");
    const PureState beta =
        opts.profile == LadderProfile::uniform
            ? uniform_ladder_state(d_eff, n0, big_l)
            : sine_ladder_state(d_eff, n0, big_l);
    const LadderBattery battery{d_eff, opts.omega};
    const TepChannel ch =
        qubit_ladder_channel(opts.target, battery, beta.density());
    const ChannelApproxReport approx =
        worst_case_infidelity(ch, opts.target, opts.wc);
    const BatteryReport resources =
        battery_report(beta.density(), battery.hamiltonian());

    LadderSweepRow row;
    row.big_l = big_l;
    row.eps_choi = approx.eps_choi;
    row.eps_wc_estimate = approx.eps_wc_estimate;
    row.eps_wc_upper = approx.eps_wc_upper;
    row.coherence_bits = resources.coherence;
    row.mean_energy = resources.mean_energy;
    row.variance = resources.variance;
    row.qfi = resources.qfi;
    row.bound_value = opts.bound_fn ? opts.bound_fn(approx.eps_wc_upper) : 0.0;
    row.converged = approx.converged;
    rows.push_back(row);
  }
  return rows;
}

} // namespace gatecoh

#endif // GATECOH_BATTERY_HPP
