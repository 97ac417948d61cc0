/* This file is part of gatecoh, a library for coherence budgets of
 * energy non-preserving gates.
 *
 * Distributed under the MIT license; see LICENSE for terms.
 *
 * Demo: what does it cost, in battery coherence, to run a Hadamard?
 *
 * A Hadamard does not commute with the qubit Hamiltonian diag(0, 1), so no
 * energy-preserving unitary on the system alone can implement it.  It can be
 * implemented *approximately* by an energy-preserving unitary on system +
 * battery, at the price of coherence stored in the battery.  This demo
 * builds ladder-battery implementations of increasing width, measures how
 * good they are, and compares the coherence they carry against the certified
 * lower bound for their achieved accuracy.
 */

#include <gatecoh/battery.hpp>
#include <gatecoh/bounds.hpp>
#include <gatecoh/channels.hpp>
#include <gatecoh/coherence.hpp>
#include <gatecoh/observables.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

using namespace gatecoh;

int main() {
  const Matrix hadamard =
      (Matrix(2, 2) << 1, 1, 1, -1).finished() / std::sqrt(2.0);
  const Hamiltonian h_s =
      Hamiltonian::from_energies((RealVector(2) << 0.0, 1.0).finished());
  const GateInstance gate(h_s, hadamard);

  std::printf("Target gate: Hadamard on a qubit with H_S = diag(0, 1).\n");
  std::printf("Gate/Hamiltonian commutator norm is nonzero: the gate cannot\n");
  std::printf("be realized exactly by any energy-preserving unitary on the\n");
  std::printf("system alone.  We pay with battery coherence instead.\n\n");

  std::printf("%6s %12s %12s %14s %14s\n", "L", "eps_choi", "eps_wc",
              "C(battery)", "bound(eps_wc)");
  for (const int big_l : {4, 8, 16, 32, 64}) {
    // A ladder battery with L+2 equally spaced levels, carrying a smooth
    // (sine-profile) superposition over a width-L window.  Wider windows
    // make the translation action on the ladder look more like a phase,
    // which is what the Hadamard's energy-changing matrix elements need.
    const int d_b = big_l + 2;
    const LadderBattery battery{d_b, 1.0};
    const PureState beta = sine_ladder_state(d_b, 1, big_l);
    const TepChannel channel =
        qubit_ladder_channel(hadamard, battery, beta.density());

    const ChannelApproxReport report =
        worst_case_infidelity(channel, hadamard);
    const double c_battery =
        entropic_coherence(beta.density(), battery.hamiltonian());

    // Certified price floor: any battery achieving worst-case infidelity
    // eps for this gate must carry at least this much coherence.
    const double eps =
        std::clamp(report.eps_wc_estimate, 1e-15, 1.0 - 1e-15);
    const double bound =
        coherence_lower_bound(gate, eps, BoundVariant::qubit).value_bits;

    std::printf("%6d %12.3e %12.3e %14.4f %14.4f\n", big_l, report.eps_choi,
                report.eps_wc_estimate, c_battery, bound);
  }

  std::printf("\nThe battery coherence grows like log2(L) while the bound\n");
  std::printf("tracks it to within a constant: the ladder construction is\n");
  std::printf("optimal up to an additive term.\n\n");

  // The budget inequality in action: coherence generated on the system side
  // never exceeds what the battery brought to the table.
  const int big_l = 16;
  const int d_b = big_l + 2;
  const LadderBattery battery{d_b, 1.0};
  const PureState beta = sine_ladder_state(d_b, 1, big_l);
  const TepChannel channel =
      qubit_ladder_channel(hadamard, battery, beta.density());

  const DensityOperator rho_in = DensityOperator::trusted(
      (Matrix(2, 2) << 0.9, 0.0, 0.0, 0.1).finished());
  const double c_in = entropic_coherence(rho_in, h_s);
  const double c_out = entropic_coherence(channel.apply(rho_in), h_s);
  const double c_battery =
      entropic_coherence(beta.density(), battery.hamiltonian());

  std::printf("Budget check at L = %d on the incoherent input diag(0.9, 0.1):\n",
              big_l);
  std::printf("  coherence in:        %.6f bits\n", c_in);
  std::printf("  coherence out:       %.6f bits\n", c_out);
  std::printf("  gain:                %.6f bits\n", c_out - c_in);
  std::printf("  battery coherence:   %.6f bits\n", c_battery);
  std::printf("  budget satisfied:    %s\n",
              c_out - c_in <= c_battery + 1e-9 ? "yes" : "NO");

  // Energy cost of the coherence: among all battery states on this ladder
  // with at least that much coherence, what is the cheapest mean energy?
  RealVector energies(d_b);
  for (int i = 0; i < d_b; ++i) energies(i) = i;
  const GibbsPoint cheapest = min_energy_at_coherence(energies, c_battery);
  const Moments actual = energy_moments(beta.density(), battery.hamiltonian());
  std::printf("\nEnergy floor for %.4f bits of coherence on this ladder:\n",
              c_battery);
  std::printf("  minimum mean energy: %.4f\n", cheapest.energy);
  std::printf("  this battery uses:   %.4f\n", actual.mean);
  return 0;
}
