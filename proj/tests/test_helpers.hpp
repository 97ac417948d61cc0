/* This file is part of gatecoh, a library for coherence budgets of
 * energy non-preserving gates.
 *
 * Distributed under the MIT license; see LICENSE for terms.
 */

#ifndef GATECOH_TEST_HELPERS_HPP
#define GATECOH_TEST_HELPERS_HPP

#include <gatecoh/channels.hpp>
#include <gatecoh/common.hpp>
#include <gatecoh/hamiltonian.hpp>
#include <gatecoh/linalg.hpp>
#include <gatecoh/states.hpp>

#include <vector>

namespace gct {

using namespace gatecoh;

/** Random Hermitian matrix with entries of order 1. */
inline Matrix random_hermitian(int d, Rng& rng) {
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.normal_c();
  return hermitize(a);
}

/** Random Hamiltonian with the given spectrum pattern (energies with
 *  multiplicities) in a Haar-random eigenbasis. */
inline Hamiltonian random_hamiltonian_spectrum(
    const std::vector<std::pair<double, int>>& spectrum, Rng& rng) {
  int d = 0;
  for (const auto& [e, mult] : spectrum) d += mult;
  const Matrix u = haar_unitary(d, rng);
  RealVector diag(d);
  int at = 0;
  for (const auto& [e, mult] : spectrum)
    for (int i = 0; i < mult; ++i) diag(at++) = e;
  const Matrix h = u * diag.cast<cplx>().asDiagonal() * u.adjoint();
  return Hamiltonian::from_matrix(h);
}

/** Random nondegenerate Hamiltonian: spectrum 0, 1+u_1, 2+u_2, ... */
inline Hamiltonian random_hamiltonian(int d, Rng& rng) {
  std::vector<std::pair<double, int>> spec;
  double e = 0.0;
  for (int i = 0; i < d; ++i) {
    spec.push_back({e, 1});
    e += 0.25 + rng.uniform();
  }
  return random_hamiltonian_spectrum(spec, rng);
}

inline DensityOperator random_density(int d, Rng& rng, int rank = 0) {
  if (rank <= 0) rank = d;
  return DensityOperator(random_density_matrix(d, rank, rng));
}

inline PureState random_pure(int d, Rng& rng) {
  return PureState(random_unit_vector(d, rng));
}

/** Independent double-loop partial-trace oracle for a bipartite split. */
inline Matrix partial_trace_oracle_first(const Matrix& m, int da, int db) {
  // Keep the first factor.
  Matrix out = Matrix::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int b = 0; b < db; ++b) out(i, j) += m(i * db + b, j * db + b);
  return out;
}

inline Matrix partial_trace_oracle_second(const Matrix& m, int da, int db) {
  // Keep the second factor.
  Matrix out = Matrix::Zero(db, db);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j)
      for (int a = 0; a < da; ++a) out(i, j) += m(a * db + i, a * db + j);
  return out;
}

/** Hadamard gate. */
inline Matrix hadamard() {
  Matrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

/** Pauli X. */
inline Matrix pauli_x() {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

/** General single-qubit rotation exp(-i theta/2 (cos a X + sin a Y)). */
inline Matrix qubit_rotation(double theta, double axis_angle) {
  const cplx i(0.0, 1.0);
  Matrix x(2, 2), y(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -i, i, 0;
  const Matrix g = std::cos(axis_angle) * x + std::sin(axis_angle) * y;
  return std::cos(theta / 2) * Matrix::Identity(2, 2) -
         i * std::sin(theta / 2) * g;
}

/** Haar-random block unitary commuting with the given Hamiltonian. */
inline Matrix random_block_unitary(const Hamiltonian& h, Rng& rng) {
  std::vector<Matrix> blocks;
  for (int k = 0; k < h.level_count(); ++k)
    blocks.push_back(haar_unitary(h.degeneracy(k), rng));
  return assemble_block_unitary(h, blocks);
}

/** Random battery-coupled channel with nondegenerate system and battery
 *  Hamiltonians whose joint spectrum typically has degenerate sums. */
inline TepChannel random_tep_channel(int d_s, int d_b, Rng& rng,
                                     int beta_rank = 0) {
  // Integer-spaced energies so that the joint spectrum has collisions and
  // the commuting blocks are genuinely larger than singletons.
  std::vector<std::pair<double, int>> spec_s, spec_b;
  for (int i = 0; i < d_s; ++i) spec_s.push_back({double(i), 1});
  for (int i = 0; i < d_b; ++i) spec_b.push_back({double(i), 1});
  Hamiltonian h_s = random_hamiltonian_spectrum(spec_s, rng);
  Hamiltonian h_b = random_hamiltonian_spectrum(spec_b, rng);
  Hamiltonian h_tot = tensor(h_s, h_b);
  Matrix u = random_block_unitary(h_tot, rng);
  DensityOperator beta = random_density(d_b, rng, beta_rank);
  return TepChannel(std::move(h_s), std::move(h_b), std::move(beta),
                    std::move(u));
}

} // namespace gct

#endif // GATECOH_TEST_HELPERS_HPP
