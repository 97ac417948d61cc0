/* This file is part of gatecoh, a library for coherence budgets of
 * energy non-preserving gates.
 *
 * Distributed under the MIT license; see LICENSE for terms.
 */

#ifndef GATECOH_COMMON_HPP
#define GATECOH_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace gatecoh {

using cplx = std::complex<double>;

//=============================================================================
// Error taxonomy.  Codes line up with the CLI process exit codes so the tool
// can map a caught exception directly onto its contract.
//=============================================================================

/** Base class for all library errors. */
class error : public std::runtime_error {
public:
  explicit error(const std::string& what_arg, int exit_code = 2)
      : std::runtime_error(what_arg), exit_code_(exit_code) {}
  /** Process exit code the CLI should use for this failure class. */
  int exit_code() const noexcept { return exit_code_; }

private:
  int exit_code_;
};

/** Malformed input: bad shapes, failed validation, out-of-domain parameters. */
class schema_error : public error {
public:
  explicit schema_error(const std::string& what_arg) : error(what_arg, 2) {}
};

/** A configured numeric cap was exceeded (dimension limit, support explosion). */
class cap_error : public error {
public:
  explicit cap_error(const std::string& what_arg) : error(what_arg, 3) {}
};

/** An iterative routine failed to converge within its budget. */
class convergence_error : public error {
public:
  explicit convergence_error(const std::string& what_arg) : error(what_arg, 4) {}
};

//=============================================================================
// Default tolerances.  All named here so tests and docs reference one place.
//=============================================================================

namespace tol {
/// Projector orthogonality / idempotence / completeness checks.
inline constexpr double projector = 1e-10;
/// Density operator trace and eigenvalue floor.
inline constexpr double trace = 1e-10;
inline constexpr double psd_floor = -1e-10;
/// Pure state normalization.
inline constexpr double norm = 1e-12;
/// Eigenvalue clamp below which spectrum weight is treated as zero in entropies.
inline constexpr double entropy_clamp = 1e-14;
/// Relative support threshold for relative-entropy support checks.
inline constexpr double support = 1e-12;
/// Probability atoms below this are dropped from energy distributions.
inline constexpr double prob_drop = 1e-14;
/// Generic tight agreement between two exact routes to the same number.
inline constexpr double dual_route = 1e-12;
} // namespace tol

//=============================================================================
// Small numeric helpers (everything is in bits: logs are base 2).
//=============================================================================

/** log2 that maps 0 to 0, for use inside -p*log2(p) sums. */
inline double xlog2x(double p) {
  if (p <= 0.0) return 0.0;
  return p * std::log2(p);
}

/** Binary entropy h2(p) = -p log2 p - (1-p) log2 (1-p), with h2(0)=h2(1)=0. */
inline double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw schema_error("binary_entropy: p outside [0,1]");
  return -xlog2x(p) - xlog2x(1.0 - p);
}

/** Clamp tiny negative values (roundoff) to zero; larger negatives pass through. */
inline double clamp_roundoff(double x, double floor_tol = 1e-12) {
  return (x < 0.0 && x > -floor_tol) ? 0.0 : x;
}

inline double sq(double x) { return x * x; }

//=============================================================================
// Deterministic random source.
//
// A single fixed generator (xoshiro-free: plain splitmix64 expanded into a
// 64-bit mt19937 stream) plus an explicit Box-Muller transform, so identical
// seeds give identical results on any standard library.
//=============================================================================

/** splitmix64 step; used for seeding derived streams deterministically. */
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/** Deterministic RNG with explicit normal/uniform transforms. */
class Rng {
public:
  explicit Rng(std::uint64_t seed) : s_{0, 0, 0, 0} {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  /** Derive an independent stream for a labelled subtask of a seeded run. */
  Rng derive(std::uint64_t stream) const {
    std::uint64_t sm = s_[0] ^ (0xda3e39cb94b95bdbULL * (stream + 1));
    return Rng(splitmix64(sm));
  }

  /** Raw 64 random bits (xoshiro256** step). */
  std::uint64_t next_u64() {
    auto rotl = [](std::uint64_t x, int k) {
      return (x << k) | (x >> (64 - k));
    };
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /** Uniform double in [0,1). */
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /** Uniform integer in [0, n). */
  std::uint64_t uniform_index(std::uint64_t n) {
    return next_u64() % n;
  }

  /** Standard normal via Box-Muller. */
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  /** Complex standard normal (variance 1 per real component). */
  cplx normal_c() { return cplx(normal(), normal()); }

private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

} // namespace gatecoh

#endif // GATECOH_COMMON_HPP
