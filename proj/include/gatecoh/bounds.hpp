#pragma once

/** @file bounds.hpp
 *  Lower bounds on the battery resources needed to approximate a gate that
 *  does not commute with its Hamiltonian.
 *
 *  The asymmetry of a gate V against a Hamiltonian H is summarized by two
 *  certified numbers (r2, lambda2): the incommensurability rank and growth
 *  rate of the energy distribution produced by V x Vdag acting on eigenstates
 *  of four signed copies of the system.  These feed closed-form constants
 *  (sigma, sigma') and a family of lower bounds: on the entropic coherence of
 *  any battery implementing the gate to worst-case infidelity eps, on the
 *  battery dimension, and -- through constrained Gibbs families -- on its
 *  mean energy and energy variance at fixed coherence.
 *
 *  All asymptotically vanishing corrections are dropped and flagged via
 *  o1_omitted, so the bounds are directional statements at finite eps.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gatecoh/common.hpp"
#include "gatecoh/discrete_rv.hpp"
#include "gatecoh/exact.hpp"
#include "gatecoh/hamiltonian.hpp"
#include "gatecoh/linalg.hpp"

namespace gatecoh {

//=============================================================================
// Gate instances
//=============================================================================

/** A target gate together with the system Hamiltonian it acts against. */
struct GateInstance {
  Hamiltonian h_s;
  Matrix v_s;

  GateInstance(Hamiltonian h, Matrix v) : h_s(std::move(h)), v_s(std::move(v)) {
    if (v_s.rows() != v_s.cols() || static_cast<int>(v_s.rows()) != h_s.dim())
      throw schema_error("GateInstance: gate and Hamiltonian dimensions do not match");
    const Matrix gram = v_s.adjoint() * v_s;
    if ((gram - Matrix::Identity(v_s.rows(), v_s.cols())).cwiseAbs().maxCoeff() > 1e-10)
      throw schema_error("GateInstance: gate matrix is not unitary");
  }

  int dim() const { return h_s.dim(); }

  /** Whether [V, H] vanishes within tol (default scales with the spectrum). */
  bool commutes(double tol = -1.0) const {
    if (tol < 0.0) tol = 1e-9 * (h_s.spectral_radius() + 1.0);
    const Matrix h = h_s.matrix();
    return (v_s * h - h * v_s).cwiseAbs().maxCoeff() <= tol;
  }
};

//=============================================================================
// Asymmetry search: certified (r2, lambda2) lower bounds
//=============================================================================

struct R2SearchOptions {
  /** Maximum number of terms in uniform superpositions within a degenerate
   *  total-energy eigenspace (2 enumerates all pairs). */
  int degenerate_superposition_depth = 2;
  /** Random states drawn per degenerate eigenspace. */
  int random_samples = 8;
  std::uint64_t seed = 7;
  RankOptions rank;
};

/** The eigenstate of the four-copy system realizing the reported bounds. */
struct R2Witness {
  std::string kind;  // "basis", "superposition", or "random"
  Vector state;      // initial state in the product energy eigenbasis
};

struct R2SearchResult {
  int r2_lower = 0;
  double lambda2_lower = 0.0;
  bool energy_preserving = false;
  std::optional<R2Witness> witness;
};

namespace detail {

/// Candidate enumeration guard for the asymmetry search.
inline constexpr long long kMaxSearchCandidates = 100000;

/** Exact energy value of each level, either declared by the caller or derived
 *  from the floating spectrum over the rational basis. */
inline std::vector<ExactReal> resolve_level_values(const Hamiltonian& h,
                                                   const std::vector<ExactReal>& declared) {
  const int levels = h.level_count();
  if (declared.empty()) {
    std::vector<ExactReal> vals;
    vals.reserve(levels);
    const auto& basis = ExactBasis::rational();
    for (int l = 0; l < levels; ++l) vals.push_back(ExactReal::from_double(basis, h.energy(l)));
    return vals;
  }
  if (static_cast<int>(declared.size()) != levels)
    throw schema_error("declared level values must match the level count");
  const double tol = 1e-9 * (h.spectral_radius() + 1.0);
  for (int l = 0; l < levels; ++l) {
    if (!(*declared[l].basis() == *declared[0].basis()))
      throw schema_error("declared level values must share one basis");
    if (std::abs(declared[l].value() - h.energy(l)) > tol)
      throw schema_error("declared level values do not match the spectrum");
  }
  return declared;
}

}  // namespace detail

/** Certified lower bounds on the asymmetry rank r2 and growth rate lambda2 of
 *  a gate, by searching energy eigenstates of four signed copies of the
 *  system (two carrying V and Vdag, two spectators with negated energies).
 *
 *  Candidates are all product basis states, uniform superpositions within
 *  degenerate total-energy eigenspaces, and seeded random states within those
 *  eigenspaces.  Each candidate is scored by the best certified prepartition
 *  of its energy distribution; the maximum of (rank, lambda) is returned with
 *  the witness state.  Irrational spectra need declared exact level values.
 */
inline R2SearchResult r2_lambda2_search(const GateInstance& g,
                                        const R2SearchOptions& opts = {},
                                        const std::vector<ExactReal>& exact_levels = {}) {
  R2SearchResult result;
  if (g.commutes()) {
    result.energy_preserving = true;
    return result;
  }
  if (opts.degenerate_superposition_depth < 2)
    throw schema_error("superposition depth must be at least 2");

  const int d = g.dim();
  const std::vector<ExactReal> level_vals =
      detail::resolve_level_values(g.h_s, exact_levels);

  // Gate in the energy eigenbasis; factor order is S1, S2, A1, A2 with the
  // spectators A carrying the negated Hamiltonian.
  Matrix w(d, d);
  std::vector<int> level_of(d);
  {
    int col = 0;
    for (int l = 0; l < g.h_s.level_count(); ++l) {
      const Matrix& iso = g.h_s.isometry(l);
      for (int j = 0; j < iso.cols(); ++j, ++col) {
        w.col(col) = iso.col(j);
        level_of[col] = l;
      }
    }
  }
  const Matrix v_eig = w.adjoint() * g.v_s * w;

  const long long total = static_cast<long long>(d) * d * d * d;
  std::vector<ExactReal> tuple_energy;
  tuple_energy.reserve(total);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int f = 0; f < d; ++f)
          tuple_energy.push_back(level_vals[level_of[a]] + level_vals[level_of[b]] -
                                 level_vals[level_of[c]] - level_vals[level_of[f]]);

  const std::vector<int> dims = {d, d, d, d};
  int best_rank = 0;
  double best_lambda = 0.0;

  const auto evaluate = [&](const Vector& phi, const char* kind) {
    Vector psi = apply_on_factors(phi, dims, {0}, v_eig);
    psi = apply_on_factors(psi, dims, {1}, v_eig.adjoint());
    std::map<ExactReal, double> atoms;
    for (long long i = 0; i < total; ++i) {
      const double p = std::norm(psi(i));
      if (p > 0.0) atoms[tuple_energy[static_cast<std::size_t>(i)]] += p;
    }
    std::vector<ExactReal> values;
    std::vector<double> probs;
    double mass = 0.0;
    for (const auto& [value, p] : atoms) {
      if (p <= tol::prob_drop) continue;
      values.push_back(value);
      probs.push_back(p);
      mass += p;
    }
    if (values.size() < 2) return;
    for (double& p : probs) p /= mass;
    const DiscreteRV rv = DiscreteRV::trusted(std::move(values), std::move(probs), 1e-9);
    const ScoredPrepartition scored = best_certified_prepartition(rv, opts.rank);
    if (!scored.found) return;
    if (scored.rank > best_rank ||
        (scored.rank == best_rank && scored.lambda > best_lambda * (1.0 + 1e-12))) {
      best_rank = scored.rank;
      best_lambda = scored.lambda;
      result.witness = R2Witness{kind, phi};
    }
  };

  // (a) Product basis eigenstates.
  for (long long t = 0; t < total; ++t) {
    Vector phi = Vector::Zero(total);
    phi(t) = 1.0;
    evaluate(phi, "basis");
  }

  // Group basis tuples into degenerate total-energy eigenspaces.
  std::map<ExactReal, std::vector<long long>> classes;
  for (long long t = 0; t < total; ++t) classes[tuple_energy[static_cast<std::size_t>(t)]].push_back(t);

  // (b) Uniform superpositions within each eigenspace, all term counts from 2
  // up to the configured depth.
  long long candidates = total;
  for (const auto& [energy, members] : classes) {
    const int n = static_cast<int>(members.size());
    if (n < 2) continue;
    const int max_terms = std::min(opts.degenerate_superposition_depth, n);
    for (int terms = 2; terms <= max_terms; ++terms) {
      std::vector<int> pick(terms);
      for (int i = 0; i < terms; ++i) pick[i] = i;
      while (true) {
        if (++candidates > detail::kMaxSearchCandidates)
          throw cap_error("asymmetry search: candidate enumeration exceeds the cap");
        Vector phi = Vector::Zero(total);
        const double amp = 1.0 / std::sqrt(static_cast<double>(terms));
        for (const int i : pick) phi(members[i]) = amp;
        evaluate(phi, "superposition");
        int j = terms - 1;
        while (j >= 0 && pick[j] == n - terms + j) --j;
        if (j < 0) break;
        ++pick[j];
        for (int i = j + 1; i < terms; ++i) pick[i] = pick[i - 1] + 1;
      }
    }
  }

  // (c) Seeded random states within each degenerate eigenspace.
  if (opts.random_samples > 0) {
    Rng rng(opts.seed);
    std::uint64_t stream = 0;
    for (const auto& [energy, members] : classes) {
      Rng local = rng.derive(stream++);
      const int n = static_cast<int>(members.size());
      if (n < 2) continue;
      for (int s = 0; s < opts.random_samples; ++s) {
        if (++candidates > detail::kMaxSearchCandidates)
          throw cap_error("asymmetry search: candidate enumeration exceeds the cap");
        const Vector coeffs = random_unit_vector(n, local);
        Vector phi = Vector::Zero(total);
        for (int i = 0; i < n; ++i) phi(members[i]) = coeffs(i);
        evaluate(phi, "random");
      }
    }
  }

  result.r2_lower = best_rank;
  result.lambda2_lower = best_lambda;
  return result;
}

//=============================================================================
// Closed-form constants and headline bounds
//=============================================================================

enum class BoundVariant { general, proportionate, qubit };

struct SigmaValues {
  double sigma = 0.0;
  double sigma_prime = 0.0;
};

/** The two asymmetry constants entering the coherence bounds:
 *    sigma  = (pi^4 e^4 / 256) lambda2^4 r2^2 / log2^2(d)
 *    sigma' = (pi^2 / 4) (lambda2 r2 / (d^2/2 + 2 alpha))^2
 *  where alpha is the polynomial degree of the battery's spectral-count
 *  growth.  A zero rank (energy-preserving gate) gives both zero.
 */
inline SigmaValues sigma_values(int r2, double lambda2, int d_s, double alpha) {
  if (r2 < 0) throw schema_error("sigma_values: rank must be nonnegative");
  if (r2 == 0) return {};
  if (!(lambda2 > 0.0)) throw schema_error("sigma_values: rate must be positive");
  if (!(alpha > 0.0)) throw schema_error("sigma_values: alpha must be positive");
  if (d_s < 2) throw schema_error("sigma_values: system dimension must be at least 2");
  SigmaValues out;
  const double log_d = std::log2(static_cast<double>(d_s));
  out.sigma = std::pow(M_PI, 4) * std::exp(4.0) / 256.0 * std::pow(lambda2, 4) *
              sq(static_cast<double>(r2)) / sq(log_d);
  out.sigma_prime =
      sq(M_PI) / 4.0 *
      sq(lambda2 * static_cast<double>(r2) / (sq(static_cast<double>(d_s)) / 2.0 + 2.0 * alpha));
  return out;
}

struct CoherenceBound {
  double value_bits = 0.0;  // clipped below at zero
  int m_opt = 0;            // optimal copy count floor(sqrt(r2)/(8 sqrt(log2 d)) eps^{-1/4})
  double sigma_used = 0.0;  // sigma (general/qubit) or sigma' (proportionate)
  int r2_used = 0;
  double lambda2_used = 0.0;
  bool o1_omitted = true;
};

/** Lower bound (bits) on the entropic coherence of any battery implementing
 *  the gate to worst-case infidelity eps, from precomputed (r2, lambda2).
 *  The general chain gives (r2/8) log2(sigma/eps); the proportionate chain
 *  (r2/4) log2(sigma'/(eps log2^2(1/eps))).  The qubit variant is the general
 *  expression and expects qubit constants (use the gate overload).
 */
inline CoherenceBound coherence_lower_bound(int r2, double lambda2, int d_s, double eps,
                                            BoundVariant variant, double alpha = 1.0) {
  if (!(eps > 0.0 && eps < 1.0))
    throw schema_error("coherence_lower_bound: domain requires eps in (0,1)");
  CoherenceBound out;
  if (r2 == 0) return out;
  const SigmaValues sv = sigma_values(r2, lambda2, d_s, alpha);
  out.r2_used = r2;
  out.lambda2_used = lambda2;
  double value;
  if (variant == BoundVariant::proportionate) {
    out.sigma_used = sv.sigma_prime;
    value = static_cast<double>(r2) / 4.0 *
            std::log2(sv.sigma_prime / (eps * sq(std::log2(1.0 / eps))));
  } else {
    out.sigma_used = sv.sigma;
    value = static_cast<double>(r2) / 8.0 * std::log2(sv.sigma / eps);
  }
  out.value_bits = std::max(value, 0.0);
  out.m_opt = static_cast<int>(std::floor(std::sqrt(static_cast<double>(r2)) /
                                          (8.0 * std::sqrt(std::log2(static_cast<double>(d_s)))) *
                                          std::pow(eps, -0.25)));
  return out;
}

/** Gate-level coherence bound.  The qubit variant reads p = |<0|V|1>|^2 in the
 *  energy eigenbasis and uses r2 = 2, lambda2 = p/(pi (1 + [p==1])); other
 *  variants run the asymmetry search first.
 */
inline CoherenceBound coherence_lower_bound(const GateInstance& g, double eps,
                                            BoundVariant variant, double alpha = 1.0,
                                            const R2SearchOptions& opts = {},
                                            const std::vector<ExactReal>& exact_levels = {}) {
  if (!(eps > 0.0 && eps < 1.0))
    throw schema_error("coherence_lower_bound: domain requires eps in (0,1)");
  if (variant == BoundVariant::qubit) {
    if (g.dim() != 2) throw schema_error("qubit bound variant requires a two-level system");
    if (g.commutes()) return {};
    Matrix w(2, 2);
    int col = 0;
    for (int l = 0; l < g.h_s.level_count(); ++l)
      for (int j = 0; j < g.h_s.isometry(l).cols(); ++j, ++col) w.col(col) = g.h_s.isometry(l).col(j);
    const Matrix v_eig = w.adjoint() * g.v_s * w;
    const double p = std::norm(v_eig(0, 1));
    const double delta = std::abs(p - 1.0) <= 1e-12 ? 1.0 : 0.0;
    const double lambda2 = p / (M_PI * (1.0 + delta));
    return coherence_lower_bound(2, lambda2, 2, eps, BoundVariant::general, alpha);
  }
  const R2SearchResult search = r2_lambda2_search(g, opts, exact_levels);
  return coherence_lower_bound(search.r2_lower, search.lambda2_lower, g.dim(), eps,
                               variant, alpha);
}

/** Lower bound on the battery dimension needed to reach infidelity eps:
 *  (1/log2(1/eps))^{r2/2} (sigma'/eps)^{r2/4}, clamped below at one.
 */
inline double dimension_lower_bound(int r2, double sigma_prime, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw schema_error("dimension_lower_bound: domain requires eps in (0,1)");
  if (r2 < 0) throw schema_error("dimension_lower_bound: rank must be nonnegative");
  if (r2 == 0) return 1.0;
  const double r = static_cast<double>(r2);
  const double raw = std::pow(1.0 / std::log2(1.0 / eps), r / 2.0) *
                     std::pow(sigma_prime / eps, r / 4.0);
  return std::max(raw, 1.0);
}

/** Mean-energy lower bound (sigma/(2 eta)) eps^{-r2/8} for batteries whose
 *  spectral count grows at most linearly, N(E) <= 1 + eta E.
 */
inline double energy_bound_corollary(int r2, double sigma, double eta, double eps) {
  if (!(eta > 0.0)) throw schema_error("energy_bound_corollary: eta must be positive");
  if (!(eps > 0.0 && eps < 1.0))
    throw schema_error("energy_bound_corollary: domain requires eps in (0,1)");
  if (r2 < 0) throw schema_error("energy_bound_corollary: rank must be nonnegative");
  if (r2 == 0) return 0.0;
  return sigma / (2.0 * eta) * std::pow(eps, -static_cast<double>(r2) / 8.0);
}

/** Quantum-Fisher-information lower bound (omega^2 sigma^2 / (e pi))
 *  (eps d)^{-r2/4} for a harmonic battery of frequency omega.
 */
inline double qfi_bound_corollary(int r2, double sigma, double omega, int d_s, double eps) {
  const double scaled = eps * static_cast<double>(d_s);
  if (!(scaled > 0.0 && scaled < 1.0))
    throw schema_error("qfi_bound_corollary: domain requires eps*d in (0,1)");
  if (r2 < 0) throw schema_error("qfi_bound_corollary: rank must be nonnegative");
  if (r2 == 0) return 0.0;
  return sq(omega) * sq(sigma) / (std::exp(1.0) * M_PI) *
         std::pow(scaled, -static_cast<double>(r2) / 4.0);
}

//=============================================================================
// Constrained Gibbs solvers: minimum energy / variance at fixed coherence
//=============================================================================

struct GibbsPoint {
  double energy = 0.0;
  double gamma = 0.0;
};

namespace detail {

/** Entropy (bits) and mean of p_i ~ exp(-gamma (E_i - E_min)). */
inline std::pair<double, double> gibbs_entropy_mean(const RealVector& energies, double gamma) {
  const double emin = energies.minCoeff();
  double z = 0.0;
  for (Eigen::Index i = 0; i < energies.size(); ++i) z += std::exp(-gamma * (energies(i) - emin));
  double s = 0.0;
  double mean = 0.0;
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    const double p = std::exp(-gamma * (energies(i) - emin)) / z;
    s -= xlog2x(p);
    mean += p * energies(i);
  }
  return {s, mean};
}

inline void check_coherence_domain(double c_bits, double log_dim) {
  if (!(c_bits >= -1e-12 && c_bits <= log_dim + 1e-12))
    throw schema_error("coherence target outside the domain [0, log2 dim]");
}

}  // namespace detail

/** Least mean energy of any state with entropic coherence at least c_bits, over
 *  a spectrum given with multiplicity.  The optimum is a Gibbs state whose
 *  multiplier gamma solves the entropy constraint; gamma is found by bisection
 *  with bracket doubling to |S - C| <= 1e-9 bits.  C = 0 pins the ground state
 *  (gamma reported infinite); C = log2(dim) forces gamma = 0.
 */
inline GibbsPoint min_energy_at_coherence(const RealVector& energies, double c_bits) {
  if (energies.size() < 1) throw schema_error("min_energy_at_coherence: empty spectrum");
  const auto d = energies.size();
  const double log_dim = std::log2(static_cast<double>(d));
  detail::check_coherence_domain(c_bits, log_dim);
  const double c = std::clamp(c_bits, 0.0, log_dim);

  const double emin = energies.minCoeff();
  const double scale = energies.cwiseAbs().maxCoeff() + 1.0;
  long long ground = 0;
  for (Eigen::Index i = 0; i < d; ++i)
    if (energies(i) - emin <= 1e-12 * scale) ++ground;

  // Up to the ground level's own entropy the constraint is saturated on the
  // ground eigenspace alone.
  if (c <= std::log2(static_cast<double>(ground)) + 1e-12)
    return {emin, std::numeric_limits<double>::infinity()};
  if (c >= log_dim - 1e-12) return {energies.mean(), 0.0};

  double lo = 0.0;
  double hi = 1.0;
  while (detail::gibbs_entropy_mean(energies, hi).first > c) {
    lo = hi;
    hi *= 2.0;
  }
  GibbsPoint out;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const auto [s, mean] = detail::gibbs_entropy_mean(energies, mid);
    out = {mean, mid};
    if (std::abs(s - c) <= 1e-9) return out;
    (s > c ? lo : hi) = mid;
  }
  return out;
}

/** Hamiltonian overload: expands levels by their degeneracies. */
inline GibbsPoint min_energy_at_coherence(const Hamiltonian& h_b, double c_bits) {
  RealVector energies(h_b.dim());
  Eigen::Index idx = 0;
  for (int l = 0; l < h_b.level_count(); ++l)
    for (int j = 0; j < h_b.degeneracy(l); ++j) energies(idx++) = h_b.energy(l);
  return min_energy_at_coherence(energies, c_bits);
}

struct MinVarianceResult {
  double variance = 0.0;
  double mu_opt = 0.0;
  /** omega^2 2^{2C} / (e pi), reported when the spectrum is a uniform ladder. */
  std::optional<double> asymptotic_reference;
};

namespace detail {

/** Entropy (bits) and variance of p_i ~ exp(-zeta (E_i - mu)^2). */
inline std::pair<double, double> quad_entropy_var(const RealVector& energies, double mu,
                                                  double zeta) {
  double dmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < energies.size(); ++i) dmin = std::min(dmin, sq(energies(i) - mu));
  double z = 0.0;
  for (Eigen::Index i = 0; i < energies.size(); ++i)
    z += std::exp(-zeta * (sq(energies(i) - mu) - dmin));
  double s = 0.0;
  double mean = 0.0;
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    const double p = std::exp(-zeta * (sq(energies(i) - mu) - dmin)) / z;
    s -= xlog2x(p);
    mean += p * energies(i);
  }
  double var = 0.0;
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    const double p = std::exp(-zeta * (sq(energies(i) - mu) - dmin)) / z;
    var += p * sq(energies(i) - mean);
  }
  return {s, var};
}

}  // namespace detail

/** Least energy variance of any state with entropic coherence at least c_bits:
 *  for each mu on the grid, solve the Lagrange multiplier of the Gaussian
 *  family exp(-zeta (H - mu)^2) against the entropy constraint and take the
 *  grid infimum of the variance.  Grid points whose family cannot reach the
 *  target entropy (the quadratic weight plateaus above it) are skipped.
 */
inline MinVarianceResult min_variance_at_coherence(const RealVector& energies, double c_bits,
                                                   const RealVector& mu_grid) {
  if (energies.size() < 1) throw schema_error("min_variance_at_coherence: empty spectrum");
  if (mu_grid.size() < 1) throw schema_error("min_variance_at_coherence: empty mu grid");
  const auto d = energies.size();
  const double log_dim = std::log2(static_cast<double>(d));
  detail::check_coherence_domain(c_bits, log_dim);
  const double c = std::clamp(c_bits, 0.0, log_dim);

  MinVarianceResult out;
  if (d >= 2) {
    RealVector sorted = energies;
    std::sort(sorted.data(), sorted.data() + sorted.size());
    const double omega = sorted(1) - sorted(0);
    const double scale = sorted.cwiseAbs().maxCoeff() + 1.0;
    bool ladder = omega > 1e-12 * scale;
    for (Eigen::Index i = 2; i < d && ladder; ++i)
      if (std::abs(sorted(i) - sorted(i - 1) - omega) > 1e-9 * scale) ladder = false;
    if (ladder)
      out.asymptotic_reference =
          sq(omega) * std::exp2(2.0 * c) / (std::exp(1.0) * M_PI);
  }

  out.mu_opt = mu_grid(0);
  if (c <= 1e-12) return out;  // an eigenstate meets the constraint at zero variance

  bool solved = false;
  for (Eigen::Index gi = 0; gi < mu_grid.size(); ++gi) {
    const double mu = mu_grid(gi);
    double lo = 0.0;
    double hi = 1.0;
    bool reachable = true;
    while (detail::quad_entropy_var(energies, mu, hi).first > c + 1e-12) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e30) {
        reachable = false;
        break;
      }
    }
    if (!reachable && detail::quad_entropy_var(energies, mu, hi).first > c + 1e-9) continue;
    double var = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const auto [s, v] = detail::quad_entropy_var(energies, mu, mid);
      var = v;
      if (std::abs(s - c) <= 1e-9) break;
      (s > c ? lo : hi) = mid;
    }
    if (!solved || var < out.variance) {
      out.variance = var;
      out.mu_opt = mu;
      solved = true;
    }
  }
  if (!solved)
    throw convergence_error("min_variance_at_coherence: no grid point reaches the entropy target");
  return out;
}

/** Hamiltonian overload: expands levels by their degeneracies. */
inline MinVarianceResult min_variance_at_coherence(const Hamiltonian& h_b, double c_bits,
                                                   const RealVector& mu_grid) {
  RealVector energies(h_b.dim());
  Eigen::Index idx = 0;
  for (int l = 0; l < h_b.level_count(); ++l)
    for (int j = 0; j < h_b.degeneracy(l); ++j) energies(idx++) = h_b.energy(l);
  return min_variance_at_coherence(energies, c_bits, mu_grid);
}

//=============================================================================
// Assembled report
//=============================================================================

struct BoundReport {
  int r2_lower = 0;
  double lambda2_lower = 0.0;
  double sigma = 0.0;
  double sigma_prime = 0.0;
  double alpha = 1.0;
  int m_opt = 0;
  double coherence_bound_general = 0.0;
  double coherence_bound_proportionate = 0.0;
  std::optional<double> coherence_bound_qubit;
  double dim_bound = 1.0;
  BoundVariant variant_used = BoundVariant::general;
  bool o1_omitted = true;
  std::optional<R2Witness> witness;
};

/** Runs the asymmetry search and evaluates every headline bound at eps. */
inline BoundReport evaluate_bounds(const GateInstance& g, double eps, double alpha,
                                   BoundVariant variant, const R2SearchOptions& opts = {},
                                   const std::vector<ExactReal>& exact_levels = {}) {
  if (!(eps > 0.0 && eps < 1.0))
    throw schema_error("evaluate_bounds: domain requires eps in (0,1)");
  if (!(alpha > 0.0)) throw schema_error("evaluate_bounds: alpha must be positive");

  BoundReport rep;
  rep.alpha = alpha;
  rep.variant_used = variant;

  const R2SearchResult search = r2_lambda2_search(g, opts, exact_levels);
  rep.r2_lower = search.r2_lower;
  rep.lambda2_lower = search.lambda2_lower;
  rep.witness = search.witness;

  if (search.energy_preserving || search.r2_lower == 0) {
    if (g.dim() == 2) rep.coherence_bound_qubit = 0.0;
    return rep;
  }

  const SigmaValues sv = sigma_values(rep.r2_lower, rep.lambda2_lower, g.dim(), alpha);
  rep.sigma = sv.sigma;
  rep.sigma_prime = sv.sigma_prime;

  const CoherenceBound general = coherence_lower_bound(rep.r2_lower, rep.lambda2_lower,
                                                       g.dim(), eps, BoundVariant::general, alpha);
  rep.coherence_bound_general = general.value_bits;
  rep.m_opt = general.m_opt;
  rep.coherence_bound_proportionate =
      coherence_lower_bound(rep.r2_lower, rep.lambda2_lower, g.dim(), eps,
                            BoundVariant::proportionate, alpha)
          .value_bits;
  if (g.dim() == 2)
    rep.coherence_bound_qubit =
        coherence_lower_bound(g, eps, BoundVariant::qubit, alpha).value_bits;
  rep.dim_bound = dimension_lower_bound(rep.r2_lower, rep.sigma_prime, eps);
  return rep;
}

}  // namespace gatecoh
