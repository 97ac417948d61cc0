/* This file is part of gatecoh, a library for coherence budgets of
 * energy non-preserving gates.
 *
 * Distributed under the MIT license; see LICENSE for terms.
 *
 * End-to-end acceptance runner.  Each numbered criterion exercises one
 * headline guarantee of the library at desk scale and prints exactly one
 * PASS/FAIL line with the computed quantities.  Run with no arguments to
 * execute every criterion, or with a single integer to run just that one.
 * The exit status is zero only if every executed criterion passes.
 */

#include <gatecoh/battery.hpp>
#include <gatecoh/bounds.hpp>
#include <gatecoh/channels.hpp>
#include <gatecoh/coherence.hpp>
#include <gatecoh/discrete_rv.hpp>
#include <gatecoh/linalg.hpp>
#include <gatecoh/observables.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "../tests/test_helpers.hpp"

namespace {

using namespace gatecoh;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return std::string(buf);
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

//=============================================================================
// 1. Coherence axiom suite: invariance, monotonicity, subadditivity,
//    continuity, each on 200 seeded random instances with dimension <= 8.
//=============================================================================

Hamiltonian random_degenerate_hamiltonian(int d, Rng& rng) {
  std::vector<std::pair<double, int>> spec;
  int left = d;
  double e = 0.0;
  while (left > 0) {
    const int mult = 1 + static_cast<int>(rng.uniform_index(std::min(left, 3)));
    spec.push_back({e, mult});
    left -= mult;
    e += 0.8 + rng.uniform();
  }
  return gct::random_hamiltonian_spectrum(spec, rng);
}

Verdict criterion_1() {
  const auto t0 = Clock::now();
  const int trials = 200;

  // Invariance under energy-preserving rotations.
  double worst_invariance = 0.0;
  {
    Rng rng(101);
    for (int t = 0; t < trials; ++t) {
      const int d = 2 + static_cast<int>(rng.uniform_index(7));
      const Hamiltonian h = random_degenerate_hamiltonian(d, rng);
      const DensityOperator rho = gct::random_density(d, rng);
      const Matrix u = random_energy_preserving_unitary(h, rng);
      const DensityOperator rotated =
          DensityOperator::trusted(u * rho.matrix() * u.adjoint());
      worst_invariance = std::max(
          worst_invariance, std::abs(entropic_coherence(rotated, h) -
                                     entropic_coherence(rho, h)));
    }
  }

  // Monotonicity under partial trace (joint dimension <= 8).
  double min_monotone = std::numeric_limits<double>::infinity();
  {
    Rng rng(102);
    const std::vector<std::pair<int, int>> splits{{2, 2}, {2, 3}, {3, 2},
                                                  {2, 4}, {4, 2}};
    for (int t = 0; t < trials; ++t) {
      const auto [da, db] = splits[rng.uniform_index(splits.size())];
      const Hamiltonian ha = gct::random_hamiltonian(da, rng);
      const Hamiltonian hb = gct::random_hamiltonian(db, rng);
      const DensityOperator rho = gct::random_density(da * db, rng);
      const DensityOperator reduced = DensityOperator::trusted(
          hermitize(partial_trace(rho.matrix(), {da, db}, {1})));
      min_monotone = std::min(min_monotone,
                              entropic_coherence(rho, tensor(ha, hb)) -
                                  entropic_coherence(reduced, hb));
    }
  }

  // Subadditivity on product states (joint dimension <= 8).
  double min_subadd = std::numeric_limits<double>::infinity();
  {
    Rng rng(103);
    const std::vector<std::pair<int, int>> splits{{2, 2}, {2, 3}, {3, 2},
                                                  {2, 4}, {4, 2}};
    for (int t = 0; t < trials; ++t) {
      const auto [da, db] = splits[rng.uniform_index(splits.size())];
      const Hamiltonian ha = gct::random_hamiltonian(da, rng);
      const Hamiltonian hb = gct::random_hamiltonian(db, rng);
      const DensityOperator rho = gct::random_density(da, rng);
      const DensityOperator sig = gct::random_density(db, rng);
      const DensityOperator joint =
          DensityOperator::trusted(kron(rho.matrix(), sig.matrix()));
      min_subadd = std::min(min_subadd,
                            entropic_coherence(rho, ha) +
                                entropic_coherence(sig, hb) -
                                entropic_coherence(joint, tensor(ha, hb)));
    }
  }

  // Continuity: |dC| <= 2 log2(d-1) D + 2 h2(D).
  double min_continuity = std::numeric_limits<double>::infinity();
  {
    Rng rng(104);
    for (int t = 0; t < trials; ++t) {
      const int d = 3 + static_cast<int>(rng.uniform_index(6));
      const Hamiltonian h = gct::random_hamiltonian(d, rng);
      const DensityOperator rho = gct::random_density(d, rng);
      const DensityOperator sig = gct::random_density(d, rng);
      const double dist = trace_distance(rho.matrix(), sig.matrix());
      const double envelope =
          2.0 * std::log2(double(d - 1)) * dist + 2.0 * binary_entropy(dist);
      min_continuity = std::min(
          min_continuity, envelope - std::abs(entropic_coherence(rho, h) -
                                              entropic_coherence(sig, h)));
    }
  }

  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = worst_invariance <= 1e-8 && min_monotone >= -1e-9 &&
           min_subadd >= -1e-9 && min_continuity >= -1e-9 && secs < 120.0;
  v.detail = fmt(
      "invariance max |dC| = %.2e (<= 1e-8); monotonicity min margin = %.2e; "
      "subadditivity min margin = %.2e; continuity min slack = %.2e "
      "(all >= -1e-9); 200 instances each, dims <= 8; %.1f s (< 120 s)",
      worst_invariance, min_monotone, min_subadd, min_continuity, secs);
  return v;
}

//=============================================================================
// 2. Definition equivalence: entropy gain under twirling equals the relative
//    entropy to the twirled state, and minimizes the relative entropy over
//    incoherent states.
//=============================================================================

Verdict criterion_2() {
  Rng rng(201);
  double worst_eq = 0.0;
  double min_opt = std::numeric_limits<double>::infinity();
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const int d = 2 + static_cast<int>(rng.uniform_index(7));
    const Hamiltonian h = (t % 2 == 0) ? gct::random_hamiltonian(d, rng)
                                       : random_degenerate_hamiltonian(d, rng);
    const DensityOperator rho = gct::random_density(d, rng);
    const double c = entropic_coherence(rho, h);
    worst_eq =
        std::max(worst_eq, std::abs(c - relative_entropy(rho, twirl(rho, h))));
    const DensityOperator sigma = twirl(gct::random_density(d, rng), h);
    min_opt = std::min(min_opt, relative_entropy(rho, sigma) - c);
  }
  Verdict v;
  v.pass = worst_eq <= 1e-9 && min_opt >= -1e-9;
  v.detail = fmt(
      "max |C - S(rho||twirl)| = %.2e (<= 1e-9); min S(rho||sigma) - C over "
      "random incoherent sigma = %.2e (>= -1e-9); %d instances",
      worst_eq, min_opt, trials);
  return v;
}

//=============================================================================
// 3. Battery coherence budget: the battery's coherence pays for any coherence
//    gained by the induced channel, on random battery-coupled setups.
//=============================================================================

Verdict criterion_3() {
  Rng rng(301);
  double min_budget = std::numeric_limits<double>::infinity();
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const int d_s = 2 + static_cast<int>(rng.uniform_index(2));
    const int d_b = 2 + static_cast<int>(rng.uniform_index(3));
    const int d_a = 2 + static_cast<int>(rng.uniform_index(2));
    const int beta_rank = 1 + static_cast<int>(rng.uniform_index(d_b));
    const TepChannel ch = gct::random_tep_channel(d_s, d_b, rng, beta_rank);
    const Hamiltonian h_a = gct::random_hamiltonian(d_a, rng);
    const Hamiltonian h_sa = tensor(ch.system_hamiltonian(), h_a);
    const DensityOperator rho_in = gct::random_density(
        d_s * d_a, rng, 1 + static_cast<int>(rng.uniform_index(d_s * d_a)));
    const double c_in = entropic_coherence(rho_in, h_sa);
    const double c_out =
        entropic_coherence(ch.apply_with_ancilla(rho_in, d_a), h_sa);
    const double c_battery =
        entropic_coherence(ch.battery_state(), ch.battery_hamiltonian());
    min_budget = std::min(min_budget, c_battery - (c_out - c_in));
  }
  Verdict v;
  v.pass = min_budget >= -1e-8;
  v.detail = fmt(
      "min C(battery) - [C(out) - C(in)] = %.2e (>= -1e-8); 200 setups with "
      "d_S <= 3, d_B <= 4, random auxiliaries",
      min_budget);
  return v;
}

//=============================================================================
// 4. Multi-copy protocol discrepancy: the energy-statistics distance between
//    the battery protocol and the ideal alternating gate sequence stays below
//    4 m sqrt(eps_wc_upper) for m in {1,2,3} on ladder batteries up to 32
//    levels.
//=============================================================================

PureState correlated_branch_state(int m) {
  const int n = 2 * m;
  Vector v = Vector::Zero(1LL << (4 * m));
  for (int k = 0; k <= n; ++k) {
    long long idx = 0;
    for (int i = 0; i < 2 * n; ++i) {
      const int copy = i % n;
      idx = idx * 2 + (copy < k ? 1 : 0);
    }
    v(idx) += 1.0;
  }
  v.normalize();
  return PureState(v);
}

Verdict criterion_4() {
  const auto t0 = Clock::now();
  struct LadderCase {
    Matrix target;
    int d_b;
  };
  const std::vector<LadderCase> cases{
      {gct::hadamard(), 8},
      {gct::hadamard(), 16},
      {gct::hadamard(), 32},
      {gct::qubit_rotation(2.0 * M_PI / 5.0, 0.3), 16}};
  Rng rng(401);
  double worst_ratio = 0.0;
  int checks = 0;
  bool ok = true;
  for (const LadderCase& lc : cases) {
    const LadderBattery battery{lc.d_b, 1.0};
    const PureState beta =
        sine_ladder_state(lc.d_b, lc.d_b / 4, lc.d_b / 2);
    const TepChannel ch =
        qubit_ladder_channel(lc.target, battery, beta.density());
    const ChannelApproxReport rep = worst_case_infidelity(ch, lc.target);
    for (int m = 1; m <= 3; ++m) {
      const double allowance = 4.0 * m * std::sqrt(rep.eps_wc_upper) + 1e-9;
      std::vector<PureState> inputs;
      inputs.push_back(gct::random_pure(1 << (4 * m), rng));
      if (m <= 2) inputs.push_back(correlated_branch_state(m));
      for (const PureState& psi : inputs) {
        const double disc = mcopy_discrepancy(ch, lc.target, m, psi);
        worst_ratio = std::max(worst_ratio, disc / allowance);
        ok = ok && disc <= allowance;
        ++checks;
      }
    }
  }
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = ok && secs < 300.0;
  v.detail =
      fmt("max discrepancy / (4 m sqrt(eps_wc_upper) + 1e-9) = %.3f over %d "
          "checks (m in {1,2,3}, ladder batteries d_B in {8,16,32}); %.1f s "
          "(< 300 s)",
          worst_ratio, checks, secs);
  return v;
}

//=============================================================================
// 5. Qubit production entropy: the exact mixed-binomial entropy at m = 64
//    clears its logarithmic floor with at most 0.2 bits of slack, and hits
//    log2(2m+1) exactly for a half-turn.
//=============================================================================

Verdict criterion_5() {
  const int m = 64;
  double min_margin = std::numeric_limits<double>::infinity();
  std::string margins;
  for (const double theta : {M_PI / 8.0, M_PI / 4.0, 3.0 * M_PI / 8.0}) {
    const QubitProductionEntropy q = qubit_production_entropy(theta, m);
    const double margin = q.exact_bits - (q.floor_bits - 0.2);
    min_margin = std::min(min_margin, margin);
    margins += fmt("%s%.3f", margins.empty() ? "" : "/", q.exact_bits - q.floor_bits);
  }
  const QubitProductionEntropy half = qubit_production_entropy(M_PI / 2.0, m);
  const double eq_err = std::abs(half.exact_bits - std::log2(2.0 * m + 1.0));
  Verdict v;
  v.pass = min_margin >= 0.0 && eq_err <= 1e-9;
  v.detail = fmt(
      "exact - floor = %s bits at theta = pi/8, pi/4, 3pi/8 (allowed >= "
      "-0.2); half-turn |exact - log2(129)| = %.1e (<= 1e-9); m = 64",
      margins.c_str(), eq_err);
  return v;
}

//=============================================================================
// 6. Entropy of i.i.d. sums: the closed-form binomial entropy meets its
//    Gaussian-lattice asymptote at N = 1e5, and for the {0, 1, sqrt2} support
//    the exact entropy meets the certified growth bound with shrinking gap.
//=============================================================================

Verdict criterion_6() {
  // Binomial(1e5, 1/2) against 0.5 log2(2 pi e N Var).
  const long long n_binom = 100000;
  const double exact_binom = binomial_entropy(n_binom, 0.5);
  const double asym =
      0.5 * std::log2(2.0 * M_PI * std::exp(1.0) * double(n_binom) * 0.25);
  const bool binom_ok = std::abs(exact_binom - asym) <= 0.01;

  // Uniform {0, 1, sqrt 2}: exact sum entropy vs the certified lower bound.
  const auto b2 = ExactBasis::make({"1", "sqrt2"});
  const DiscreteRV tri(
      {ExactReal(b2, {Rational(0), Rational(0)}),
       ExactReal(b2, {Rational(1), Rational(0)}),
       ExactReal(b2, {Rational(0), Rational(1)})},
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  const ScoredPrepartition best = best_certified_prepartition(tri);
  std::vector<double> gaps;
  double exact_2000 = 0.0, bound_2000 = 0.0;
  for (const long long n : {500LL, 1000LL, 2000LL}) {
    const SumStatistics st = sum_statistics(tri, n);
    const EntropyBound eb = entropy_lower_bound(tri, n, best.prepartition);
    gaps.push_back(std::abs(st.entropy_bits - eb.value_bits));
    if (n == 2000) {
      exact_2000 = st.entropy_bits;
      bound_2000 = eb.value_bits;
    }
  }
  // The bound omits a vanishing correction, so the inequality carries a
  // declared slack of 1e-3 bits at this scale.
  const bool order_ok = exact_2000 >= bound_2000 - 1e-3;
  const bool shrink_ok = gaps[0] > gaps[1] && gaps[1] > gaps[2];

  Verdict v;
  v.pass = binom_ok && best.found && order_ok && shrink_ok;
  v.detail = fmt(
      "binomial |exact - asymptote| = %.1e (<= 0.01) at N = 1e5; {0,1,sqrt2} "
      "exact - bound = %+.1e at N = 2000 (>= -1e-3 declared slack), |gap| "
      "%.1e -> %.1e -> %.1e over N = 500/1000/2000 (shrinking)",
      std::abs(exact_binom - asym), exact_2000 - bound_2000, gaps[0], gaps[1],
      gaps[2]);
  return v;
}

//=============================================================================
// 7. Incommensurability rank: the coordinate-block certificate never
//    contradicts the bounded collision search on any candidate family over
//    small two-direction supports, and sum-set supports over an independent
//    basis certify rank >= d-1.
//=============================================================================

void for_each_subset(int pool, int size,
                     const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> pick(size);
  std::function<void(int, int)> rec = [&](int start, int at) {
    if (at == size) {
      fn(pick);
      return;
    }
    for (int i = start; i <= pool - (size - at); ++i) {
      pick[at] = i;
      rec(i + 1, at + 1);
    }
  };
  rec(0, 0);
}

Verdict criterion_7() {
  const auto b2 = ExactBasis::make({"1", "sqrt2"});
  std::vector<ExactReal> pool;
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 2; ++j)
      pool.push_back(ExactReal(b2, {Rational(i), Rational(j)}));

  long long subsets = 0, families = 0, contradictions = 0;
  for (int size = 2; size <= 5; ++size) {
    for_each_subset(static_cast<int>(pool.size()), size,
                    [&](const std::vector<int>& pick) {
                      std::vector<ExactReal> chi;
                      for (const int i : pick) chi.push_back(pool[i]);
                      for_each_prepartition(
                          size, [&](const std::vector<std::vector<int>>& idx) {
                            const FamilyAudit audit = audit_family(chi, idx, 5);
                            ++families;
                            if (audit.valid && audit.certified &&
                                audit.collision)
                              ++contradictions;
                          });
                      ++subsets;
                    });
  }

  // Pairwise sums over an independent basis of size d certify rank >= d-1.
  bool sums_ok = true;
  std::string ranks;
  const std::vector<std::vector<std::string>> bases{
      {"1", "sqrt2", "sqrt3"}, {"1", "sqrt2", "sqrt3", "sqrt5"}};
  for (const auto& labels : bases) {
    const auto basis = ExactBasis::make(labels);
    const int d = static_cast<int>(labels.size());
    std::vector<ExactReal> gens;
    for (int i = 0; i < d; ++i) {
      std::vector<Rational> c(d, Rational(0));
      c[i] = 1;
      gens.push_back(ExactReal(basis, std::move(c)));
    }
    std::vector<ExactReal> sums;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) sums.push_back(gens[i] + gens[j]);
    const RankResult r = incommensurability_rank(sums);
    sums_ok = sums_ok && r.lower >= d - 1;
    ranks += fmt("%sd=%d:%d", ranks.empty() ? "" : ", ", d, r.lower);
  }

  Verdict v;
  v.pass = contradictions == 0 && sums_ok;
  v.detail = fmt(
      "certificate/collision contradictions: %lld over %lld families from "
      "%lld supports (sizes 2-5 over {1, sqrt2}); pairwise-sum ranks %s "
      "(need >= d-1)",
      contradictions, families, subsets, ranks.c_str());
  return v;
}

//=============================================================================
// 8. Ladder tightness sweep: doubling the battery support from 2 to 128
//    drives the worst-case error down with log-log slope in [-2.6, -1.4],
//    while the coherence lower bound at the achieved error stays within half
//    a bit of the battery's log2(L) coherence.
//=============================================================================

Verdict criterion_8() {
  const auto t0 = Clock::now();
  LadderSweepOptions opts;
  opts.target = gct::hadamard();
  opts.l_values = {2, 4, 8, 16, 32, 64, 128};
  const GateInstance gate(
      Hamiltonian::from_energies((RealVector(2) << 0.0, 1.0).finished()),
      gct::hadamard());
  opts.bound_fn = [&gate](double eps) {
    eps = std::clamp(eps, 1e-15, 1.0 - 1e-15);
    return coherence_lower_bound(gate, eps, BoundVariant::qubit).value_bits;
  };
  const std::vector<LadderSweepRow> rows = run_ladder_sweep(opts);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  bool bound_ok = true;
  double worst_bound_excess = -std::numeric_limits<double>::infinity();
  for (const LadderSweepRow& r : rows) {
    const double x = std::log2(double(r.big_l));
    const double y = std::log2(r.eps_wc_upper);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    const double excess = r.bound_value - (std::log2(double(r.big_l)) + 0.5);
    worst_bound_excess = std::max(worst_bound_excess, excess);
    bound_ok = bound_ok && excess <= 1e-9;
  }
  const double n = double(rows.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double secs = seconds_since(t0);

  Verdict v;
  v.pass = slope >= -2.6 && slope <= -1.4 && bound_ok && secs < 600.0;
  v.detail = fmt(
      "log-log slope of eps_wc_upper vs L = %.3f (in [-2.6, -1.4]); max "
      "bound - (log2 L + 0.5) = %.2e (<= 1e-9) over L = 2..128 doubling; "
      "%.1f s (< 600 s)",
      slope, worst_bound_excess, secs);
  return v;
}

//=============================================================================
// 9. Entropy-constrained spectral optimizers: minimum ladder energy at ten
//    bits of coherence against the 511 reference, and minimum ladder variance
//    at eight bits against the 2^16/(e pi) reference.
//=============================================================================

Verdict criterion_9() {
  RealVector ladder_energy(4096);
  for (int i = 0; i < 4096; ++i) ladder_energy(i) = i;
  const GibbsPoint p = min_energy_at_coherence(ladder_energy, 10.0);
  const double e_target = 511.0;
  const bool e_ok = std::abs(p.energy - e_target) <= 0.05 * e_target;

  RealVector ladder_var(8192);
  for (int i = 0; i < 8192; ++i) ladder_var(i) = i;
  RealVector grid(1);
  grid << 4096.0;
  const MinVarianceResult r = min_variance_at_coherence(ladder_var, 8.0, grid);
  const double v_target = 65536.0 / (std::exp(1.0) * M_PI);
  const bool v_ok = std::abs(r.variance - v_target) <= 0.1 * v_target;

  Verdict v;
  v.pass = e_ok && v_ok;
  v.detail = fmt(
      "min energy at C = 10 on a 4096 ladder = %.4f vs target %.0f +- 5%% "
      "(%s); min variance at C = 8 on an 8192 ladder = %.4f vs target %.2f "
      "+- 10%% (%s)",
      p.energy, e_target, e_ok ? "ok" : "off",
      r.variance, v_target, v_ok ? "ok" : "off");
  return v;
}

//=============================================================================
// 10. Fidelity/distance sandwiches: every channel report keeps the Choi /
//     worst-case / dimension-scaled bracket, its diamond interval matches the
//     fidelity-distance conversion, and actual channel outputs satisfy the
//     Fuchs-van de Graaf inequalities against the target.
//=============================================================================

struct SandwichStats {
  long long channels = 0;
  long long state_checks = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  bool ok = true;
};

void check_sandwich(const TepChannel& ch, const Matrix& v, Rng& rng,
                    SandwichStats& stats) {
  WorstCaseOptions w;
  w.starts = 8;
  const ChannelApproxReport rep = worst_case_infidelity(ch, v, w);
  const double d = double(ch.d_s());
  const auto track = [&stats](double slack) {
    stats.min_slack = std::min(stats.min_slack, slack);
    stats.ok = stats.ok && slack >= -1e-9;
  };
  track(rep.eps_wc_estimate - rep.eps_choi);
  track(std::min(1.0, d * rep.eps_choi) - rep.eps_wc_estimate);
  track(1e-12 - std::abs(rep.eps_wc_lower - rep.eps_choi));
  track(1e-12 -
        std::abs(rep.eps_wc_upper - std::min(1.0, d * rep.eps_choi)));
  track(1e-9 - std::abs(rep.diamond_lower -
                        (1.0 - std::sqrt(1.0 - rep.eps_wc_estimate))));
  track(1e-9 - std::abs(rep.diamond_upper - std::sqrt(rep.eps_wc_upper)));
  track(rep.diamond_upper - rep.diamond_lower);
  for (int i = 0; i < 3; ++i) {
    const DensityOperator rho = gct::random_density(ch.d_s(), rng);
    const DensityOperator out = ch.apply(rho);
    const Matrix ideal = v * rho.matrix() * v.adjoint();
    const double fid =
        std::clamp(state_fidelity(out.matrix(), ideal), 0.0, 1.0);
    const double dist = trace_distance(out.matrix(), ideal);
    track(dist - (1.0 - std::sqrt(fid)));
    track(std::sqrt(1.0 - fid) - dist);
    ++stats.state_checks;
  }
  ++stats.channels;
}

Verdict criterion_10() {
  SandwichStats stats;

  // Random battery-coupled channels against random and trivial targets.
  {
    Rng rng(1001);
    for (int t = 0; t < 30; ++t) {
      const int d_s = 2 + static_cast<int>(rng.uniform_index(2));
      const int d_b = 2 + static_cast<int>(rng.uniform_index(3));
      const TepChannel ch = gct::random_tep_channel(d_s, d_b, rng);
      check_sandwich(ch, haar_unitary(d_s, rng), rng, stats);
      check_sandwich(ch, Matrix::Identity(d_s, d_s), rng, stats);
    }
  }

  // The ladder channels from the protocol-discrepancy suite.
  {
    Rng rng(1002);
    const std::vector<std::pair<Matrix, int>> cases{
        {gct::hadamard(), 8},
        {gct::hadamard(), 16},
        {gct::hadamard(), 32},
        {gct::qubit_rotation(2.0 * M_PI / 5.0, 0.3), 16}};
    for (const auto& [target, d_b] : cases) {
      const PureState beta = sine_ladder_state(d_b, d_b / 4, d_b / 2);
      const TepChannel ch =
          qubit_ladder_channel(target, LadderBattery{d_b, 1.0}, beta.density());
      check_sandwich(ch, target, rng, stats);
    }
  }

  // The tightness-sweep channels.
  {
    Rng rng(1003);
    for (const int big_l : {2, 4, 8, 16, 32, 64, 128}) {
      const int d_eff = big_l + 2;
      const int n0 = std::max(1, (d_eff - big_l) / 2);
      const PureState beta = sine_ladder_state(d_eff, n0, big_l);
      const TepChannel ch = qubit_ladder_channel(
          gct::hadamard(), LadderBattery{d_eff, 1.0}, beta.density());
      check_sandwich(ch, gct::hadamard(), rng, stats);
    }
  }

  Verdict v;
  v.pass = stats.ok;
  v.detail = fmt(
      "min slack across bracket, diamond-interval, and state-level "
      "fidelity-distance checks = %.2e (>= -1e-9) over %lld channels and "
      "%lld output states",
      stats.min_slack, stats.channels, stats.state_checks);
  return v;
}

Verdict run_criterion(int id) {
  switch (id) {
    case 1: return criterion_1();
    case 2: return criterion_2();
    case 3: return criterion_3();
    case 4: return criterion_4();
    case 5: return criterion_5();
    case 6: return criterion_6();
    case 7: return criterion_7();
    case 8: return criterion_8();
    case 9: return criterion_9();
    case 10: return criterion_10();
    default: break;
  }
  return {false, "unknown criterion"};
}

} // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  if (argc > 1) {
    const int id = std::atoi(argv[1]);
    if (id < 1 || id > 10) {
      std::fprintf(stderr, "usage: %s [1-10]\n", argv[0]);
      return 2;
    }
    ids.push_back(id);
  } else {
    for (int id = 1; id <= 10; ++id) ids.push_back(id);
  }

  bool all_pass = true;
  for (const int id : ids) {
    const Verdict v = run_criterion(id);
    std::printf("criterion %d: %s - %s\n", id, v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && v.pass;
  }
  return all_pass ? 0 : 1;
}
