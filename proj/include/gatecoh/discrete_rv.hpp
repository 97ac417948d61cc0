#pragma once

// Discrete random variables with exactly represented support, N-fold sum
// distributions on an integer grid, incommensurability certificates for
// partitions of the support, and the resulting lower bounds on the entropy
// of large sums.

#include <gatecoh/exact.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace gatecoh {

inline constexpr long long kMaxSumSupportCells = 10'000'000;

inline double entropy_bits(const std::vector<double>& p) {
  double s = 0.0;
  for (const double x : p)
    if (x > 0.0) s -= x * std::log2(x);
  return std::max(s, 0.0);  // roundoff can leave -1e-16 on point masses
}

// A finitely supported real random variable.  Atom values are exact (so
// distinct atoms are provably distinct); probabilities are floating point.
class DiscreteRV {
 public:
  DiscreteRV(std::vector<ExactReal> values, std::vector<double> probs, double sum_tol = 1e-12)
      : values_(std::move(values)), probs_(std::move(probs)) {
    if (values_.empty() || values_.size() != probs_.size())
      throw schema_error("atom values and probabilities must be non-empty and match");
    double total = 0.0;
    for (const double p : probs_) {
      if (!(p > 0.0) || !std::isfinite(p)) throw schema_error("atom probabilities must be positive");
      total += p;
    }
    if (std::abs(total - 1.0) > sum_tol) throw schema_error("atom probabilities must sum to one");
    for (std::size_t i = 0; i < values_.size(); ++i)
      for (std::size_t j = i + 1; j < values_.size(); ++j)
        if (values_[i] == values_[j]) throw schema_error("duplicate atom values");
  }

  int size() const { return static_cast<int>(values_.size()); }
  const ExactReal& value(int i) const { return values_.at(i); }
  double prob(int i) const { return probs_.at(i); }
  const std::vector<ExactReal>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }
  const std::shared_ptr<const ExactBasis>& basis() const { return values_.front().basis(); }

  double mean() const {
    double m = 0.0;
    for (int i = 0; i < size(); ++i) m += probs_[i] * values_[i].value();
    return m;
  }

  double variance() const {
    const double m = mean();
    double v = 0.0;
    for (int i = 0; i < size(); ++i) {
      const double d = values_[i].value() - m;
      v += probs_[i] * d * d;
    }
    return v;
  }

  double entropy() const { return entropy_bits(probs_); }

  static DiscreteRV bernoulli(double p) {
    if (!(p > 0.0 && p < 1.0)) throw schema_error("success probability must be inside (0,1)");
    const auto& basis = ExactBasis::rational();
    return DiscreteRV({ExactReal::from_rational(basis, 0), ExactReal::from_rational(basis, 1)},
                      {1.0 - p, p});
  }

  static DiscreteRV uniform(std::vector<ExactReal> values) {
    const std::size_t count = values.size();
    if (count == 0) throw schema_error("atom values and probabilities must be non-empty and match");
    return DiscreteRV(std::move(values), std::vector<double>(count, 1.0 / count));
  }

  /** For internal producers whose atom values are distinct by construction
   *  (e.g. grid decodings); skips the quadratic distinctness check. */
  static DiscreteRV trusted(std::vector<ExactReal> values, std::vector<double> probs,
                            double sum_tol) {
    DiscreteRV out;
    out.values_ = std::move(values);
    out.probs_ = std::move(probs);
    if (out.values_.empty() || out.values_.size() != out.probs_.size())
      throw schema_error("atom values and probabilities must be non-empty and match");
    double total = 0.0;
    for (const double p : out.probs_) {
      if (!(p > 0.0) || !std::isfinite(p)) throw schema_error("atom probabilities must be positive");
      total += p;
    }
    if (std::abs(total - 1.0) > sum_tol) throw schema_error("atom probabilities must sum to one");
    return out;
  }

 private:
  DiscreteRV() = default;

  std::vector<ExactReal> values_;
  std::vector<double> probs_;
};

// ---------------------------------------------------------------------------
// N-fold sum distribution on an exact integer grid.

// Per-coordinate description of the grid: after clearing denominators with
// `den`, every atom's coefficient becomes the integer `den * coeff`, and an
// n-fold sum lives on [n*min_int, n*max_int] in steps of 1.
struct SumGridAxis {
  BigInt den;
  std::vector<long long> offset;  // per atom: integer coefficient minus min_int
  long long min_int = 0;
  long long width = 0;  // max_int - min_int
};

// Final probability box of an n-fold sum, with enough metadata to decode the
// exact value of every cell.
struct SumBox {
  long long n = 0;
  std::vector<SumGridAxis> axes;
  std::vector<double> p;  // row-major over extents (n*width_c + 1)
  std::shared_ptr<const ExactBasis> basis;

  long long extent(int c) const { return n * axes[c].width + 1; }

  ExactReal cell_value(const std::vector<long long>& idx) const {
    std::vector<Rational> coeffs(axes.size());
    for (std::size_t c = 0; c < axes.size(); ++c)
      coeffs[c] = Rational(BigInt(n * axes[c].min_int + idx[c]), axes[c].den);
    return ExactReal(basis, std::move(coeffs));
  }
};

namespace detail {

inline std::vector<SumGridAxis> build_sum_axes(const DiscreteRV& x) {
  const int dims = x.basis()->size();
  const int atoms = x.size();
  std::vector<SumGridAxis> axes(dims);
  for (int c = 0; c < dims; ++c) {
    BigInt den = 1;
    for (int a = 0; a < atoms; ++a)
      den = boost::multiprecision::lcm(den, denominator(x.value(a).coeff(c)));
    std::vector<BigInt> ints(atoms);
    for (int a = 0; a < atoms; ++a) {
      ints[a] = numerator(x.value(a).coeff(c)) * (den / denominator(x.value(a).coeff(c)));
      if (boost::multiprecision::abs(ints[a]) > BigInt(1) << 40)
        throw cap_error("support explosion");
    }
    const BigInt mn = *std::min_element(ints.begin(), ints.end());
    const BigInt mx = *std::max_element(ints.begin(), ints.end());
    axes[c].den = den;
    axes[c].min_int = mn.convert_to<long long>();
    axes[c].width = (mx - mn).convert_to<long long>();
    axes[c].offset.resize(atoms);
    for (int a = 0; a < atoms; ++a) axes[c].offset[a] = (ints[a] - mn).convert_to<long long>();
  }
  return axes;
}

inline long long sum_box_cells(const std::vector<SumGridAxis>& axes, long long n) {
  double approx = 1.0;
  long long cells = 1;
  for (const auto& axis : axes) {
    approx *= static_cast<double>(n * axis.width + 1);
    if (approx > static_cast<double>(kMaxSumSupportCells)) throw cap_error("support explosion");
    cells *= n * axis.width + 1;
  }
  return cells;
}

inline std::vector<long long> row_major_strides(const std::vector<SumGridAxis>& axes, long long n) {
  std::vector<long long> strides(axes.size());
  long long s = 1;
  for (int c = static_cast<int>(axes.size()) - 1; c >= 0; --c) {
    strides[c] = s;
    s *= n * axes[c].width + 1;
  }
  return strides;
}

}  // namespace detail

// Exact-grid convolution: probability box of the n-fold sum of independent
// copies of x.  Throws cap_error("support explosion") past ten million cells.
inline SumBox convolve_power(const DiscreteRV& x, long long n) {
  if (n < 1) throw schema_error("need at least one summand");
  const auto axes = detail::build_sum_axes(x);
  const int dims = static_cast<int>(axes.size());
  const int atoms = x.size();
  detail::sum_box_cells(axes, n);

  SumBox box;
  box.n = 1;
  box.axes = axes;
  box.basis = x.basis();
  box.p.assign(detail::sum_box_cells(axes, 1), 0.0);
  {
    const auto strides = detail::row_major_strides(axes, 1);
    for (int a = 0; a < atoms; ++a) {
      long long flat = 0;
      for (int c = 0; c < dims; ++c) flat += axes[c].offset[a] * strides[c];
      box.p[flat] += x.prob(a);
    }
  }

  std::vector<double> next;
  for (long long step = 2; step <= n; ++step) {
    const long long cur_n = step - 1;
    const auto cur_strides = detail::row_major_strides(axes, cur_n);
    const auto next_strides = detail::row_major_strides(axes, step);
    next.assign(detail::sum_box_cells(axes, step), 0.0);

    // Flat target offset of each atom under the next box's strides.
    std::vector<long long> atom_shift(atoms, 0);
    for (int a = 0; a < atoms; ++a)
      for (int c = 0; c < dims; ++c) atom_shift[a] += axes[c].offset[a] * next_strides[c];

    const long long run = cur_n * axes[dims - 1].width + 1;  // contiguous in both boxes
    std::vector<long long> idx(dims, 0);
    bool done = false;
    while (!done) {
      long long base_cur = 0;
      long long base_next = 0;
      for (int c = 0; c + 1 < dims; ++c) {
        base_cur += idx[c] * cur_strides[c];
        base_next += idx[c] * next_strides[c];
      }
      const double* src = box.p.data() + base_cur;
      for (int a = 0; a < atoms; ++a) {
        double* dst = next.data() + base_next + atom_shift[a];
        const double pa = x.prob(a);
        for (long long j = 0; j < run; ++j) dst[j] += pa * src[j];
      }
      done = true;
      for (int c = dims - 2; c >= 0; --c) {
        if (++idx[c] <= cur_n * axes[c].width) {
          done = false;
          break;
        }
        idx[c] = 0;
      }
      if (dims == 1) done = true;
    }
    box.p.swap(next);
    box.n = step;
  }
  return box;
}

// Materialized n-fold sum distribution with exact atom values.
inline DiscreteRV sum_distribution(const DiscreteRV& x, long long n) {
  if (n == 1) return x;
  const SumBox box = convolve_power(x, n);
  const int dims = static_cast<int>(box.axes.size());
  std::vector<ExactReal> values;
  std::vector<double> probs;
  std::vector<long long> idx(dims, 0);
  for (long long flat = 0; flat < static_cast<long long>(box.p.size()); ++flat) {
    if (box.p[flat] > 0.0) {
      values.push_back(box.cell_value(idx));
      probs.push_back(box.p[flat]);
    }
    for (int c = dims - 1; c >= 0; --c) {
      if (++idx[c] < box.extent(c)) break;
      idx[c] = 0;
    }
  }
  return DiscreteRV::trusted(std::move(values), std::move(probs), 1e-9);
}

struct SumStatistics {
  double entropy_bits = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  long long support_cells = 0;
};

// Entropy and moments of the n-fold sum, streamed from the probability box
// without materializing exact atom values.
inline SumStatistics sum_statistics(const DiscreteRV& x, long long n) {
  const SumBox box = convolve_power(x, n);
  const int dims = static_cast<int>(box.axes.size());
  std::vector<double> scale(dims);
  std::vector<double> origin(dims);
  for (int c = 0; c < dims; ++c) {
    scale[c] = box.basis->values[c] / box.axes[c].den.convert_to<double>();
    origin[c] = static_cast<double>(n * box.axes[c].min_int) * scale[c];
  }
  SumStatistics out;
  double m2 = 0.0;
  std::vector<long long> idx(dims, 0);
  for (long long flat = 0; flat < static_cast<long long>(box.p.size()); ++flat) {
    const double p = box.p[flat];
    if (p > 0.0) {
      double v = 0.0;
      for (int c = 0; c < dims; ++c) v += origin[c] + static_cast<double>(idx[c]) * scale[c];
      out.entropy_bits -= p * std::log2(p);
      out.mean += p * v;
      m2 += p * v * v;
      ++out.support_cells;
    }
    for (int c = dims - 1; c >= 0; --c) {
      if (++idx[c] < box.extent(c)) break;
      idx[c] = 0;
    }
  }
  out.variance = m2 - out.mean * out.mean;
  return out;
}

// Entropy of Binomial(n, p) from the closed-form probability mass function.
inline double binomial_entropy(long long n, double p) {
  if (n < 0) throw schema_error("need a non-negative count");
  if (!(p >= 0.0 && p <= 1.0)) throw schema_error("probability out of range");
  if (p == 0.0 || p == 1.0 || n == 0) return 0.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double lfn = std::lgamma(static_cast<double>(n) + 1.0);
  double s = 0.0;
  for (long long k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double log_pmf = lfn - std::lgamma(kd + 1.0) - std::lgamma(static_cast<double>(n - k) + 1.0) +
                           kd * lp + static_cast<double>(n - k) * lq;
    s -= std::exp(log_pmf) * log_pmf;
  }
  return s / std::log(2.0);
}

// ---------------------------------------------------------------------------
// Prepartitions of a support and incommensurability certificates.

// Disjoint, non-empty index subsets of a support; the union need not cover.
struct Prepartition {
  std::vector<std::vector<int>> subsets;
};

inline void validate_prepartition(const Prepartition& prep, int support_size) {
  if (prep.subsets.empty()) throw schema_error("invalid prepartition");
  std::vector<char> used(support_size, 0);
  for (const auto& subset : prep.subsets) {
    if (subset.empty()) throw schema_error("invalid prepartition");
    for (const int i : subset) {
      if (i < 0 || i >= support_size || used[i]) throw schema_error("invalid prepartition");
      used[i] = 1;
    }
  }
}

// Every subset must be a singleton or a lattice for the sum-entropy theory to
// apply; this checks one subset.
inline bool lattice_or_singleton(const std::vector<ExactReal>& block) {
  if (block.empty()) return false;
  if (block.size() == 1) return true;
  return maximal_span(block).kind == SpanKind::lattice;
}

// Sufficient condition for incommensurability: the subsets touch pairwise
// disjoint coordinates of the basis, so the grand total splits uniquely into
// per-subset contributions.  A zero-valued singleton is accepted only in an
// all-singleton family, where its multiplicity is pinned by the total count;
// mixed with larger subsets its multiplicity could not be recovered.
inline bool block_coordinate_certificate(const std::vector<std::vector<ExactReal>>& blocks) {
  if (blocks.empty()) return false;
  bool all_singleton = true;
  bool zero_singleton = false;
  for (const auto& b : blocks) {
    if (b.size() != 1)
      all_singleton = false;
    else if (b.front().is_zero())
      zero_singleton = true;
  }
  if (zero_singleton && !all_singleton) return false;
  const int dims = blocks.front().front().dim();
  std::vector<char> used(dims, 0);
  for (const auto& b : blocks) {
    std::vector<char> mine(dims, 0);
    for (const auto& v : b)
      for (int c = 0; c < dims; ++c)
        if (v.coeff(c) != 0) mine[c] = 1;
    for (int c = 0; c < dims; ++c)
      if (mine[c]) {
        if (used[c]) return false;
        used[c] = 1;
      }
  }
  return true;
}

// Second sufficient condition: all subsets are singletons (plus at most one
// pair) whose elements are jointly independent over the rationals, so the
// total's coefficient vector determines every multiplicity.
inline bool independent_singletons_certificate(const std::vector<std::vector<ExactReal>>& blocks) {
  if (blocks.empty()) return false;
  std::vector<ExactReal> elems;
  int pairs = 0;
  for (const auto& b : blocks) {
    if (b.size() > 2) return false;
    if (b.size() == 2) ++pairs;
    for (const auto& v : b) elems.push_back(v);
  }
  if (pairs > 1) return false;
  return rational_span_dim(elems) == static_cast<int>(elems.size());
}

namespace detail {

inline void multiset_sums_rec(const std::vector<ExactReal>& elems, std::size_t idx, int remaining,
                              const ExactReal& acc, std::set<ExactReal>& out) {
  if (idx + 1 == elems.size()) {
    out.insert(acc + elems[idx].scaled(Rational(remaining)));
    return;
  }
  for (int take = 0; take <= remaining; ++take)
    multiset_sums_rec(elems, idx + 1, remaining - take, acc + elems[idx].scaled(Rational(take)),
                      out);
}

// All distinct sums of `count` elements drawn from `elems` with repetition.
inline std::vector<ExactReal> multiset_sums(const std::vector<ExactReal>& elems, int count,
                                            const std::shared_ptr<const ExactBasis>& basis) {
  if (count == 0) return {ExactReal::from_rational(basis, 0)};
  std::set<ExactReal> out;
  multiset_sums_rec(elems, 0, count, ExactReal::from_rational(basis, 0), out);
  return {out.begin(), out.end()};
}

struct RecoveryTuple {
  std::vector<ExactReal> y;
  std::vector<long long> singleton_mult;
  bool operator==(const RecoveryTuple& o) const {
    return y == o.y && singleton_mult == o.singleton_mult;
  }
};

}  // namespace detail

// Bounded search for a witness that the family is NOT incommensurable: two
// ways of drawing the same grand total (with the same total count) whose
// per-subset contributions — or singleton multiplicities — differ.  Returns
// true when such a collision exists with total count at most n_max.
inline bool collision_search(const std::vector<std::vector<ExactReal>>& blocks, int n_max) {
  if (blocks.empty()) throw schema_error("invalid prepartition");
  const auto& basis = blocks.front().front().basis();
  const int k = static_cast<int>(blocks.size());

  for (int total = 1; total <= n_max; ++total) {
    std::map<ExactReal, detail::RecoveryTuple> seen;
    std::vector<int> mult(k, 0);
    bool collision = false;

    std::function<void(int, int)> assign = [&](int j, int remaining) {
      if (collision) return;
      if (j == k - 1) {
        mult[j] = remaining;
        std::vector<std::vector<ExactReal>> sums(k);
        for (int b = 0; b < k; ++b) sums[b] = detail::multiset_sums(blocks[b], mult[b], basis);
        std::vector<ExactReal> y(k);
        std::function<void(int, const ExactReal&)> cross = [&](int b, const ExactReal& acc) {
          if (collision) return;
          if (b == k) {
            detail::RecoveryTuple tuple{y, {}};
            for (int q = 0; q < k; ++q)
              if (blocks[q].size() == 1) tuple.singleton_mult.push_back(mult[q]);
            auto [it, inserted] = seen.emplace(acc, tuple);
            if (!inserted && !(it->second == tuple)) collision = true;
            return;
          }
          for (const auto& s : sums[b]) {
            y[b] = s;
            cross(b + 1, acc + s);
          }
        };
        cross(0, ExactReal::from_rational(basis, 0));
        return;
      }
      for (int take = 0; take <= remaining; ++take) {
        mult[j] = take;
        assign(j + 1, remaining - take);
      }
    };
    assign(0, total);
    if (collision) return true;
  }
  return false;
}

// Visits every family of disjoint non-empty index subsets of {0..d-1}
// (the union need not cover), in a deterministic order.
inline void for_each_prepartition(
    int d, const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    std::vector<int> items;
    for (int i = 0; i < d; ++i)
      if (mask & (1u << i)) items.push_back(i);
    std::vector<std::vector<int>> blocks;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == items.size()) {
        fn(blocks);
        return;
      }
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        blocks[b].push_back(items[i]);
        rec(i + 1);
        blocks[b].pop_back();
      }
      blocks.push_back({items[i]});
      rec(i + 1);
      blocks.pop_back();
    };
    rec(0);
  }
}

struct RankOptions {
  int n_max_falsify = 6;
  int exhaustive_limit = 6;
};

struct RankResult {
  int lower = 1;
  bool certified_exact = false;
};

// Audit of a single candidate family: structural validity, whether a
// certificate proves incommensurability, and whether the bounded search
// disproves it.  A correct implementation never reports both.
struct FamilyAudit {
  bool valid = false;
  bool certified = false;
  bool collision = false;
};

inline std::vector<std::vector<ExactReal>> gather_blocks(const std::vector<ExactReal>& chi,
                                                         const std::vector<std::vector<int>>& idx) {
  std::vector<std::vector<ExactReal>> blocks;
  blocks.reserve(idx.size());
  for (const auto& subset : idx) {
    std::vector<ExactReal> b;
    b.reserve(subset.size());
    for (const int i : subset) b.push_back(chi.at(i));
    blocks.push_back(std::move(b));
  }
  return blocks;
}

inline FamilyAudit audit_family(const std::vector<ExactReal>& chi,
                                const std::vector<std::vector<int>>& idx, int n_max) {
  const auto blocks = gather_blocks(chi, idx);
  FamilyAudit audit;
  audit.valid = !blocks.empty() &&
                std::all_of(blocks.begin(), blocks.end(),
                            [](const auto& b) { return lattice_or_singleton(b); });
  if (!audit.valid) return audit;
  audit.certified = block_coordinate_certificate(blocks);
  audit.collision = collision_search(blocks, n_max);
  return audit;
}

namespace detail {

// Groups support indices into classes with pairwise rational differences;
// each class is automatically a lattice.
inline std::vector<std::vector<int>> rational_difference_classes(const std::vector<ExactReal>& chi) {
  std::vector<std::vector<int>> classes;
  std::map<std::vector<Rational>, int> keys;
  for (int i = 0; i < static_cast<int>(chi.size()); ++i) {
    std::vector<Rational> key(chi[i].coeffs().begin() + 1, chi[i].coeffs().end());
    auto [it, inserted] = keys.emplace(std::move(key), static_cast<int>(classes.size()));
    if (inserted) classes.emplace_back();
    classes[it->second].push_back(i);
  }
  return classes;
}

// Groups support indices into rational-multiple ("ray") classes; rational
// multiples of one direction always form a lattice, and a zero value joins
// the first class without breaking that.
inline std::vector<std::vector<int>> ray_classes(const std::vector<ExactReal>& chi) {
  std::vector<std::vector<int>> classes;
  std::vector<ExactReal> reps;
  std::vector<int> zeros;
  for (int i = 0; i < static_cast<int>(chi.size()); ++i) {
    if (chi[i].is_zero()) {
      zeros.push_back(i);
      continue;
    }
    bool placed = false;
    for (std::size_t c = 0; c < reps.size() && !placed; ++c) {
      const ExactReal& rep = reps[c];
      int pivot = 0;
      while (rep.coeff(pivot) == 0) ++pivot;
      const Rational r = chi[i].coeff(pivot) / rep.coeff(pivot);
      bool proportional = true;
      for (int k = 0; k < rep.dim() && proportional; ++k)
        if (chi[i].coeff(k) != r * rep.coeff(k)) proportional = false;
      if (proportional) {
        classes[c].push_back(i);
        placed = true;
      }
    }
    if (!placed) {
      classes.push_back({i});
      reps.push_back(chi[i]);
    }
  }
  if (!zeros.empty()) {
    if (classes.empty()) classes.emplace_back();
    for (const int i : zeros) classes.front().push_back(i);
  }
  return classes;
}

}  // namespace detail

// Lower bound on the incommensurability rank of chi: the largest certified
// size of a non-degenerate canonical partition, minus one for all-singleton
// families.  `certified_exact` is set when no uncertified candidate could
// still beat the reported value.
inline RankResult incommensurability_rank(const std::vector<ExactReal>& chi,
                                          const RankOptions& opts = {}) {
  const int d = static_cast<int>(chi.size());
  if (d < 2) throw schema_error("need at least two values");
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (chi[i] == chi[j]) throw schema_error("duplicate values");

  if (maximal_span(chi).kind == SpanKind::lattice) return {1, true};

  const int q_dim = rational_span_dim(chi);
  const int base = std::max(1, q_dim - 1);

  if (d > opts.exhaustive_limit) {
    int best = base;
    for (const auto& classes :
         {detail::rational_difference_classes(chi), detail::ray_classes(chi)}) {
      if (classes.size() < 2) continue;
      const auto blocks = gather_blocks(chi, classes);
      if (!block_coordinate_certificate(blocks)) continue;
      const bool degenerate = std::all_of(classes.begin(), classes.end(),
                                          [](const auto& c) { return c.size() == 1; });
      best = std::max(best, static_cast<int>(classes.size()) - (degenerate ? 1 : 0));
    }
    return {best, best == d - 1};
  }

  struct Candidate {
    std::vector<std::vector<int>> idx;
    int k = 0;
    bool degenerate = false;
    bool covering = false;
    bool valid = false;
    bool certified = false;
  };
  std::vector<Candidate> candidates;
  for_each_prepartition(d, [&](const std::vector<std::vector<int>>& idx) {
    Candidate c;
    c.idx = idx;
    c.k = static_cast<int>(idx.size());
    c.degenerate = std::all_of(idx.begin(), idx.end(),
                               [](const auto& s) { return s.size() == 1; });
    int covered = 0;
    for (const auto& s : idx) covered += static_cast<int>(s.size());
    c.covering = covered == d;
    const auto blocks = gather_blocks(chi, idx);
    c.valid = std::all_of(blocks.begin(), blocks.end(),
                          [](const auto& b) { return lattice_or_singleton(b); });
    if (c.valid) c.certified = block_coordinate_certificate(blocks);
    candidates.push_back(std::move(c));
  });

  int lower = base;
  for (const auto& c : candidates) {
    if (!c.covering || !c.certified) continue;
    const int potential = c.k - (c.degenerate ? 1 : 0);
    lower = std::max(lower, potential);
  }

  bool exact = lower == d - 1;
  if (!exact) {
    exact = true;
    for (const auto& c : candidates) {
      if (!c.covering || !c.valid || c.degenerate || c.k <= lower) continue;
      if (c.certified) continue;  // would already be reflected in `lower`
      if (!collision_search(gather_blocks(chi, c.idx), opts.n_max_falsify)) {
        exact = false;
        break;
      }
    }
  }
  return {lower, exact};
}

// ---------------------------------------------------------------------------
// Entropy lower bounds for N-fold sums.

enum class EntropyBoundBranch { lattice, general, all_singletons };

struct PrepartitionRate {
  double lambda = 0.0;
  int k = 0;
  int s = 0;        // number of singleton subsets
  double q = 0.0;   // total probability covered by the prepartition
  bool all_singletons = false;
};

// The growth rate lambda entering the sum-entropy lower bound, evaluated for
// a concrete prepartition of x's support.  Multi-element subsets must be
// lattices; incommensurability is the caller's responsibility (use the
// certificates above).
inline PrepartitionRate prepartition_rate(const DiscreteRV& x, const Prepartition& prep) {
  validate_prepartition(prep, x.size());
  PrepartitionRate out;
  out.k = static_cast<int>(prep.subsets.size());

  std::vector<double> block_p;
  std::vector<double> singleton_p;
  double multi_product = 1.0;
  for (const auto& subset : prep.subsets) {
    double p = 0.0;
    for (const int i : subset) p += x.prob(i);
    block_p.push_back(p);
    out.q += p;
    if (subset.size() == 1) {
      ++out.s;
      singleton_p.push_back(p);
      continue;
    }
    std::vector<ExactReal> values;
    for (const int i : subset) values.push_back(x.value(i));
    const SpanResult span = maximal_span(values);
    if (span.kind != SpanKind::lattice) throw schema_error("invalid prepartition");
    double mean = 0.0;
    for (const int i : subset) mean += (x.prob(i) / p) * x.value(i).value();
    double var = 0.0;
    for (const int i : subset) {
      const double ddx = x.value(i).value() - mean;
      var += (x.prob(i) / p) * ddx * ddx;
    }
    multi_product *= p * var / (span.h * span.h);
  }

  out.all_singletons = out.s == out.k;
  if (out.all_singletons) {
    if (out.k < 2) throw schema_error("invalid prepartition");
    double prod = 1.0;
    for (const double p : block_p) prod *= p / out.q;
    out.lambda = std::pow(prod, 1.0 / (out.k - 1));
    return out;
  }

  double prod = multi_product;
  double singleton_sum = 0.0;
  for (const double p : singleton_p) {
    prod *= p;
    singleton_sum += p;
  }
  if (out.s > 0) prod *= 1.0 - singleton_sum / out.q;
  out.lambda = std::pow(prod, 1.0 / out.k);
  return out;
}

struct EntropyBound {
  double value_bits = 0.0;
  double lambda = 0.0;
  int k = 0;
  int s = 0;
  double q = 0.0;
  EntropyBoundBranch branch = EntropyBoundBranch::general;
  bool o1_omitted = true;  // the asymptotic correction term is not computed
};

// Lower bound on the entropy of the N-fold sum of x, for a prepartition of
// its support assumed incommensurable.  The vanishing o(1) correction of the
// asymptotic statement is omitted, as flagged in the result.
inline EntropyBound entropy_lower_bound(const DiscreteRV& x, long long n,
                                        const Prepartition& prep) {
  if (n < 1) throw schema_error("need at least one summand");
  const PrepartitionRate rate = prepartition_rate(x, prep);
  EntropyBound out;
  out.lambda = rate.lambda;
  out.k = rate.k;
  out.s = rate.s;
  out.q = rate.q;
  const double base = 2.0 * M_PI * std::exp(1.0) * static_cast<double>(n) * rate.lambda;
  if (rate.all_singletons) {
    out.branch = EntropyBoundBranch::all_singletons;
    out.value_bits = 0.5 * static_cast<double>(rate.k - 1) * std::log2(base);
  } else {
    out.branch = rate.k == 1 && std::abs(rate.q - 1.0) <= 1e-9 ? EntropyBoundBranch::lattice
                                                               : EntropyBoundBranch::general;
    out.value_bits = 0.5 * static_cast<double>(rate.k) * std::log2(base);
  }
  return out;
}

struct ScoredPrepartition {
  bool found = false;
  Prepartition prepartition;
  int rank = 0;  // k for a non-degenerate family, k-1 for all singletons
  double lambda = 0.0;
  bool all_singletons = false;
};

namespace detail {

inline std::vector<int> indices_by_weight(const DiscreteRV& x) {
  std::vector<int> order(x.size());
  for (int i = 0; i < x.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return x.prob(a) > x.prob(b); });
  return order;
}

}  // namespace detail

// Best certified prepartition of x's support, scored by (rank, lambda).
// Exhaustive over all families for small supports; for larger supports it
// combines rational-difference classes with greedily chosen pivots, which
// still certifies at least the rational-span baseline.
inline ScoredPrepartition best_certified_prepartition(const DiscreteRV& x,
                                                      const RankOptions& opts = {}) {
  const int d = x.size();
  ScoredPrepartition best;
  const auto consider = [&](const std::vector<std::vector<int>>& idx) {
    const auto blocks = gather_blocks(x.values(), idx);
    if (!std::all_of(blocks.begin(), blocks.end(),
                     [](const auto& b) { return lattice_or_singleton(b); }))
      return;
    if (!block_coordinate_certificate(blocks) && !independent_singletons_certificate(blocks))
      return;
    const int k = static_cast<int>(idx.size());
    const bool degenerate = std::all_of(idx.begin(), idx.end(),
                                        [](const auto& s) { return s.size() == 1; });
    const int rank = k - (degenerate ? 1 : 0);
    if (rank < 1) return;
    Prepartition prep{idx};
    const PrepartitionRate rate = prepartition_rate(x, prep);
    if (!best.found || rank > best.rank ||
        (rank == best.rank && rate.lambda > best.lambda * (1.0 + 1e-12))) {
      best.found = true;
      best.prepartition = std::move(prep);
      best.rank = rank;
      best.lambda = rate.lambda;
      best.all_singletons = degenerate;
    }
  };

  if (d <= opts.exhaustive_limit) {
    for_each_prepartition(d, consider);
    return best;
  }

  const auto order = detail::indices_by_weight(x);

  // Greedy pivots: heaviest atoms that stay rationally independent.
  {
    std::vector<ExactReal> chosen;
    std::vector<std::vector<int>> idx;
    for (const int i : order) {
      std::vector<ExactReal> trial = chosen;
      trial.push_back(x.value(i));
      if (rational_span_dim(trial) == static_cast<int>(trial.size())) {
        chosen = std::move(trial);
        idx.push_back({i});
      }
    }
    if (idx.size() >= 2) consider(idx);
  }

  const int dims = x.basis()->size();
  for (const auto& classes :
       {detail::rational_difference_classes(x.values()), detail::ray_classes(x.values())}) {
    // Whole-class partition, when a certificate sees it.
    if (classes.size() >= 2) consider(classes);

    // One lattice class plus disjoint-coordinate singletons from other classes.
    for (const auto& cls : classes) {
      if (cls.size() < 2) continue;
      std::vector<char> used(dims, 0);
      std::vector<char> in_class(d, 0);
      for (const int i : cls) {
        in_class[i] = 1;
        for (int c = 0; c < dims; ++c)
          if (x.value(i).coeff(c) != 0) used[c] = 1;
      }
      std::vector<std::vector<int>> idx{cls};
      for (const int i : order) {
        if (in_class[i] || x.value(i).is_zero()) continue;
        bool free = true;
        bool any = false;
        for (int c = 0; c < dims; ++c)
          if (x.value(i).coeff(c) != 0) {
            any = true;
            if (used[c]) free = false;
          }
        if (!any || !free) continue;
        for (int c = 0; c < dims; ++c)
          if (x.value(i).coeff(c) != 0) used[c] = 1;
        idx.push_back({i});
      }
      consider(idx);
    }
  }

  // All-rational support: the whole thing may be one lattice block.
  if (lattice_or_singleton(x.values()) && d >= 2) {
    std::vector<int> all(d);
    for (int i = 0; i < d; ++i) all[i] = i;
    consider({all});
  }

  return best;
}

// ---------------------------------------------------------------------------
// Reference entropies for the qubit ladder protocol.

struct QubitProductionEntropy {
  double exact_bits = 0.0;
  double floor_bits = 0.0;
};

namespace detail {

inline std::vector<double> binomial_pmf(int n, double p) {
  std::vector<double> out(n + 1, 0.0);
  if (p <= 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (p >= 1.0) {
    out[n] = 1.0;
    return out;
  }
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double lfn = std::lgamma(n + 1.0);
  for (int k = 0; k <= n; ++k)
    out[k] = std::exp(lfn - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * lp +
                      (n - k) * lq);
  return out;
}

}  // namespace detail

// Entropy of the battery-level displacement produced by 2m alternating
// applications of a rotation-by-theta qubit gate, mixed uniformly over the
// 2m+1 measured branch counts, together with its logarithmic floor.
inline QubitProductionEntropy qubit_production_entropy(double theta, int m) {
  if (m < 1) throw schema_error("need at least one round");
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  const int copies = 2 * m;
  std::vector<double> mix(2 * copies + 1, 0.0);
  const double w = 1.0 / (copies + 1);
  for (int k = 0; k <= copies; ++k) {
    const auto a = detail::binomial_pmf(k, c2);
    const auto b = detail::binomial_pmf(copies - k, s2);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= copies - k; ++j) mix[i + j - k + copies] += w * a[i] * b[j];
  }
  QubitProductionEntropy out;
  out.exact_bits = entropy_bits(mix);
  out.floor_bits = s2 > 0.0
                       ? std::log2(4.0 * m * s2) - (s2 == 1.0 ? 1.0 : 0.0)
                       : -std::numeric_limits<double>::infinity();
  return out;
}

// Entropy of an integer-bin discretized uniform mixture of normals
// N(mu_k, sigma^2), truncated at `truncation` standard deviations beyond the
// extreme means.  The tail mass outside the window is dropped, not
// renormalized.
inline double discretized_normal_mixture_entropy(const std::vector<double>& mu, double sigma,
                                                 double truncation = 10.0) {
  if (mu.empty()) throw schema_error("need at least one component");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw schema_error("need a positive width");
  if (!(truncation > 0.0)) throw schema_error("need a positive truncation");
  for (const double m : mu)
    if (!std::isfinite(m)) throw schema_error("non-finite mean");
  const double lo_mu = *std::min_element(mu.begin(), mu.end());
  const double hi_mu = *std::max_element(mu.begin(), mu.end());
  const long long lo = static_cast<long long>(std::floor(lo_mu - truncation * sigma));
  const long long hi = static_cast<long long>(std::ceil(hi_mu + truncation * sigma));
  if (hi - lo + 1 > kMaxSumSupportCells) throw cap_error("support explosion");
  const auto cdf = [&](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  std::vector<double> p;
  p.reserve(hi - lo + 1);
  const double w = 1.0 / static_cast<double>(mu.size());
  for (long long n = lo; n <= hi; ++n) {
    double pn = 0.0;
    for (const double m : mu)
      pn += w * (cdf((static_cast<double>(n) + 0.5 - m) / sigma) -
                 cdf((static_cast<double>(n) - 0.5 - m) / sigma));
    p.push_back(pn);
  }
  return entropy_bits(p);
}

}  // namespace gatecoh
