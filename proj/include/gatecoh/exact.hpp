#pragma once

// Exact real numbers represented as rational combinations of a declared,
// rationally independent basis (e.g. {1, sqrt2, pi}).  All arithmetic on the
// coefficients is exact, which is what makes lattice-span extraction and
// rational-dimension counting reliable: equality of two represented values is
// a decidable coefficient comparison instead of a floating-point guess.

#include <gatecoh/common.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gatecoh {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Parses "p", "-p", or "p/q" with integer p, q and q != 0.
inline Rational parse_rational(const std::string& text) {
  const auto bad = [&] { return schema_error("rational literal '" + text + "'"); };
  std::string num = text;
  std::string den = "1";
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  if (num.empty() || den.empty()) throw bad();
  try {
    const BigInt p(num);
    const BigInt q(den);
    if (q == 0) throw bad();
    return Rational(p, q);
  } catch (const std::runtime_error&) {
    throw bad();
  }
}

// Exact rational value of a finite double (every finite double is p / 2^k).
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw schema_error("non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  Rational r(BigInt(scaled), BigInt(1) << 53);
  const int shift = exp;
  if (shift > 0) r *= Rational(BigInt(1) << shift, 1);
  if (shift < 0) r /= Rational(BigInt(1) << (-shift), 1);
  return r;
}

// Numeric value of a self-describing basis label, if it has one.
inline std::optional<double> basis_label_value(const std::string& label) {
  if (label == "1") return 1.0;
  if (label == "pi") return 4.0 * std::atan(1.0);
  if (label == "e") return std::exp(1.0);
  if (label.size() > 4 && label.compare(0, 4, "sqrt") == 0) {
    const std::string digits = label.substr(4);
    if (std::all_of(digits.begin(), digits.end(),
                    [](unsigned char c) { return std::isdigit(c) != 0; })) {
      const double n = std::stod(digits);
      if (n > 0) return std::sqrt(n);
    }
  }
  return std::nullopt;
}

// A list of labelled real numbers assumed linearly independent over the
// rationals; the first entry is always the unit "1".  Values may be supplied
// explicitly or derived from labels of the form 1 / sqrtN / pi / e.
struct ExactBasis {
  std::vector<std::string> labels;
  std::vector<double> values;

  int size() const { return static_cast<int>(labels.size()); }

  bool operator==(const ExactBasis& other) const {
    return labels == other.labels && values == other.values;
  }

  static std::shared_ptr<const ExactBasis> make(std::vector<std::string> labels,
                                                std::vector<double> values = {}) {
    if (labels.empty()) throw schema_error("basis must be non-empty");
    if (labels.front() != "1") throw schema_error("basis must start with the unit label '1'");
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (std::size_t j = i + 1; j < labels.size(); ++j)
        if (labels[i] == labels[j]) throw schema_error("duplicate basis label '" + labels[i] + "'");
    if (values.empty()) {
      values.reserve(labels.size());
      for (const auto& label : labels) {
        const auto v = basis_label_value(label);
        if (!v) throw schema_error("basis label '" + label + "' needs an explicit value");
        values.push_back(*v);
      }
    }
    if (values.size() != labels.size()) throw schema_error("basis label/value count mismatch");
    if (values.front() != 1.0) throw schema_error("unit basis element must have value 1");
    for (const double v : values)
      if (!std::isfinite(v) || v == 0.0) throw schema_error("basis values must be finite and non-zero");
    return std::make_shared<const ExactBasis>(ExactBasis{std::move(labels), std::move(values)});
  }

  // Shared basis for plain rational numbers.
  static const std::shared_ptr<const ExactBasis>& rational() {
    static const std::shared_ptr<const ExactBasis> instance = make({"1"});
    return instance;
  }
};

// One exact real: a rational coefficient per basis element.
class ExactReal {
 public:
  ExactReal() : basis_(ExactBasis::rational()), coeffs_(1, Rational(0)) {}

  ExactReal(std::shared_ptr<const ExactBasis> basis, std::vector<Rational> coeffs)
      : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (!basis_) throw schema_error("null basis");
    if (static_cast<int>(coeffs_.size()) != basis_->size())
      throw schema_error("coefficient count does not match basis size");
  }

  static ExactReal from_rational(std::shared_ptr<const ExactBasis> basis, Rational r) {
    std::vector<Rational> c(basis->size(), Rational(0));
    c[0] = std::move(r);
    return ExactReal(std::move(basis), std::move(c));
  }

  static ExactReal from_double(std::shared_ptr<const ExactBasis> basis, double x) {
    return from_rational(std::move(basis), rational_from_double(x));
  }

  const std::shared_ptr<const ExactBasis>& basis() const { return basis_; }
  int dim() const { return static_cast<int>(coeffs_.size()); }
  const Rational& coeff(int i) const { return coeffs_.at(i); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  double value() const {
    double v = 0.0;
    for (int i = 0; i < dim(); ++i) v += to_double(coeffs_[i]) * basis_->values[i];
    return v;
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
  }

  bool is_rational() const {
    for (int i = 1; i < dim(); ++i)
      if (coeffs_[i] != 0) return false;
    return true;
  }

  ExactReal scaled(const Rational& s) const {
    std::vector<Rational> c(coeffs_);
    for (auto& ci : c) ci *= s;
    return ExactReal(basis_, std::move(c));
  }

  friend ExactReal operator+(const ExactReal& a, const ExactReal& b) {
    a.require_same_basis(b);
    std::vector<Rational> c(a.coeffs_);
    for (int i = 0; i < a.dim(); ++i) c[i] += b.coeffs_[i];
    return ExactReal(a.basis_, std::move(c));
  }

  friend ExactReal operator-(const ExactReal& a, const ExactReal& b) {
    a.require_same_basis(b);
    std::vector<Rational> c(a.coeffs_);
    for (int i = 0; i < a.dim(); ++i) c[i] -= b.coeffs_[i];
    return ExactReal(a.basis_, std::move(c));
  }

  ExactReal operator-() const { return scaled(Rational(-1)); }

  friend bool operator==(const ExactReal& a, const ExactReal& b) {
    a.require_same_basis(b);
    return a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const ExactReal& a, const ExactReal& b) { return !(a == b); }

  // Lexicographic coefficient order: a deterministic total order usable as a
  // map key (not the numeric order of the represented reals).
  friend bool operator<(const ExactReal& a, const ExactReal& b) {
    a.require_same_basis(b);
    for (int i = 0; i < a.dim(); ++i) {
      if (a.coeffs_[i] < b.coeffs_[i]) return true;
      if (b.coeffs_[i] < a.coeffs_[i]) return false;
    }
    return false;
  }

 private:
  void require_same_basis(const ExactReal& other) const {
    if (basis_ == other.basis_) return;
    if (*basis_ == *other.basis_) return;
    throw schema_error("operands use different bases");
  }

  std::shared_ptr<const ExactBasis> basis_;
  std::vector<Rational> coeffs_;
};

enum class SpanKind { lattice, not_lattice, degenerate };

// Result of the maximal-span extraction: for a lattice set, `h` is the
// largest real with chi contained in {h n + a : n integer}, and `step` is the
// same quantity held exactly (up to sign).
struct SpanResult {
  SpanKind kind = SpanKind::degenerate;
  double h = 0.0;
  std::optional<ExactReal> step;
};

inline Rational rational_gcd(const std::vector<Rational>& values) {
  BigInt den_lcm = 1;
  for (const auto& v : values) den_lcm = boost::multiprecision::lcm(den_lcm, denominator(v));
  BigInt num_gcd = 0;
  for (const auto& v : values) {
    BigInt scaled = numerator(v) * (den_lcm / denominator(v));
    num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::abs(scaled));
  }
  return Rational(num_gcd, den_lcm);
}

inline SpanResult maximal_span(const std::vector<ExactReal>& values) {
  if (values.empty()) throw schema_error("empty set has no span");
  std::vector<ExactReal> distinct;
  for (const auto& v : values)
    if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) distinct.push_back(v);
  if (distinct.size() == 1) return {SpanKind::degenerate, 0.0, std::nullopt};

  std::vector<ExactReal> diffs;
  diffs.reserve(distinct.size() - 1);
  for (std::size_t i = 1; i < distinct.size(); ++i) diffs.push_back(distinct[i] - distinct[0]);

  const ExactReal& ref = diffs.front();
  const int d = ref.dim();
  int pivot = 0;
  while (pivot < d && ref.coeff(pivot) == 0) ++pivot;

  std::vector<Rational> multipliers;
  multipliers.reserve(diffs.size());
  for (const auto& diff : diffs) {
    const Rational ratio = diff.coeff(pivot) / ref.coeff(pivot);
    for (int i = 0; i < d; ++i)
      if (diff.coeff(i) != ratio * ref.coeff(i)) return {SpanKind::not_lattice, 0.0, std::nullopt};
    multipliers.push_back(ratio);
  }

  const Rational g = rational_gcd(multipliers);
  const ExactReal step = ref.scaled(g);
  return {SpanKind::lattice, std::abs(step.value()), step};
}

// Dimension of the rational span of the given values, by exact Gaussian
// elimination on their coefficient rows.  Never exceeds the basis size.
inline int rational_span_dim(const std::vector<ExactReal>& values) {
  if (values.empty()) throw schema_error("empty set has no span");
  const int d = values.front().dim();
  std::vector<std::vector<Rational>> rows;
  for (const auto& v : values) {
    if (v.dim() != d) throw schema_error("operands use different bases");
    rows.push_back(v.coeffs());
  }
  int rank = 0;
  for (int col = 0; col < d && rank < static_cast<int>(rows.size()); ++col) {
    int sel = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[r][col] != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[rank], rows[sel]);
    for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][col] == 0) continue;
      const Rational f = rows[r][col] / rows[rank][col];
      for (int c = col; c < d; ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace gatecoh
