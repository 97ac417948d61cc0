#include <gatecoh/exact.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "test_helpers.hpp"

using namespace gatecoh;

namespace {

ExactReal rat(const std::shared_ptr<const ExactBasis>& basis, const std::string& text) {
  return ExactReal::from_rational(basis, parse_rational(text));
}

ExactReal combo(const std::shared_ptr<const ExactBasis>& basis,
                const std::vector<std::string>& parts) {
  std::vector<Rational> coeffs;
  coeffs.reserve(parts.size());
  for (const auto& p : parts) coeffs.push_back(parse_rational(p));
  return ExactReal(basis, std::move(coeffs));
}

}  // namespace

TEST_CASE("rational literals parse exactly", "[exact]") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-7/2") == Rational(-7, 2));
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(parse_rational("0") == Rational(0));
  CHECK_THROWS_AS(parse_rational("1/0"), schema_error);
  CHECK_THROWS_AS(parse_rational("abc"), schema_error);
  CHECK_THROWS_AS(parse_rational("1.5"), schema_error);
  CHECK_THROWS_AS(parse_rational(""), schema_error);
}

TEST_CASE("doubles convert to exact rationals and back", "[exact]") {
  for (const double x : {0.5, -0.5, 0.1, 1.0 / 3.0, 3.25, -1234.0625, 1e-12, 6.02e23}) {
    const Rational r = rational_from_double(x);
    CHECK(to_double(r) == x);
  }
  CHECK(rational_from_double(0.5) == Rational(1, 2));
  CHECK(rational_from_double(0.0) == Rational(0));
  CHECK(rational_from_double(-3.0) == Rational(-3));
  CHECK_THROWS_AS(rational_from_double(std::numeric_limits<double>::infinity()), schema_error);
  CHECK_THROWS_AS(rational_from_double(std::nan("")), schema_error);
}

TEST_CASE("basis labels resolve to values", "[exact]") {
  const auto b = ExactBasis::make({"1", "sqrt2", "pi", "e"});
  REQUIRE(b->size() == 4);
  CHECK(b->values[0] == 1.0);
  CHECK_THAT(b->values[1], Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK_THAT(b->values[2], Catch::Matchers::WithinAbs(M_PI, 1e-15));
  CHECK_THAT(b->values[3], Catch::Matchers::WithinAbs(std::exp(1.0), 1e-15));

  const auto b12 = ExactBasis::make({"1", "sqrt12"});
  CHECK_THAT(b12->values[1], Catch::Matchers::WithinAbs(std::sqrt(12.0), 1e-15));

  const auto explicit_basis = ExactBasis::make({"1", "alpha"}, {1.0, 0.007297});
  CHECK(explicit_basis->values[1] == 0.007297);

  CHECK_THROWS_AS(ExactBasis::make({"1", "alpha"}), schema_error);
  CHECK_THROWS_AS(ExactBasis::make({"sqrt2", "1"}), schema_error);
  CHECK_THROWS_AS(ExactBasis::make({}), schema_error);
  CHECK_THROWS_AS(ExactBasis::make({"1", "sqrt2", "sqrt2"}), schema_error);
  CHECK_THROWS_AS(ExactBasis::make({"1", "x"}, {2.0, 3.0}), schema_error);
  CHECK_THROWS_AS(ExactBasis::make({"1", "x"}, {1.0, 0.0}), schema_error);
  CHECK_THROWS_AS(ExactBasis::make({"1", "x"}, {1.0}), schema_error);
}

TEST_CASE("exact arithmetic is coefficientwise", "[exact]") {
  const auto b = ExactBasis::make({"1", "sqrt2"});
  const ExactReal a = combo(b, {"1", "2"});    // 1 + 2 sqrt2
  const ExactReal c = combo(b, {"3", "-1"});   // 3 - sqrt2
  const ExactReal diff = a - c;                // -2 + 3 sqrt2
  CHECK(diff.coeff(0) == Rational(-2));
  CHECK(diff.coeff(1) == Rational(3));
  CHECK_THAT(diff.value(), Catch::Matchers::WithinAbs(-2.0 + 3.0 * std::sqrt(2.0), 1e-12));
  CHECK((a + c).coeff(0) == Rational(4));
  CHECK((-a).coeff(1) == Rational(-2));
  CHECK(a.scaled(Rational(3, 2)).coeff(1) == Rational(3));
  CHECK(a == combo(b, {"1", "2"}));
  CHECK(a != c);
  CHECK(combo(b, {"0", "0"}).is_zero());
  CHECK(combo(b, {"5", "0"}).is_rational());
  CHECK_FALSE(a.is_rational());

  const auto other = ExactBasis::make({"1", "sqrt3"});
  CHECK_THROWS_AS(a + combo(other, {"1", "1"}), schema_error);

  // Same content through a different shared_ptr is accepted.
  const auto clone = ExactBasis::make({"1", "sqrt2"});
  CHECK(a == combo(clone, {"1", "2"}));
}

TEST_CASE("coefficient order is a strict total order", "[exact]") {
  const auto b = ExactBasis::make({"1", "sqrt2"});
  const ExactReal x = combo(b, {"1", "0"});
  const ExactReal y = combo(b, {"1", "1"});
  const ExactReal z = combo(b, {"2", "-5"});
  CHECK(x < y);
  CHECK_FALSE(y < x);
  CHECK(y < z);
  CHECK(x < z);
  CHECK_FALSE(x < x);
}

TEST_CASE("maximal span of rational lattices", "[exact]") {
  const auto b = ExactBasis::rational();
  const auto mk = [&](std::initializer_list<const char*> vals) {
    std::vector<ExactReal> out;
    for (const char* v : vals) out.push_back(rat(b, v));
    return out;
  };

  SECTION("even integers") {
    const SpanResult r = maximal_span(mk({"0", "2", "4"}));
    REQUIRE(r.kind == SpanKind::lattice);
    CHECK(r.h == 2.0);
  }
  SECTION("halves of odd steps") {
    const SpanResult r = maximal_span(mk({"0", "3/2", "9/2"}));
    REQUIRE(r.kind == SpanKind::lattice);
    CHECK(r.h == 1.5);
  }
  SECTION("coprime thirds") {
    const SpanResult r = maximal_span(mk({"0", "2/3", "1"}));
    REQUIRE(r.kind == SpanKind::lattice);
    CHECK_THAT(r.h, Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-15));
  }
  SECTION("duplicates collapse") {
    const SpanResult r = maximal_span(mk({"2", "2", "4"}));
    REQUIRE(r.kind == SpanKind::lattice);
    CHECK(r.h == 2.0);
  }
  SECTION("single point is degenerate") {
    CHECK(maximal_span(mk({"5"})).kind == SpanKind::degenerate);
  }
  SECTION("empty set rejected") {
    CHECK_THROWS_AS(maximal_span(std::vector<ExactReal>{}), schema_error);
  }
}

TEST_CASE("maximal span with irrational steps", "[exact]") {
  const auto b = ExactBasis::make({"1", "sqrt2"});

  SECTION("pure sqrt2 multiples") {
    const SpanResult r =
        maximal_span({combo(b, {"0", "0"}), combo(b, {"0", "1"}), combo(b, {"0", "3"})});
    REQUIRE(r.kind == SpanKind::lattice);
    CHECK_THAT(r.h, Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-15));
  }
  SECTION("shifted rational lattice") {
    // {1+sqrt2, 3+sqrt2, 7+sqrt2}: differences 2 and 6.
    const SpanResult r =
        maximal_span({combo(b, {"1", "1"}), combo(b, {"3", "1"}), combo(b, {"7", "1"})});
    REQUIRE(r.kind == SpanKind::lattice);
    CHECK(r.h == 2.0);
  }
  SECTION("mixed directions are not a lattice") {
    const SpanResult r =
        maximal_span({combo(b, {"0", "0"}), combo(b, {"1", "0"}), combo(b, {"0", "1"})});
    CHECK(r.kind == SpanKind::not_lattice);
  }
  SECTION("two points always form a lattice") {
    const SpanResult r = maximal_span({combo(b, {"1", "0"}), combo(b, {"0", "1"})});
    REQUIRE(r.kind == SpanKind::lattice);
    CHECK_THAT(r.h, Catch::Matchers::WithinAbs(std::sqrt(2.0) - 1.0, 1e-15));
  }
}

TEST_CASE("exact step agrees with the floating span", "[exact]") {
  const auto b = ExactBasis::make({"1", "pi"});
  const SpanResult r = maximal_span(
      {combo(b, {"0", "1"}), combo(b, {"0", "3"}), combo(b, {"0", "7"})});
  REQUIRE(r.kind == SpanKind::lattice);
  REQUIRE(r.step.has_value());
  CHECK_THAT(std::abs(r.step->value()), Catch::Matchers::WithinAbs(r.h, 1e-15));
  CHECK_THAT(r.h, Catch::Matchers::WithinAbs(2.0 * M_PI, 1e-12));
}

TEST_CASE("rational span dimension by exact elimination", "[exact]") {
  const auto b1 = ExactBasis::rational();
  CHECK(rational_span_dim({rat(b1, "1"), rat(b1, "2"), rat(b1, "3")}) == 1);
  CHECK(rational_span_dim({rat(b1, "0")}) == 0);

  const auto b2 = ExactBasis::make({"1", "sqrt2"});
  CHECK(rational_span_dim({combo(b2, {"0", "0"}), combo(b2, {"1", "0"}), combo(b2, {"0", "1"})}) ==
        2);

  const auto b3 = ExactBasis::make({"1", "sqrt2", "sqrt3"});
  CHECK(rational_span_dim({combo(b3, {"1", "0", "0"}), combo(b3, {"0", "1", "0"}),
                           combo(b3, {"0", "0", "1"}), combo(b3, {"1", "1", "0"})}) == 3);

  // Dependent combinations do not inflate the dimension.
  CHECK(rational_span_dim({combo(b3, {"1", "1", "0"}), combo(b3, {"2", "2", "0"}),
                           combo(b3, {"1", "-1", "0"})}) == 2);

  // Never exceeds the basis size, whatever the set size.
  std::vector<ExactReal> many;
  for (int i = 0; i < 5; ++i) many.push_back(combo(b2, {std::to_string(i), "1"}));
  CHECK(rational_span_dim(many) <= 2);

  CHECK_THROWS_AS(rational_span_dim(std::vector<ExactReal>{}), schema_error);
}

TEST_CASE("lattice sets have rational span dimension at most two", "[exact]") {
  Rng rng(411);
  const auto b = ExactBasis::make({"1", "pi"});
  for (int trial = 0; trial < 20; ++trial) {
    // a + h * n with a, h rational combinations of {1, pi}.
    const ExactReal a = combo(b, {std::to_string(static_cast<int>(rng.uniform_index(7)) - 3),
                                  std::to_string(static_cast<int>(rng.uniform_index(5)) - 2)});
    const ExactReal h = combo(b, {"1", "2"});
    std::vector<ExactReal> chi;
    for (int n = 0; n < 4; ++n)
      chi.push_back(a + h.scaled(Rational(1 + 2 * static_cast<int>(rng.uniform_index(9)))));
    const SpanResult span = maximal_span(chi);
    if (span.kind == SpanKind::lattice || span.kind == SpanKind::degenerate)
      CHECK(rational_span_dim(chi) <= 2);
  }
}
