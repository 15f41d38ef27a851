#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <map>

#include "qca/fpoly.hpp"
#include "test_util.hpp"

using namespace qca;
using testutil::poly1;
using testutil::u;

TEST_CASE("addition is char-2 symmetric difference", "[fpoly]") {
  CHECK(poly1("u + 1") + poly1("u + u^-1") == poly1("1 + u^-1"));
  CHECK(poly1("u + 1 + u^-1") + LaurentPoly::zero(1) == poly1("u + 1 + u^-1"));
  CHECK(poly1("u + 1 + u^-1") + poly1("u + 1 + u^-1") == LaurentPoly::zero(1));
}

TEST_CASE("addition rejects mixed variable counts", "[fpoly]") {
  CHECK_THROWS_AS(LaurentPoly::one(1) + LaurentPoly::one(2),
                  std::invalid_argument);
}

TEST_CASE("multiplication is convolution over F2", "[fpoly]") {
  CHECK(poly1("u + u^-1") * poly1("u + u^-1") == poly1("u^2 + u^-2"));
  CHECK(LaurentPoly::one(1) * LaurentPoly::one(1) == LaurentPoly::one(1));
  CHECK(poly1("u + 1") * LaurentPoly::zero(1) == LaurentPoly::zero(1));

  // (u + u^-1)^(2^m) = u^(2^m) + u^(-2^m)
  LaurentPoly p = poly1("u + u^-1");
  for (int m = 1; m <= 8; ++m) {
    p = p * p;
    Coord e = Coord{1} << m;
    CHECK(p == u(e) + u(-e));
  }
}

TEST_CASE("sparse and bitset multiplication agree", "[fpoly]") {
  std::mt19937 rng(7);
  for (int it = 0; it < 200; ++it) {
    LaurentPoly a = testutil::random_poly(rng, 1, 8, 40);
    LaurentPoly b = testutil::random_poly(rng, 1, 8, 40);
    LaurentPoly via_bitset = a * b;  // small spans take the bitset path
    // Reference convolution: count pair sums, keep odd parities.
    std::map<Coord, int> counts;
    for (const auto& ea : a.terms())
      for (const auto& eb : b.terms()) counts[ea[0] + eb[0]]++;
    std::vector<Exponent> odd;
    for (auto& [e, c] : counts)
      if (c % 2) odd.push_back(Exponent({e}));
    CHECK(via_bitset == LaurentPoly::from_terms(1, odd));
  }
}

TEST_CASE("multivariate multiplication", "[fpoly]") {
  LaurentPoly a = parse_poly("u1*u2^-1 + 1", 2);
  LaurentPoly b = parse_poly("u1 + u2", 2);
  CHECK(a * b == parse_poly("u1^2*u2^-1 + u1 + u1 + u2", 2));
  CHECK(a * b == parse_poly("u1^2*u2^-1 + u2", 2));
}

TEST_CASE("involute negates exponents and fixes palindromes", "[fpoly]") {
  CHECK(poly1("u + 1").involute() == poly1("u^-1 + 1"));
  CHECK(poly1("u + u^-1").involute() == poly1("u + u^-1"));
  CHECK(LaurentPoly::zero(1).involute() == LaurentPoly::zero(1));
  CHECK(parse_poly("u1^2*u2^-1", 2).involute() == parse_poly("u1^-2*u2", 2));
}

TEST_CASE("involute is a ring automorphism", "[fpoly]") {
  std::mt19937 rng(11);
  for (int it = 0; it < 100; ++it) {
    LaurentPoly p = testutil::random_poly(rng, 1, 6, 10);
    LaurentPoly q = testutil::random_poly(rng, 1, 6, 10);
    CHECK((p * q).involute() == p.involute() * q.involute());
    CHECK((p + q).involute() == p.involute() + q.involute());
    CHECK(p.involute().involute() == p);
  }
}

TEST_CASE("weight", "[fpoly]") {
  CHECK(poly1("u + 1 + u^-1").weight() == 3);
  CHECK(LaurentPoly::zero(1).weight() == 0);
  CHECK(poly1("u^2 + u^-2").weight() == 2);
}

TEST_CASE("freshman's dream: squaring preserves weight", "[fpoly]") {
  std::mt19937 rng(13);
  for (int it = 0; it < 100; ++it) {
    LaurentPoly p = testutil::random_poly(rng, 1, 8, 20);
    CHECK((p * p).weight() == p.weight());
    CHECK(p + p == LaurentPoly::zero(1));
  }
}

TEST_CASE("weight is submultiplicative", "[fpoly]") {
  std::mt19937 rng(17);
  for (int it = 0; it < 100; ++it) {
    LaurentPoly p = testutil::random_poly(rng, 1, 6, 12);
    LaurentPoly q = testutil::random_poly(rng, 1, 6, 12);
    CHECK((p * q).weight() <= p.weight() * q.weight());
  }
}

TEST_CASE("deg_extremes", "[fpoly]") {
  auto [lo, hi] = poly1("u + 1 + u^-1").deg_extremes();
  CHECK(lo == Exponent({-1}));
  CHECK(hi == Exponent({1}));
  auto [lo3, hi3] = poly1("u^3").deg_extremes();
  CHECK(lo3 == Exponent({3}));
  CHECK(hi3 == Exponent({3}));
  auto [lo2, hi2] = poly1("u^2 + u^-2").deg_extremes();
  CHECK(lo2 == Exponent({-2}));
  CHECK(hi2 == Exponent({2}));
  CHECK_THROWS_AS(LaurentPoly::zero(1).deg_extremes(), std::domain_error);
}

TEST_CASE("parser accepts the documented grammar", "[fpoly]") {
  CHECK(poly1("u + 1 + u^-1") ==
        LaurentPoly::from_terms(1, {Exponent({1}), Exponent({0}), Exponent({-1})}));
  CHECK(poly1("u + u") == LaurentPoly::zero(1));
  CHECK(parse_poly("u1^2*u2^-1 + 1", 2) ==
        LaurentPoly::from_terms(2, {Exponent({2, -1}), Exponent({0, 0})}));
  CHECK(poly1("0") == LaurentPoly::zero(1));
  CHECK(poly1("0 + u") == u(1));
  CHECK(poly1("u^+2") == u(2));
  CHECK(poly1("u*u") == u(2));
  CHECK(poly1("u u") == u(2));   // '*' between factors is optional
  CHECK(poly1("u^0") == LaurentPoly::one(1));
  CHECK(parse_poly(" u1 * u1 ", 2) == parse_poly("u1^2", 2));
}

TEST_CASE("parser reports positions for bad input", "[fpoly]") {
  CHECK_THROWS_AS(parse_poly("", 1), parse_error);
  CHECK_THROWS_AS(parse_poly("u +", 1), parse_error);
  CHECK_THROWS_AS(parse_poly("v", 1), parse_error);
  CHECK_THROWS_AS(parse_poly("u^", 1), parse_error);
  CHECK_THROWS_AS(parse_poly("u3", 2), parse_error);   // index out of range
  CHECK_THROWS_AS(parse_poly("u1", 1), parse_error);   // indexed var for d=1
  CHECK_THROWS_AS(parse_poly("u2", 1), parse_error);
  CHECK_THROWS_AS(parse_poly("1*u", 1), parse_error);  // '1' is a full term
  CHECK_THROWS_AS(parse_poly("u^99999999999999999999", 1), parse_error);

  try {
    parse_poly("u + @", 1);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("format emits terms in lexicographic exponent order", "[fpoly]") {
  CHECK(format_poly(poly1("u + 1 + u^-1")) == "u^-1 + 1 + u");
  CHECK(format_poly(LaurentPoly::zero(1)) == "0");
  CHECK(format_poly(LaurentPoly::one(2)) == "1");
  CHECK(format_poly(parse_poly("u1^2*u2^-1 + 1", 2)) == "1 + u1^2*u2^-1");
}

TEST_CASE("parse/format round-trip", "[fpoly]") {
  std::mt19937 rng(19);
  for (int it = 0; it < 200; ++it) {
    int dim = 1 + (it % 3);
    LaurentPoly p = testutil::random_poly(rng, dim, 6, 9);
    CHECK(parse_poly(format_poly(p), dim) == p);
  }
}

TEST_CASE("checked exponent arithmetic rejects overflow", "[fpoly]") {
  LaurentPoly big = u(std::numeric_limits<Coord>::max());
  CHECK_THROWS_AS(big * big, std::overflow_error);
  CHECK_THROWS_AS(u(std::numeric_limits<Coord>::min()).involute(),
                  std::overflow_error);
}
