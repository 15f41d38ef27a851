#include <catch2/catch_amalgamated.hpp>

#include "qca/symplectic.hpp"
#include "test_util.hpp"

using namespace qca;
using testutil::palindromic_family;
using testutil::poly1;
using testutil::u;

namespace {

ModuleVector vec2(const LaurentPoly& a, const LaurentPoly& b) {
  return ModuleVector({a, b});
}

}  // namespace

TEST_CASE("mat_apply", "[symplectic]") {
  PolyMatrix l = palindromic_family(poly1("u + 1 + u^-1"));
  CHECK(mat_apply(l, vec2(LaurentPoly::one(1), LaurentPoly::zero(1))) ==
        vec2(LaurentPoly::zero(1), LaurentPoly::one(1)));
  CHECK(mat_apply(l, vec2(LaurentPoly::zero(1), LaurentPoly::one(1))) ==
        vec2(LaurentPoly::one(1), poly1("u + 1 + u^-1")));
  PolyMatrix id = PolyMatrix::identity(2, 1);
  ModuleVector q = vec2(poly1("u + u^-1"), poly1("u^3"));
  CHECK(mat_apply(id, q) == q);
  CHECK_THROWS_AS(mat_apply(l, ModuleVector::zero(4, 1)),
                  std::invalid_argument);
}

TEST_CASE("mat_mul and mat_pow", "[symplectic]") {
  PolyMatrix f = testutil::matrix_f();
  PolyMatrix f2 = mat_mul(f, f);
  CHECK(f2.at(0, 0) == LaurentPoly::one(1));
  CHECK(f2.at(0, 1) == u(1));
  CHECK(f2.at(1, 0) == u(1));
  CHECK(f2.at(1, 1) == poly1("1 + u^2"));
  CHECK(mat_pow(f, 2) == f2);
  CHECK(mat_pow(f, 1) == f);
  CHECK(mat_pow(f, 0) == PolyMatrix::identity(2, 1));

  // closed form for F^(2^r): top-left = sum_{j=1}^{r} u^(2^r - 2^j)
  for (int r = 1; r <= 6; ++r) {
    Coord p = Coord{1} << r;
    LaurentPoly tl = LaurentPoly::zero(1);
    for (int j = 1; j <= r; ++j) tl = tl + u(p - (Coord{1} << j));
    PolyMatrix fp = mat_pow(f, p);
    CHECK(fp.at(0, 0) == tl);
    CHECK(fp.at(0, 1) == u(p - 1));
    CHECK(fp.at(1, 0) == u(p - 1));
    CHECK(fp.at(1, 1) == u(p) + tl);
  }
}

TEST_CASE("mat_pow columns equal iterated mat_apply", "[symplectic]") {
  std::mt19937 rng(23);
  PolyMatrix l = palindromic_family(testutil::random_palindromic(rng, 3, 2));
  PolyMatrix ln = mat_pow(l, 7);
  for (int c = 0; c < 2; ++c) {
    ModuleVector q = ModuleVector::unit(2, 1, c);
    for (int n = 0; n < 7; ++n) q = mat_apply(l, q);
    CHECK(q[0] == ln.at(0, c));
    CHECK(q[1] == ln.at(1, c));
  }
}

TEST_CASE("determinant", "[symplectic]") {
  CHECK(determinant(palindromic_family(poly1("u + u^-1"))) ==
        LaurentPoly::one(1));
  CHECK(determinant(PolyMatrix::identity(3, 1)) == LaurentPoly::one(1));

  PolyMatrix l = palindromic_family(LaurentPoly::one(1));
  PolyMatrix l3 = mat_pow(l, 3);
  CHECK(determinant(mat_add(l3, PolyMatrix::identity(2, 1))) ==
        LaurentPoly::zero(1));
}

TEST_CASE("determinant is multiplicative", "[symplectic]") {
  std::mt19937 rng(29);
  for (int it = 0; it < 40; ++it) {
    int n = 2 + (it % 2);
    PolyMatrix a(n, 1), b(n, 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        a.at(i, j) = testutil::random_poly(rng, 1, 2, 2);
        b.at(i, j) = testutil::random_poly(rng, 1, 2, 2);
      }
    CHECK(determinant(mat_mul(a, b)) == determinant(a) * determinant(b));
  }
}

TEST_CASE("omega form", "[symplectic]") {
  ModuleVector x = ModuleVector::unit(2, 1, 0);
  ModuleVector z = ModuleVector::unit(2, 1, 1);
  CHECK(omega_form(x, z) == LaurentPoly::one(1));
  CHECK(omega_form(x, x) == LaurentPoly::zero(1));
  CHECK(omega_form(vec2(u(1), LaurentPoly::zero(1)), z) == u(-1));
  CHECK_THROWS_AS(omega_form(ModuleVector::zero(3, 1), ModuleVector::zero(3, 1)),
                  std::invalid_argument);

  // anti-linearity in the first argument
  std::mt19937 rng(31);
  for (int it = 0; it < 30; ++it) {
    LaurentPoly r = testutil::random_poly(rng, 1, 3, 3);
    ModuleVector q = testutil::random_vector(rng, 2, 1, 3, 3);
    ModuleVector qp = testutil::random_vector(rng, 2, 1, 3, 3);
    ModuleVector rq = ModuleVector({r * q[0], r * q[1]});
    CHECK(omega_form(rq, qp) == r.involute() * omega_form(q, qp));
    CHECK(omega_form(q, ModuleVector({r * qp[0], r * qp[1]})) ==
          r * omega_form(q, qp));
  }
}

TEST_CASE("pseudo-unitarity", "[symplectic]") {
  CHECK(is_pseudo_unitary(palindromic_family(poly1("u + 1 + u^-1"))));
  CHECK_FALSE(is_pseudo_unitary(testutil::matrix_f()));
  CHECK(is_pseudo_unitary(PolyMatrix::identity(2, 1)));
  CHECK(is_pseudo_unitary(PolyMatrix::identity(4, 1)));
}

TEST_CASE("pseudo-unitary family is closed and preserves omega", "[symplectic]") {
  std::mt19937 rng(37);
  std::vector<PolyMatrix> pool;
  for (int i = 0; i < 6; ++i)
    pool.push_back(palindromic_family(testutil::random_palindromic(rng, 3, 2)));

  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int it = 0; it < 50; ++it) {
    const PolyMatrix& a = pool[pick(rng)];
    const PolyMatrix& b = pool[pick(rng)];
    PolyMatrix prod = mat_mul(a, b);
    CHECK(is_pseudo_unitary(prod));
    CHECK(is_pseudo_unitary(mat_pow(a, 3)));
    CHECK(is_pseudo_unitary(mat_inverse_unit(a)));
    CHECK(determinant(prod).is_monomial());

    ModuleVector q = testutil::random_vector(rng, 2, 1, 3, 3);
    ModuleVector qp = testutil::random_vector(rng, 2, 1, 3, 3);
    CHECK(omega_form(mat_apply(prod, q), mat_apply(prod, qp)) ==
          omega_form(q, qp));
  }
}

TEST_CASE("mat_inverse_unit", "[symplectic]") {
  PolyMatrix f = testutil::matrix_f();
  PolyMatrix finv = mat_inverse_unit(f);
  CHECK(finv.at(0, 0) == u(1));
  CHECK(finv.at(0, 1) == LaurentPoly::one(1));
  CHECK(finv.at(1, 0) == LaurentPoly::one(1));
  CHECK(finv.at(1, 1) == LaurentPoly::zero(1));
  CHECK(mat_mul(f, finv) == PolyMatrix::identity(2, 1));

  CHECK(mat_inverse_unit(PolyMatrix::identity(3, 1)) ==
        PolyMatrix::identity(3, 1));

  PolyMatrix shift(2, 1);
  shift.at(0, 0) = u(1);
  shift.at(1, 1) = u(-1);
  PolyMatrix sinv = mat_inverse_unit(shift);
  CHECK(sinv.at(0, 0) == u(-1));
  CHECK(sinv.at(1, 1) == u(1));

  PolyMatrix singular(2, 1);
  singular.at(0, 0) = poly1("u + 1");
  singular.at(1, 1) = poly1("u + 1");
  singular.at(0, 1) = LaurentPoly::zero(1);
  CHECK_THROWS_AS(mat_inverse_unit(singular), std::domain_error);
}

TEST_CASE("doubling trick", "[symplectic]") {
  PolyMatrix df = doubled(testutil::matrix_f());
  CHECK(df.size() == 4);
  CHECK(is_pseudo_unitary(df));
  CHECK(df.at(2, 2) == u(-1));
  CHECK(df.at(2, 3) == LaurentPoly::one(1));
  CHECK(df.at(3, 2) == LaurentPoly::one(1));
  CHECK(df.at(3, 3) == LaurentPoly::zero(1));

  CHECK(is_pseudo_unitary(doubled(testutil::matrix_g())));
  CHECK(doubled(PolyMatrix::identity(2, 1)) == PolyMatrix::identity(4, 1));

  PolyMatrix su(1, 1);
  su.at(0, 0) = u(1);
  PolyMatrix dsu = doubled(su);
  CHECK(dsu.at(0, 0) == u(1));
  CHECK(dsu.at(1, 1) == u(1));

  PolyMatrix singular(1, 1);
  singular.at(0, 0) = poly1("u + 1");
  CHECK_THROWS_AS(doubled(singular), std::domain_error);
}
