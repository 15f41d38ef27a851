#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qca/expectation.hpp"
#include "test_util.hpp"

using namespace qca;
using testutil::palindromic_family;
using testutil::poly1;
using testutil::u;

namespace {

std::vector<PauliLetter> word_of(std::initializer_list<int> ls) {
  std::vector<PauliLetter> w;
  for (int l : ls) w.push_back(static_cast<PauliLetter>(l));
  return w;
}

std::vector<PauliLetter> random_word(std::mt19937& rng, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len), letter(0, 3);
  std::vector<PauliLetter> w(static_cast<std::size_t>(len(rng)));
  for (auto& l : w) l = static_cast<PauliLetter>(letter(rng));
  return w;
}

}  // namespace

TEST_CASE("moments from Bloch parameters", "[expectation]") {
  OneSiteMoments mixed = moments_from_bloch({0.5, 12.0, 34.0});
  CHECK(mixed[PauliLetter::I] == 1.0);
  CHECK(mixed[PauliLetter::X] == 0.0);
  CHECK(mixed[PauliLetter::Y] == 0.0);
  CHECK(mixed[PauliLetter::Z] == 0.0);

  OneSiteMoments zpol = moments_from_bloch({0.0, 0.0, 0.0});
  CHECK(zpol[PauliLetter::Z] == Catch::Approx(1.0));
  CHECK(std::abs(zpol[PauliLetter::X]) < 1e-15);

  OneSiteMoments fig4 = moments_from_bloch({0.0, 30.0, 45.0});
  CHECK(fig4[PauliLetter::X] == Catch::Approx(0.35355339059));
  CHECK(fig4[PauliLetter::Y] == Catch::Approx(0.35355339059));
  CHECK(fig4[PauliLetter::Z] == Catch::Approx(0.86602540378));

  CHECK_THROWS_AS(moments_from_bloch({0.6, 0, 0}), std::domain_error);
  CHECK_THROWS_AS(moments_from_bloch({-0.1, 0, 0}), std::domain_error);
}

TEST_CASE("bloch density matches the moments", "[expectation]") {
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> pd(0, 0.5), ang(0, 360);
  for (int it = 0; it < 20; ++it) {
    ProductStateParams s{pd(rng), ang(rng), ang(rng)};
    Eigen::Matrix2cd rho = bloch_density(s);
    OneSiteMoments m = moments_from_bloch(s);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-14);
    for (int l = 1; l < 4; ++l) {
      Complex tr = (rho * letter_matrix(static_cast<PauliLetter>(l))).trace();
      CHECK(std::abs(tr - m.w[static_cast<std::size_t>(l)]) < 1e-13);
    }
    // eigenvalues p and 1-p
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
    CHECK(es.eigenvalues().minCoeff() == Catch::Approx(s.p).margin(1e-12));
  }
}

TEST_CASE("lambda of a state", "[expectation]") {
  CHECK(lambda_of_state(moments_from_bloch({0.5, 10, 20})) == 0.0);
  CHECK(lambda_of_state(moments_from_bloch({0.0, 0.0, 0.0})) == Catch::Approx(1.0));
  CHECK(lambda_of_state(moments_from_bloch({0.1, 30.0, 45.0})) ==
        Catch::Approx(0.8 * std::cos(30.0 * std::numbers::pi / 180)));
}

TEST_CASE("certificate arithmetic", "[expectation]") {
  CHECK(c_beta(1, 1, 1) == 512.0);
  CHECK(c_beta(2, 1, 1) == 512.0 * 512.0);
  CHECK(c_beta(1, 2, 1) == std::exp2(25.0));

  CHECK(thermalization_certificate(moments_from_bloch({0.5, 0, 0}), 1, 1, 1));
  CHECK(thermalization_certificate(moments_from_bloch({0.5, 0, 0}), 1, 7, 3));
  CHECK_FALSE(thermalization_certificate(moments_from_bloch({0.0, 30, 45}), 1, 1, 1));
  CHECK_FALSE(thermalization_certificate(moments_from_bloch({0.0, 0, 0}), 1, 1, 1));

  // boolean follows the inequality across the threshold
  for (int i = 1; i <= 10; ++i) {
    double lambda = static_cast<double>(i) / 10.0 / 512.0 * 2.0;  // spans 1/512
    OneSiteMoments m;
    m.w = {1, lambda, 0, 0};
    CHECK(thermalization_certificate(m, 1, 1, 1) == (lambda * 512.0 < 1.0));
  }
}

TEST_CASE("beta tensor for the identity coupling", "[expectation]") {
  BetaTensor beta = beta_coefficients({BetaSpec::Kind::xx, 0.0, 1});
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t l = 0; l < 4; ++l) {
          Complex want = (b == 0 && c == a && l == 0) ? Complex{1, 0} : Complex{0, 0};
          CHECK(std::abs(beta.at(a, b, c, l) - want) < 1e-12);
        }
}

TEST_CASE("beta tensor properties", "[expectation]") {
  BetaTensor beta = beta_coefficients({BetaSpec::Kind::xx, 0.7, 1});

  // X commutes with the XX couplings
  for (std::size_t b = 0; b < 4; ++b)
    for (std::size_t c = 0; c < 4; ++c)
      for (std::size_t l = 0; l < 4; ++l) {
        Complex want = (b == 0 && c == 1 && l == 0) ? Complex{1, 0} : Complex{0, 0};
        CHECK(std::abs(beta.at(1, b, c, l) - want) < 1e-12);
      }

  // unitarity: unit-norm rows
  for (std::size_t a = 0; a < 4; ++a) {
    double norm2 = 0;
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t l = 0; l < 4; ++l) norm2 += std::norm(beta.at(a, b, c, l));
    CHECK(norm2 == Catch::Approx(1.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(beta_coefficients({BetaSpec::Kind::xx, 0.7, 3}), cost_error);
}

TEST_CASE("automaton with identity coupling multiplies moments", "[expectation]") {
  OneSiteMoments m = moments_from_bloch({0.1, 30, 45});
  AutomatonData a = build_automaton(m, beta_coefficients({BetaSpec::Kind::xx, 0.0, 1}));

  CHECK(std::abs(evaluate(a, {}) - Complex{1, 0}) < 1e-15);

  std::mt19937 rng(67);
  for (int it = 0; it < 40; ++it) {
    std::vector<PauliLetter> w = random_word(rng, 6);
    Complex got = evaluate(a, w);
    double want = 1;
    for (PauliLetter l : w) want *= m.w[static_cast<std::size_t>(l)];
    CHECK(std::abs(got - want) < 1e-12);
  }
}

TEST_CASE("maximally mixed state kills every nontrivial word exactly", "[expectation]") {
  AutomatonData a = build_automaton(moments_from_bloch({0.5, 30, 45}),
                                    beta_coefficients({BetaSpec::Kind::xx, 0.7, 1}));
  CHECK(evaluate(a, word_of({1})) == Complex{0, 0});
  CHECK(evaluate(a, word_of({3, 3})) == Complex{0, 0});
  CHECK(evaluate(a, word_of({2, 0, 1, 3})) == Complex{0, 0});
  CHECK(std::abs(evaluate(a, {}) - Complex{1, 0}) < 1e-15);
}

TEST_CASE("dense oracle basics", "[expectation]") {
  ProductStateParams s{0.1, 30, 45};
  BetaSpec b{BetaSpec::Kind::xx, 0.0, 1};
  CHECK(std::abs(dense_oracle(word_of({0, 0}), s, b) - Complex{1, 0}) < 1e-12);

  OneSiteMoments m = moments_from_bloch(s);
  std::mt19937 rng(71);
  for (int it = 0; it < 20; ++it) {
    std::vector<PauliLetter> w = random_word(rng, 5);
    double want = 1;
    for (PauliLetter l : w) want *= m.w[static_cast<std::size_t>(l)];
    CHECK(std::abs(dense_oracle(w, s, b) - want) < 1e-12);
  }

  CHECK_THROWS_AS(dense_oracle(std::vector<PauliLetter>(20, PauliLetter::X), s, b),
                  cost_error);
}

TEST_CASE("automaton agrees with the dense oracle", "[expectation]") {
  std::mt19937 rng(73);
  std::uniform_real_distribution<double> pd(0, 0.5), ang(0, 360), gd(0, 2 * std::numbers::pi);
  for (int it = 0; it < 60; ++it) {
    ProductStateParams s{pd(rng), ang(rng), ang(rng)};
    BetaSpec b{BetaSpec::Kind::xx, gd(rng), 1};
    AutomatonData a = build_automaton(moments_from_bloch(s), beta_coefficients(b));
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<PauliLetter> w = random_word(rng, 6);
      Complex fast = evaluate(a, w);
      Complex slow = dense_oracle(w, s, b);
      CHECK(std::abs(fast - slow) < 1e-9);
    }
  }
}

TEST_CASE("range-2 supersites reproduce the range-1 values", "[expectation]") {
  ProductStateParams s{0.15, 25, 70};
  BetaSpec b1{BetaSpec::Kind::xx, 0.9, 1};
  BetaSpec b2{BetaSpec::Kind::xx, 0.9, 2};
  AutomatonData a1 = build_automaton(moments_from_bloch(s), beta_coefficients(b1));
  AutomatonData a2 = build_automaton(moments_from_bloch(s), beta_coefficients(b2));
  std::mt19937 rng(79);
  for (int it = 0; it < 15; ++it) {
    std::vector<PauliLetter> w = random_word(rng, 6);
    CHECK(std::abs(evaluate(a1, w) - evaluate(a2, w)) < 1e-10);
    CHECK(std::abs(evaluate(a2, w) - dense_oracle(w, s, b2)) < 1e-9);
  }
}

TEST_CASE("conjugating the automaton conjugates the value", "[expectation]") {
  // expectation of the adjoint word: conjugate transitions, start and
  // gamma; the modulus is unchanged
  ProductStateParams s{0.05, 55, 120};
  BetaSpec b{BetaSpec::Kind::xx, 0.6, 1};
  AutomatonData a = build_automaton(moments_from_bloch(s), beta_coefficients(b));
  AutomatonData conj = a;
  for (auto& m : conj.transitions) m = m.conjugate();
  conj.start = conj.start.conjugate();
  conj.gamma = conj.gamma.conjugate();
  std::mt19937 rng(89);
  for (int it = 0; it < 20; ++it) {
    std::vector<PauliLetter> w = random_word(rng, 5);
    Complex v = evaluate(a, w);
    Complex vc = evaluate(conj, w);
    CHECK(std::abs(vc - std::conj(v)) < 1e-12);
    CHECK(std::abs(std::abs(vc) - std::abs(v)) < 1e-12);
  }
}

TEST_CASE("word reversal preserves the modulus", "[expectation]") {
  // the XX coupling and the uniform state are reflection symmetric
  ProductStateParams s{0.2, 40, 10};
  BetaSpec b{BetaSpec::Kind::xx, 1.3, 1};
  AutomatonData a = build_automaton(moments_from_bloch(s), beta_coefficients(b));
  std::mt19937 rng(83);
  for (int it = 0; it < 30; ++it) {
    std::vector<PauliLetter> w = random_word(rng, 6);
    std::vector<PauliLetter> r(w.rbegin(), w.rend());
    CHECK(std::abs(std::abs(evaluate(a, w)) - std::abs(evaluate(a, r))) < 1e-10);
  }
}

TEST_CASE("translation invariance of the evolved expectation", "[expectation]") {
  PolyMatrix l = palindromic_family(poly1("u + 1 + u^-1"));
  ProductStateParams s{0.1, 30, 45};
  BetaSpec b{BetaSpec::Kind::xx, 1.0, 1};
  ModuleVector z0 = ModuleVector::unit(2, 1, 1);
  ModuleVector z1 = z0.shifted(Exponent({1}));
  for (long n = 0; n <= 6; ++n)
    CHECK(expect_evolved(l, z0, n, s, b) ==
          Catch::Approx(expect_evolved(l, z1, n, s, b)).margin(1e-12));
}

TEST_CASE("identity coupling decays by the support power of lambda", "[expectation]") {
  PolyMatrix l = palindromic_family(poly1("u + 1 + u^-1"));
  ProductStateParams s{0.1, 30, 45};
  BetaSpec b{BetaSpec::Kind::xx, 0.0, 1};
  double lambda = lambda_of_state(moments_from_bloch(s));
  ModuleVector q = ModuleVector::unit(2, 1, 1);
  for (long n = 0; n <= 8; ++n) {
    double v = expect_evolved(l, q, n, s, b);
    ModuleVector qn = q;
    for (long i = 0; i < n; ++i) qn = mat_apply(l, qn);
    CHECK(v <= std::pow(lambda, static_cast<double>(support_size(qn))) + 1e-12);
  }
}

TEST_CASE("expect_evolved basics", "[expectation]") {
  PolyMatrix l = palindromic_family(poly1("u + 1 + u^-1"));
  ModuleVector z0 = ModuleVector::unit(2, 1, 1);
  CHECK(expect_evolved(l, z0, 0, {0.0, 0.0, 0.0}, {BetaSpec::Kind::xx, 0.0, 1}) ==
        Catch::Approx(1.0));
  CHECK(expect_evolved(l, z0, 3, {0.5, 0.0, 0.0}, {BetaSpec::Kind::xx, 0.9, 1}) == 0.0);
  CHECK_THROWS_AS(expect_evolved(l, ModuleVector::zero(2, 1), 1, {0, 0, 0},
                                 {BetaSpec::Kind::xx, 0, 1}),
                  std::invalid_argument);

  std::vector<double> series =
      expect_series(l, z0, 5, {0.0, 30.0, 45.0}, {BetaSpec::Kind::xx, 1.0, 1});
  REQUIRE(series.size() == 6);
  for (long n = 0; n <= 5; ++n)
    CHECK(series[static_cast<std::size_t>(n)] ==
          Catch::Approx(expect_evolved(l, z0, n, {0.0, 30.0, 45.0},
                                       {BetaSpec::Kind::xx, 1.0, 1}))
              .margin(1e-12));
}

TEST_CASE("parameter string parsing", "[expectation]") {
  ProductStateParams s = parse_state_params("p=0.1,theta=30,phi=45");
  CHECK(s.p == 0.1);
  CHECK(s.theta_deg == 30.0);
  CHECK(s.phi_deg == 45.0);
  CHECK(parse_state_params("").p == 0.0);
  CHECK_THROWS_AS(parse_state_params("q=1"), parse_error);
  CHECK_THROWS_AS(parse_state_params("p=abc"), parse_error);

  BetaSpec b = parse_beta_spec("xx:g=0.7,R=1");
  CHECK(b.kind == BetaSpec::Kind::xx);
  CHECK(b.g == 0.7);
  CHECK(b.range == 1);
  CHECK(parse_beta_spec("xx").g == 0.0);
  CHECK_THROWS_AS(parse_beta_spec("yy:g=1"), parse_error);
  CHECK_THROWS_AS(parse_beta_spec("xx:R=0"), parse_error);
}
