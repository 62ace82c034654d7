#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "oracle.hpp"
#include "sudlerlab/cf_core.hpp"
#include "sudlerlab/errors.hpp"
#include "sudlerlab/parse.hpp"

using namespace sudlerlab;

TEST_CASE("golden denominators follow Binet") {
  const auto t = build_convergents(corpus::golden(), 60);
  for (int k = 0; k <= 60; ++k) CHECK(t[k].q.get_ui() == oracle::fibonacci_q(k));
}

TEST_CASE("determinant identity holds exactly") {
  for (const auto& [name, alpha] : corpus::six()) {
    CAPTURE(name);
    const auto t = build_convergents(alpha, 80);
    for (std::size_t k = 1; k <= t.k_max(); ++k) {
      const BigInt det = t[k].q * t[k - 1].p - t[k].p * t[k - 1].q;
      CHECK(det == (k % 2 ? -1 : 1));
    }
  }
}

TEST_CASE("distance to the nearest integer sits between the classical bounds") {
  for (const auto& [name, alpha] : corpus::six()) {
    CAPTURE(name);
    const auto t = build_convergents(alpha, 60);
    const SpectralData sd = spectral(alpha, build_convergents(alpha, 60));
    const unsigned bits = t.precision_bits();
    const Real kappa = Real(1, bits) / static_cast<long>(sd.kappa_denominator);
    for (std::size_t k = 1; k + 1 <= t.k_max(); ++k) {
      CAPTURE(k);
      const Real& d = t[k].delta;
      const Real lower = Real(1, bits) / BigInt(t[k + 1].q + t[k].q);
      const Real upper = Real(1, bits) / t[k + 1].q;
      CHECK(lower < d);
      CHECK(d < upper);
      const Real& next = t[k + 1].delta;
      CHECK(kappa * d <= next);
      CHECK(next <= (Real(1, bits) - kappa) * d);
    }
  }
}

TEST_CASE("delta is the signed distance") {
  const auto t = build_convergents(corpus::golden(), 20);
  for (std::size_t k = 0; k <= 20; ++k) {
    const Real raw = t.alpha() * t[k].q - t[k].p;
    const Real expect = k % 2 ? -raw : raw;
    CHECK(abs(expect - t[k].delta).to_double() < 1e-60);
  }
}

TEST_CASE("surd evaluation matches square roots") {
  const unsigned bits = 300;
  const Real five(5, bits), ten(10, bits), two(2, bits);
  const Real golden = (sqrt(five) + 1L) / 2L;
  CHECK(abs(evaluate_surd(corpus::golden(), bits) - golden).to_double() < 1e-80);
  CHECK(abs(evaluate_surd(QuadraticIrrational(3, {}, {6}), bits) - sqrt(ten)).to_double() < 1e-80);
  CHECK(abs(evaluate_surd(QuadraticIrrational(1, {}, {2}), bits) - sqrt(two)).to_double() < 1e-80);
  // Pre-periodic: [0; 2, (1)] = 1 / (2 + 1/golden) = golden / (2 golden + 1)
  const Real pre = golden / (golden * 2L + 1L);
  CHECK(abs(evaluate_surd(QuadraticIrrational(0, {2}, {1}), bits) - pre).to_double() < 1e-80);
}

TEST_CASE("golden spectral constants") {
  const auto alpha = corpus::golden();
  const SpectralData sd = spectral(alpha, build_convergents(alpha, 40));
  CHECK(sd.p == 1);
  CHECK(sd.kappa == doctest::Approx(0.25));
  CHECK(sd.lambda == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-14));
  CHECK(sd.B_of(1) == doctest::Approx(1 / std::sqrt(5.0)).epsilon(1e-14));
  CHECK(sd.C[0].to_double() == doctest::Approx(1.1708203932499369).epsilon(1e-14));
  CHECK(sd.E[0].to_double() == doctest::Approx(0.3819660112501051).epsilon(1e-14));
  CHECK(sd.alpha_rev[0] == QuadraticIrrational(0, {}, {1}));
}

TEST_CASE("spectral reconstruction of the denominators") {
  for (const auto& [name, alpha] : corpus::six()) {
    CAPTURE(name);
    const auto t = build_convergents(alpha, 50);
    const SpectralData sd = spectral(alpha, t);
    const unsigned bits = t.precision_bits();
    const double tol = std::ldexp(1.0, -static_cast<int>(bits / 2));
    for (std::size_t k = sd.s + 1; k <= t.k_max(); ++k) {
      const std::size_t r = sd.residue(k);
      const std::int64_t m = sd.block(k);
      const Real em = pow(sd.eta, m);
      Real model = sd.C[r - 1] * em;
      const Real tail = sd.D[r - 1] / em;
      const bool flip = (m * static_cast<std::int64_t>(sd.p)) % 2 != 0;
      model = flip ? model - tail : model + tail;
      const Real rel = abs(model - t[k].q) / t[k].q;
      CHECK(rel.to_double() < tol);
    }
  }
}

TEST_CASE("residue indexing") {
  const QuadraticIrrational a(0, {4, 1}, {2, 3, 5});
  const SpectralData sd = spectral(a, build_convergents(a, 20));
  CHECK(sd.residue(3) == 1);
  CHECK(sd.block(3) == 0);
  CHECK(sd.residue(5) == 3);
  CHECK(sd.residue(6) == 1);
  CHECK(sd.block(6) == 1);
  CHECK(sd.alpha_rev[0].period() == std::vector<std::int64_t>{2, 5, 3});
}

TEST_CASE("rational expansions round-trip") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> pick_b(1, 1000000);
  for (int i = 0; i < 1000; ++i) {
    const long b = pick_b(rng);
    std::uniform_int_distribution<long> pick_a(-3 * b, 3 * b);
    const Rational x = Rational::make(pick_a(rng), b);
    const auto digits = cf_of_rational(x);
    CHECK(rational_from_digits(digits) == x);
    if (digits.size() > 1) CHECK(digits.back() > 1);
    const auto t = build_convergents(x, 1000);
    CHECK(t[t.k_max()].p == x.num);
    CHECK(t[t.k_max()].q == x.den);
  }
}

TEST_CASE("canonical form is enforced") {
  CHECK_THROWS_AS(QuadraticIrrational(1, {}, {1, 1}), CanonicalFormError);
  CHECK_THROWS_AS(QuadraticIrrational(1, {}, {2, 3, 2, 3}), CanonicalFormError);
  CHECK_THROWS_AS(QuadraticIrrational(1, {2}, {1, 2}), CanonicalFormError);
  CHECK_THROWS_AS(QuadraticIrrational(1, {}, {}), CanonicalFormError);
  CHECK_THROWS_AS(QuadraticIrrational(1, {0}, {1}), CanonicalFormError);
  CHECK_NOTHROW(QuadraticIrrational(1, {2}, {2, 1}));
  CHECK_THROWS_AS(Rational::make(1, 0), DomainError);
  CHECK(Rational::make(6, -4).to_string() == "-3/2");
}

TEST_CASE("precision below the depth requirement is refused") {
  CHECK_THROWS_AS(build_convergents(corpus::golden(), 200, 128), PrecisionError);
  CHECK_NOTHROW(build_convergents(corpus::golden(), 40, 128));
  CHECK(default_precision_bits(corpus::golden(), 10) == 256);
}

TEST_CASE("A_k and partial quotients") {
  const QuadraticIrrational a(0, {7}, {1, 3});
  const auto t = build_convergents(a, 10);
  CHECK(t.A(0) == 1);
  CHECK(t.A(1) == 8);
  CHECK(t.partial_quotient(25) == a.digit(25));
  CHECK(a.digit(2) == 1);
  CHECK(a.digit(3) == 3);
  CHECK(a.max_partial_quotient() == 7);
  REQUIRE(t.q_next());
  CHECK(*t.q_next() == t[10].q * a.digit(11) + t[9].q);
}

TEST_CASE("parsing") {
  const auto x = parse_number("[1; (1)]");
  REQUIRE(std::holds_alternative<QuadraticIrrational>(x));
  CHECK(std::get<QuadraticIrrational>(x).to_string() == "[1; (1)]");
  CHECK(parse_quadratic(" [0; 4, 1, (2, 3)] ").to_string() == "[0; 4, 1, (2, 3)]");
  CHECK(parse_rational("-6/4") == Rational::make(-3, 2));
  CHECK(parse_rational("5") == Rational::make(5, 1));
  try {
    parse_number("[1; (1]");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 6);
  }
  CHECK_THROWS_AS(parse_number("1/0"), ParseError);
  CHECK_THROWS_AS(parse_number("abc"), ParseError);
  CHECK_THROWS_AS(parse_quadratic("[1; (1, 1)]"), CanonicalFormError);
}
