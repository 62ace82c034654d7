#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "corpus.hpp"
#include "oracle.hpp"
#include "sudlerlab/errors.hpp"
#include "sudlerlab/reference.hpp"
#include "sudlerlab/sudler_eval.hpp"

using namespace sudlerlab;

namespace {

std::vector<SmallFraction> random_fractions(std::size_t count, std::int64_t bmax, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> pick_b(2, bmax);
  std::vector<SmallFraction> out;
  while (out.size() < count) {
    const std::int64_t b = pick_b(rng);
    const std::int64_t a = std::uniform_int_distribution<std::int64_t>(1, b - 1)(rng);
    if (std::gcd(a, b) == 1) out.push_back({a, b});
  }
  return out;
}

}  // namespace

TEST_CASE("functionals agree with direct products for b <= 50") {
  for (std::int64_t b = 1; b <= 50; ++b) {
    for (std::int64_t a = 0; a < b; ++a) {
      if (std::gcd(a, b) != 1) continue;
      CAPTURE(a);
      CAPTURE(b);
      const Rational x = Rational::make(a, b);
      const auto P = oracle::products(a, b);
      CHECK(std::fabs(jones_F(x) - 2 * oracle::log_power_sum(P, 2)) < 1e-12);
      for (const double c : {0.5, 1.0, 2.0, 5.0})
        CHECK(std::fabs(power_sum(x, c, b - 1) - oracle::log_power_sum(P, c)) < 1e-12);
      const ExtremeReport e = extremes(x);
      const auto o = oracle::extremes(P);
      CHECK(std::fabs(e.log_max - std::log(o.max)) < 1e-12);
      CHECK(std::fabs(e.log_min - std::log(o.min)) < 1e-12);
      CHECK(std::fabs(std::log(P[e.argmax]) - std::log(o.max)) < 1e-12);
      CHECK(std::fabs(std::log(P[e.argmin]) - std::log(o.min)) < 1e-12);
      const auto s = sudler_stream(x, b - 1);
      for (std::int64_t N = 0; N < b; ++N) CHECK(std::fabs(s.values[N] - std::log(P[N])) < 1e-12);
    }
  }
}

TEST_CASE("small exact values of the quantum invariant") {
  CHECK(std::fabs(std::exp(jones_F(Rational::make(1, 3))) - 13) < 1e-12);
  CHECK(std::fabs(std::exp(jones_F(Rational::make(1, 2))) - 5) < 1e-12);
  CHECK(std::fabs(std::exp(jones_F(Rational::make(2, 3))) - 13) < 1e-12);
  CHECK(std::fabs(jones_F(Rational::make(0, 1))) < 1e-15);
}

TEST_CASE("exact identities on random fractions") {
  for (const auto& f : random_fractions(150, 100000, 3)) {
    CAPTURE(f.a);
    CAPTURE(f.b);
    const Rational x = Rational::make(f.a, f.b);
    CHECK(reflection_sweep(x) < 1e-9);
    CHECK(std::fabs(average_log_check(x)) < 1e-10);
    const auto s = sudler_stream(x, static_cast<std::uint64_t>(f.b - 1));
    CHECK(std::fabs(std::expm1(static_cast<double>(s.values.back() - std::log((long double)f.b)))) < 1e-11);
  }
}

TEST_CASE("power sums sandwich the maximum") {
  for (const auto& f : random_fractions(40, 20000, 5)) {
    const Rational x = Rational::make(f.a, f.b);
    const ExtremeReport e = extremes(x);
    for (const double c : {0.5, 1.0, 2.0, 5.0}) {
      const long double ps = power_sum(x, c, static_cast<std::uint64_t>(f.b - 1));
      CHECK(ps - e.log_b / c <= e.log_max + 1e-12);
      CHECK(e.log_max <= ps + 1e-12);
    }
  }
  const IrrationalTarget g{corpus::golden()};
  const auto s = sudler_summary(g, 5000);
  for (const double c : {0.5, 1.0, 2.0, 5.0}) {
    const long double ps = power_sum(g, c, 5000);
    CHECK(ps - std::log(5001.0L) / c <= s.max + 1e-12);
    CHECK(s.max <= ps + 1e-12);
  }
}

TEST_CASE("singular factors raise") {
  const Rational x = Rational::make(3, 7);
  CHECK_NOTHROW(sudler_stream(x, 6));
  try {
    sudler_stream(x, 7);
    FAIL("no error");
  } catch (const SingularFactorError& e) {
    CHECK(e.n() == 7);
  }
  CHECK_THROWS_AS(sudler_stream(x, 50, {4, 3}), SingularFactorError);
  CHECK_THROWS_AS(log_sin_factor(3.0), SingularFactorError);
  CHECK_THROWS_AS(log_sin_factor(14, x), SingularFactorError);
  CHECK(log_sin_factor(1, Rational::make(1, 6)) == doctest::Approx(0.0));
}

TEST_CASE("fractions beyond the kernel range are refused") {
  const BigInt big = BigInt(1) << 63;
  CHECK_THROWS_AS(small_fraction(Rational::make(1, big)), RangeError);
  const SmallFraction f = small_fraction(Rational::make(-1, 7));
  CHECK(f.a == 6);
  CHECK(f.b == 7);
}

TEST_CASE("stream is bit-identical across worker counts") {
  const IrrationalTarget g{QuadraticIrrational(3, {}, {6})};
  const Rational r = Rational::make(28657, 46368);
  for (const std::uint64_t chunk : {std::uint64_t{1}, std::uint64_t{977}, std::uint64_t{1} << 16}) {
    CAPTURE(chunk);
    const auto base = sudler_stream(g, 30000, {chunk, 1}).values;
    const auto base_r = sudler_stream(r, 46367, {chunk, 1}).values;
    const auto sum1 = sudler_summary(g, 30000, {0.5, 2}, {chunk, 1});
    for (const int w : {2, 8}) {
      CHECK(sudler_stream(g, 30000, {chunk, w}).values == base);
      CHECK(sudler_stream(r, 46367, {chunk, w}).values == base_r);
      const auto sw = sudler_summary(g, 30000, {0.5, 2}, {chunk, w});
      CHECK(sw.max == sum1.max);
      CHECK(sw.argmax == sum1.argmax);
      CHECK(sw.min == sum1.min);
      CHECK(sw.sum == sum1.sum);
      CHECK(sw.log_sum_exp == sum1.log_sum_exp);
    }
  }
}

TEST_CASE("chunked kernels match the serial reference") {
  const auto src = log_source(IrrationalTarget{corpus::golden()});
  const std::uint64_t n = 40000;
  CHECK(prefix_values(src, n, {n, 1}) == reference::prefix_values(src, n));
  const auto chunked = prefix_values(src, n, {1000, 8});
  const auto serial = reference::prefix_values(src, n);
  for (std::uint64_t i = 0; i <= n; ++i) CHECK(std::fabs(chunked[i] - serial[i]) < 1e-12);

  const auto rs = reference::summarize(src, n, {1, 3});
  const auto cs = summarize(src, n, {1, 3}, {n, 1});
  CHECK(rs.max == cs.max);
  CHECK(rs.argmax == cs.argmax);
  CHECK(rs.min == cs.min);
  CHECK(rs.argmin == cs.argmin);
  CHECK(rs.last == cs.last);
  for (std::size_t j = 0; j < 2; ++j)
    CHECK(std::fabs(rs.log_sum_exp[j] - cs.log_sum_exp[j]) < 1e-12);
}

TEST_CASE("cotangent sums stay inside the rational bound") {
  const auto t = build_convergents(corpus::golden(), 15);
  for (std::size_t k = 1; k <= 15; ++k) {
    const CotangentReport r = cotangent_sweep(t, k);
    CHECK(r.within);
    CHECK(r.max_abs <= r.bound);
  }
  // cot(pi/3) + cot(2 pi/3) = 0
  CHECK(std::fabs(cotangent_sum(Rational::make(1, 3), 2)) < 1e-15);
}

TEST_CASE("transfer between an irrational and its convergents") {
  for (const auto& alpha : {corpus::golden(), QuadraticIrrational(0, {}, {10})}) {
    const auto t = build_convergents(alpha, 12);
    for (std::size_t k = 5; k <= (alpha.digit(1) == 10 ? 7u : 12u); ++k) {
      const TransferReport r = transfer_sweep(t, k);
      CHECK(r.ratio < 50);
      const TransferReport one = transfer_check(t, k, r.worst_N);
      CHECK(std::fabs(one.residual) == doctest::Approx(static_cast<double>(r.residual)));
    }
  }
}

TEST_CASE("increments of log J along convergents of [0; (a)]") {
  const auto steps = zagier_h_sequence(QuadraticIrrational(0, {}, {2}), 8);
  REQUIRE(steps.size() == 8);
  for (std::size_t i = 3; i < steps.size(); ++i)
    CHECK(std::fabs(steps[i].h - steps[i - 1].h) < 0.1);
  CHECK_THROWS_AS(zagier_h_sequence(corpus::golden(), 5), FormError);
}

TEST_CASE("Lubinsky exponents") {
  const auto e = lubinsky_exponents(0.6, 0.5);
  CHECK(e.c1 > 0);
  CHECK_THROWS_AS(lubinsky_exponents(0.4, 0.5), DomainError);
}
