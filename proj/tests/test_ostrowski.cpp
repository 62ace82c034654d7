#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "corpus.hpp"
#include "sudlerlab/errors.hpp"
#include "sudlerlab/ostrowski.hpp"
#include "sudlerlab/perturbed_limit.hpp"

using namespace sudlerlab;

namespace {

// Every digit vector over k < depth obeying the digit rules, by depth-first
// search from the top, independent of the greedy encoder.
std::vector<std::uint32_t> hit_counts(const QuadraticIrrational& alpha, std::size_t depth) {
  std::vector<std::uint64_t> q{1, static_cast<std::uint64_t>(alpha.digit(1))};
  while (q.size() <= depth)
    q.push_back(static_cast<std::uint64_t>(alpha.digit(q.size())) * q.back() + q[q.size() - 2]);
  std::vector<std::uint32_t> hits(q[depth], 0);
  std::function<void(std::size_t, std::uint64_t, bool)> walk = [&](std::size_t k, std::uint64_t sum,
                                                                   bool above_max) {
    // above_max: the digit at k+1 was maximal, so b_k must vanish.
    const std::int64_t a = alpha.digit(k + 1);
    const std::int64_t cap = above_max ? 0 : (k == 0 ? a - 1 : a);
    for (std::int64_t b = 0; b <= cap; ++b) {
      const std::uint64_t s = sum + static_cast<std::uint64_t>(b) * q[k];
      if (k == 0) {
        if (s < hits.size()) ++hits[s];
      } else {
        walk(k - 1, s, b == a);
      }
    }
  };
  walk(depth - 1, 0, false);
  return hits;
}

}  // namespace

TEST_CASE("each N below q_10 has exactly one valid expansion") {
  for (const auto& [name, alpha] : corpus::six()) {
    CAPTURE(name);
    const auto hits = hit_counts(alpha, 10);
    std::size_t bad = 0;
    for (const auto h : hits) bad += h != 1;
    CHECK(bad == 0);
  }
}

TEST_CASE("round trip below q_15") {
  for (const auto& [name, alpha] : corpus::six()) {
    CAPTURE(name);
    const auto t = build_convergents(alpha, 15);
    const BigInt limit = t[15].q;
    if (limit <= 2000000) {
      for (BigInt N = 0; N < limit; ++N) {
        const auto x = encode(N, t);
        REQUIRE(decode(x, t) == N);
      }
    } else {
      gmp_randclass rng(gmp_randinit_default);
      rng.seed(15);
      for (int i = 0; i < 20000; ++i) {
        const BigInt N = rng.get_z_range(limit);
        REQUIRE(decode(encode(N, t), t) == N);
      }
    }
  }
}

TEST_CASE("golden expansions are Zeckendorf") {
  const auto t = build_convergents(corpus::golden(), 20);
  for (BigInt N = 1; N < t[20].q; ++N) {
    const auto x = encode(N, t);
    CHECK(x.digit(0) == 0);
    for (std::size_t k = 1; k < x.digits.size(); ++k) CHECK(x.digits[k] * x.digit(k + 1) == 0);
  }
  CHECK(encode(4, t).digits == std::vector<std::int64_t>{0, 1, 0, 1});
}

TEST_CASE("offset bounds below q_12") {
  for (const auto& alpha : {corpus::golden(), QuadraticIrrational(1, {}, {2}),
                            QuadraticIrrational(3, {}, {6})}) {
    CAPTURE(alpha.to_string());
    const auto t = build_convergents(alpha, 14);
    const SpectralData sd = spectral(alpha, t);
    const unsigned bits = t.precision_bits();
    const Real one_minus_kappa =
        Real(1, bits) - Real(1, bits) / static_cast<long>(sd.kappa_denominator);
    const BigInt limit = std::min<BigInt>(t[12].q, BigInt(200000));
    for (BigInt N = 0; N < limit; ++N) {
      const auto x = encode(N, t);
      for (std::size_t k = 0; k <= 12; ++k) {
        const Real e = epsilon(k, x, t);
        const Real qd = t[k].delta * t[k].q;
        const Real ceiling = t[k + 1].delta * t[k].q;
        CHECK(e <= ceiling);
        if (x.digit(k) > 0) {
          CHECK(abs(e) <= one_minus_kappa * qd);
          CHECK(-(t[k].delta - t[k + 1].delta) * t[k].q <= e);
        }
      }
    }
  }
}

TEST_CASE("invalid digit vectors are rejected") {
  const auto t = build_convergents(QuadraticIrrational(1, {}, {2}), 10);
  CHECK_THROWS_AS(decode({0, {2}}, t), InvalidDigitError);       // b_0 < a_1
  CHECK_THROWS_AS(decode({0, {1, 2}}, t), InvalidDigitError);    // maximal b_1 needs b_0 = 0
  CHECK_THROWS_AS(decode({0, {0, 3}}, t), InvalidDigitError);
  CHECK_THROWS_AS(decode({0, {0, -1}}, t), InvalidDigitError);
  CHECK(decode({0, {0, 2}}, t) == 2 * t[1].q);
  CHECK_THROWS_AS(encode(*t.q_next(), t), RangeError);
  CHECK_NOTHROW(encode(*t.q_next() - 1, t));
  CHECK(encode(0, t).digits.empty());
}

TEST_CASE("rational tables expand below their denominator") {
  const auto t = build_convergents(Rational::make(13, 40), 100);
  for (BigInt N = 0; N < 40; ++N) CHECK(decode(encode(N, t), t) == N);
  CHECK_THROWS_AS(encode(40, t), RangeError);
}
