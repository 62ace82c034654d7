#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <numbers>

#include "corpus.hpp"
#include "sudlerlab/constants.hpp"
#include "sudlerlab/errors.hpp"
#include "sudlerlab/sudler_eval.hpp"

using namespace sudlerlab;

TEST_CASE("volume against the trigamma closed form") {
  // 2 Cl_2(pi/3) = (psi'(1/3) - 2 pi^2 / 3) / sqrt 3
  const double pi = std::numbers::pi;
  const double closed = (boost::math::trigamma(1.0 / 3) - 2 * pi * pi / 3) / std::sqrt(3.0);
  CHECK(std::fabs(vol_41() - closed) < 1e-13);
  CHECK(std::fabs(vol_41() - 2.02988) < 1e-4);
  CHECK(std::fabs(vol_41(8) - vol_41(16)) < 1e-10);
  CHECK(std::fabs(vol_41(3) - vol_41(6)) < 1e-10);
}

TEST_CASE("maximum and minimum are reflections of each other") {
  const auto t = build_convergents(corpus::golden(), 26);
  for (std::size_t k = 2; k <= 26; ++k) {
    const ExtremeReport e = extremes(Rational::make(t[k].p, t[k].q));
    CHECK(std::fabs(e.log_max + e.log_min - e.log_b) < 1e-9);
    CHECK(e.argmax + e.argmin + 1 == t[k].q.get_ui());
  }
}

TEST_CASE("golden growth constants on a short window") {
  const auto reps = estimate_K(corpus::golden(), {2.0, std::nullopt}, 8, 24);
  REQUIRE(reps.size() == 2);
  const auto& two = reps[0];
  const auto& mx = reps[1];
  CHECK(mx.per_k_values.size() == 17);
  CHECK(std::fabs(mx.K_hat - std::log((1 + std::sqrt(5.0)) / 2)) < 0.02);
  CHECK(mx.fit_residual_band < 0.5);
  CHECK(2 * two.K_hat >= 1.0);
  CHECK(2 * two.K_hat <= 1.2);
  for (const auto& r : reps)
    for (const auto& b : r.bounds) {
      CAPTURE(b.name);
      if (!b.informational) CHECK(b.pass);
    }
}

TEST_CASE("results do not depend on the worker count") {
  EstimateOptions one;
  one.scan = {4096, 1};
  EstimateOptions many;
  many.scan = {4096, 8};
  const auto a = estimate_K(QuadraticIrrational(1, {}, {2}), {0.5, std::nullopt}, 4, 12, one);
  const auto b = estimate_K(QuadraticIrrational(1, {}, {2}), {0.5, std::nullopt}, 4, 12, many);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].K_hat == b[i].K_hat);
    CHECK(a[i].per_k_values == b[i].per_k_values);
  }
}

TEST_CASE("budget handling") {
  CHECK_THROWS_AS(estimate_K(corpus::golden(), {std::nullopt}, 8, 40, {1e6, {}}), BudgetError);
  CHECK_THROWS_AS(estimate_K(corpus::golden(), {std::nullopt}, 8, 9), RangeError);
  CHECK_THROWS_AS(estimate_K(corpus::golden(), {-1.0}, 8, 12), DomainError);
  const QuadraticIrrational two_periodic(0, {}, {1, 2});
  const std::size_t hi = budget_k_hi(two_periodic, 3, 1e6);
  CHECK((hi - 3 + 1) % 2 == 0);
  const auto t = build_convergents(two_periodic, hi + 2);
  double cost = 0;
  for (std::size_t k = 3; k <= hi; ++k) cost += t[k].q.get_d();
  CHECK(cost <= 1e6);
}

TEST_CASE("bounded quotients break the mean-quotient prediction") {
  const auto t = build_convergents(corpus::golden(), 24);
  for (std::size_t k = 10; k <= 24; ++k) {
    const BDReport r = bd_check(Rational::make(t[k].p, t[k].q));
    CHECK(std::fabs(r.deviation) / double(k) > 0.3);
  }
}
