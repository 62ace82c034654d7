#include "sudlerlab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "sudlerlab/errors.hpp"
#include "sudlerlab/sudler_eval.hpp"

namespace sudlerlab {

double vol_41(unsigned panels) {
  using boost::math::quadrature::gauss;
  using ld = long double;
  const ld pi = std::numbers::pi_v<ld>;
  const ld split = ld(1) / 12;
  const ld end = ld(5) / 6;

  // log(2 sin(pi x)) = log(2 pi x) + log(sin(pi x)/(pi x)); the first part
  // integrates in closed form, the second is smooth.
  const ld singular = split * (std::log(2 * pi * split) - 1);
  const ld smooth = gauss<ld, 20>::integrate(
      [&](ld x) { return std::log(std::sin(pi * x) / (pi * x)); }, ld(0), split);

  ld regular = 0;
  const unsigned n = std::max(panels, 1u);
  const ld width = (end - split) / n;
  for (unsigned i = 0; i < n; ++i) {
    const ld lo = split + width * i;
    regular += gauss<ld, 30>::integrate([&](ld x) { return std::log(2 * std::sin(pi * x)); }, lo,
                                        lo + width);
  }
  return static_cast<double>(4 * pi * (singular + smooth + regular));
}

namespace {

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double band = 0;
  double slope_band = 0;
  bool unstable = false;
};

LineFit fit_line(std::size_t k_lo, const std::vector<double>& y) {
  const std::size_t n = y.size();
  double mean_k = 0, mean_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_k += double(k_lo + i);
    mean_y += y[i];
  }
  mean_k /= double(n);
  mean_y /= double(n);
  double sxx = 0, sxy = 0, sabs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dk = double(k_lo + i) - mean_k;
    sxx += dk * dk;
    sxy += dk * (y[i] - mean_y);
    sabs += std::fabs(dk);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0;
  f.intercept = mean_y - f.slope * mean_k;
  double early = 0, late = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::fabs(y[i] - f.slope * double(k_lo + i) - f.intercept);
    f.band = std::max(f.band, r);
    double& half = 2 * i < n ? early : late;
    half = std::max(half, r);
  }
  f.slope_band = sxx > 0 ? f.band * sabs / sxx : INFINITY;
  f.unstable = late > 2 * early + 0.05;
  return f;
}

double window_cost(const ConvergentTable& t, std::size_t k_lo, std::size_t k_hi) {
  double cost = 0;
  for (std::size_t k = k_lo; k <= k_hi; ++k) cost += t[k].q.get_d();
  return cost;
}

}  // namespace

std::size_t budget_k_hi(const QuadraticIrrational& alpha, std::size_t k_lo, double budget) {
  const ConvergentTable t = build_convergents(alpha, k_lo + 200);
  std::size_t k_hi = k_lo;
  if (window_cost(t, k_lo, k_lo) > budget) throw BudgetError("even a single convergent exceeds the budget");
  while (k_hi + 1 <= t.k_max() && window_cost(t, k_lo, k_hi + 1) <= budget) ++k_hi;
  const std::size_t p = alpha.p();
  const std::size_t len = k_hi - k_lo + 1;
  if (len > p) k_hi -= len % p;
  return k_hi;
}

std::vector<EstimateReport> estimate_K(const QuadraticIrrational& alpha,
                                       const std::vector<std::optional<double>>& cs,
                                       std::size_t k_lo, std::size_t k_hi,
                                       const EstimateOptions& opts) {
  if (cs.empty()) throw DomainError("no exponent requested");
  if (k_hi < k_lo + 2) throw RangeError("the fit window needs at least three indices");
  std::vector<double> weights;
  for (const auto& c : cs) {
    if (c && !(*c > 0)) throw DomainError("exponent c must be positive");
    if (c) weights.push_back(*c);
  }

  const ConvergentTable table =
      build_convergents(alpha, std::max(k_hi, alpha.s() + 3 * alpha.p() + 1));
  const double cost = window_cost(table, k_lo, k_hi);
  if (cost > opts.budget)
    throw BudgetError("window needs " + std::to_string(cost) + " factors, budget is " +
                      std::to_string(opts.budget));
  const SpectralData sd = spectral(alpha, table);

  std::vector<std::vector<double>> values(cs.size());
  double reflection_gap = 0;
  const double reflection_tol = identity_tolerance(table[k_hi].q.get_d());
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const SmallFraction f = small_fraction(Rational::make(table[k].p, table[k].q));
    const StreamSummary s =
        summarize(log_source(f), static_cast<std::uint64_t>(f.b - 1), weights, opts.scan);
    reflection_gap = std::max(
        reflection_gap,
        static_cast<double>(std::fabs(s.max + s.min - std::log(static_cast<long double>(f.b)))));
    std::size_t j = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (cs[i]) {
        values[i].push_back(static_cast<double>(s.log_sum_exp[j] / *cs[i]));
        ++j;
      } else {
        values[i].push_back(static_cast<double>(s.max));
      }
    }
  }

  std::vector<EstimateReport> reports;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const LineFit fit = fit_line(k_lo, values[i]);
    EstimateReport rep{alpha, cs[i], fit.slope, fit.intercept, k_lo, k_hi, values[i],
                       fit.band, fit.slope_band, fit.unstable, {}};
    if (!cs[i])
      rep.bounds.push_back({"reflection of max and min", reflection_gap, reflection_tol,
                            reflection_gap <= reflection_tol, false});
    reports.push_back(std::move(rep));
  }

  const EstimateReport* max_report = nullptr;
  for (const auto& r : reports)
    if (!r.c) max_report = &r;
  for (auto& r : reports) {
    auto checks = bound_suite(r, sd, r.c ? max_report : nullptr);
    r.bounds.insert(r.bounds.end(), checks.begin(), checks.end());
  }
  return reports;
}

std::vector<BoundCheck> bound_suite(const EstimateReport& report, const SpectralData& sd,
                                    const EstimateReport* max_report) {
  std::vector<BoundCheck> out;
  auto add = [&](std::string name, double lhs, double rhs, bool informational) {
    out.push_back({std::move(name), lhs, rhs, lhs <= rhs, informational});
  };
  const double slack = 1.5 * report.slope_band;
  const double lambda = sd.lambda;

  if (!report.c) {
    add("max growth at least lambda", lambda, report.K_hat + slack, false);
  } else {
    const double c = *report.c;
    add("Jensen lower bound", (1.0 / c + 0.5) * lambda, report.K_hat + slack, false);
    if (max_report) {
      const double both = slack + 1.5 * max_report->slope_band;
      add("power sum minus lambda/c below max growth", report.K_hat - lambda / c,
          max_report->K_hat + both, false);
      add("max growth below power sum", max_report->K_hat, report.K_hat + both, false);
      add("max growth strictly below power sum", max_report->K_hat, report.K_hat, true);
    }
  }
  const double vol = vol_41();
  const double weight = report.c ? std::max(1.0, 1.0 / *report.c) : 1.0;
  const double A = static_cast<double>(report.alpha.max_partial_quotient() + 1);
  add("distance to volume times mean quotient",
      std::fabs(report.K_hat - vol / (4 * std::numbers::pi) * avg_partial_quotient(report.alpha)),
      weight * std::log(A), true);
  return out;
}

BDReport bd_check(const Rational& x, const ScanConfig& cfg) {
  const auto digits = cf_of_rational(x);
  double sum = 0;
  double largest = 0;
  for (std::size_t i = 1; i < digits.size(); ++i) {
    sum += digits[i].get_d();
    largest = std::max(largest, digits[i].get_d());
  }
  const double k = double(digits.size() - 1);
  const double A = 1 + largest;
  BDReport r;
  r.log_J = static_cast<double>(jones_F(x, cfg));
  r.prediction = vol_41() / (2 * std::numbers::pi) * sum;
  r.deviation = r.log_J - r.prediction;
  r.error_budget = A + k * std::log(A);
  r.ratio = std::fabs(r.deviation) / r.error_budget;
  return r;
}

}  // namespace sudlerlab
