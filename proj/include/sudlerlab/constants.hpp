#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sudlerlab/cf_core.hpp"
#include "sudlerlab/scan.hpp"

namespace sudlerlab {

// 4 pi int_0^{5/6} log(2 sin(pi x)) dx.  `panels` Gauss panels cover
// [1/12, 5/6]; the singular piece near 0 is integrated in closed form.
double vol_41(unsigned panels = 8);

// Every check reads lhs <= rhs.
struct BoundCheck {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
  // Observational entries carry no implied constant and never fail a suite.
  bool informational = false;
};

struct EstimateReport {
  QuadraticIrrational alpha;
  std::optional<double> c;  // nullopt: the maximum
  double K_hat = 0;
  double intercept = 0;
  std::size_t k_lo = 0;
  std::size_t k_hi = 0;
  std::vector<double> per_k_values;
  double fit_residual_band = 0;
  // Largest slope change a perturbation of the data within the residual
  // band can cause.
  double slope_band = 0;
  bool unstable = false;
  std::vector<BoundCheck> bounds;
};

struct EstimateOptions {
  // Total factor count sum_k q_k over the window.
  double budget = 1e8;
  ScanConfig scan;
};

// One report per entry of `cs`, all from a single pass per k.  Throws
// BudgetError when the window is too expensive.
std::vector<EstimateReport> estimate_K(const QuadraticIrrational& alpha,
                                       const std::vector<std::optional<double>>& cs,
                                       std::size_t k_lo, std::size_t k_hi,
                                       const EstimateOptions& opts = {});

// Largest k_hi with the window [k_lo, k_hi] inside the budget, trimmed so the
// window length is a multiple of the period.
std::size_t budget_k_hi(const QuadraticIrrational& alpha, std::size_t k_lo, double budget);

// Checks for one report; `max_report` enables the two-sided comparison
// between a finite c and the maximum.
std::vector<BoundCheck> bound_suite(const EstimateReport& report, const SpectralData& sd,
                                    const EstimateReport* max_report = nullptr);

struct BDReport {
  double log_J = 0;
  double prediction = 0;
  double deviation = 0;
  double error_budget = 0;
  double ratio = 0;
};

BDReport bd_check(const Rational& x, const ScanConfig& cfg = {});

}  // namespace sudlerlab
