#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sudlerlab/cf_core.hpp"
#include "sudlerlab/ostrowski.hpp"
#include "sudlerlab/scan.hpp"

namespace sudlerlab {

// log prod_{n=1}^{q_k} |2 sin(pi (n alpha + (-1)^k x / q_k))|.
long double perturbed_product(const ConvergentTable& table, std::size_t k, const Real& x,
                              const ScanConfig& cfg = {});
long double perturbed_product(const ConvergentTable& table, std::size_t k, double x,
                              const ScanConfig& cfg = {});

// log P_N(alpha) minus the sum of the perturbed factors of its Ostrowski
// expansion.
long double ostrowski_factorization_check(const ConvergentTable& table, const BigInt& N,
                                          const ScanConfig& cfg = {});

// Largest |residual| over 0 <= N < limit.  Shared factors are evaluated once:
// each one depends only on (k, b, digits above k).
long double factorization_sweep(const ConvergentTable& table, std::uint64_t limit,
                                const ScanConfig& cfg = {});

struct LimitFunctionSpec {
  std::size_t r = 1;
  Real B;
  QuadraticIrrational alpha_r;
  std::uint64_t n_trunc = std::uint64_t{1} << 16;
  double tail_tolerance = 1e-6;
};

LimitFunctionSpec make_limit_spec(const SpectralData& sd, std::size_t r);

struct LimitValue {
  double value = 0;
  double log_value = 0;
  // |log of the exact value - log_value| stays below this.
  double tail_bound = 0;
};

// G_r(x) = 2 pi |x + B| prod_n |(1 - B u_n / n)^2 - (x + B/2)^2 / n^2|
// with u_n = {n alpha_r} - 1/2.
//
// The product is evaluated directly up to a fixed head; for the rest only
// five x-independent sums are needed, since
//   log|(1 - B u/n)^2 - c^2/n^2| = 2 log(1 - B u/n) + log(1 - c^2 w),
//   w = 1/(n - B u)^2,
// and the second logarithm is a rapidly convergent series in c^2 w.  The
// part beyond n_trunc is bounded by C log(n)/n, with C calibrated from the
// partial sums of the first term.
class LimitFunction {
 public:
  // n_trunc is doubled until the tail estimate meets tail_tolerance; past
  // `cap` this throws ToleranceUnreachableError.
  explicit LimitFunction(LimitFunctionSpec spec, std::uint64_t cap = std::uint64_t{1} << 24);

  LimitValue operator()(double x) const;

  const LimitFunctionSpec& spec() const { return spec_; }
  std::uint64_t n_trunc() const { return n_trunc_; }
  double tail_constant() const { return tail_constant_; }
  double B() const { return b_; }

 private:
  void precompute();
  double tail_estimate(std::uint64_t n) const;

  LimitFunctionSpec spec_;
  double b_ = 0;
  std::uint64_t n_trunc_ = 0;
  double tail_constant_ = 0;
  std::vector<double> u_;  // u_n for n = 1..n_trunc, index n-1
  long double tail_log_d_ = 0;
  long double tail_w_[4] = {0, 0, 0, 0};
  double tail_w_max_ = 0;
};

std::vector<LimitFunction> make_limit_functions(const SpectralData& sd);

struct IntervalSpec {
  std::size_t r = 1;
  double lo = 0;
  double hi = 0;
};

// [-(1 - kappa/2) B_r, (a_{s+r+1} - kappa/2) B_r].
IntervalSpec interval_I(const QuadraticIrrational& alpha, const SpectralData& sd, std::size_t r);

struct K0Report {
  // Index r-1; nullopt when the last tabled index of the class fails.
  std::vector<std::optional<std::size_t>> per_residue;
  std::optional<std::size_t> k0;
};

// Smallest k from which every tabled k' in the class satisfies
// b q_k' delta_k' + [-(1-kappa) q delta, (1-kappa) q delta] in I_r for all
// b < a_{k'+1}.
K0Report observed_k0(const QuadraticIrrational& alpha, const ConvergentTable& table,
                     const SpectralData& sd);

struct ConvergenceRow {
  std::int64_t m = 0;
  std::size_t k = 0;
  BigInt q_k;
  double sup_error = 0;
  double rate_envelope = 0;
};

// sup over the grid of |P_{q_k}(alpha, x) - G_r(x)| along k = s + m p + r.
std::vector<ConvergenceRow> convergence_report(const ConvergentTable& table,
                                               const SpectralData& sd, const LimitFunction& G,
                                               const std::vector<double>& x_grid,
                                               const std::vector<std::int64_t>& m_values,
                                               const ScanConfig& cfg = {});

// log prod_{k >= k0} prod_{b < b_k} G_[k](b q_k delta_k + eps_k(N)).
long double g_N_product(const ConvergentTable& table, const SpectralData& sd,
                        const std::vector<LimitFunction>& G, const BigInt& N, std::size_t k0);

}  // namespace sudlerlab
