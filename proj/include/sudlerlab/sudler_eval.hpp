#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "sudlerlab/cf_core.hpp"
#include "sudlerlab/factors.hpp"
#include "sudlerlab/scan.hpp"

namespace sudlerlab {

struct IrrationalTarget {
  QuadraticIrrational alpha;
  unsigned precision_bits = 256;
};

using Target = std::variant<Rational, IrrationalTarget>;

// a/b with both parts in 62 bits, as the kernels need.  Throws RangeError.
struct SmallFraction {
  std::int64_t a;
  std::int64_t b;
};
SmallFraction small_fraction(const Rational& x);

// Fixed-point phase of a real value.
FixedPhase phase_of(const Real& alpha);
FixedPhase phase_of(const IrrationalTarget& t);

LogSine<RationalPhase> log_source(const SmallFraction& x);
LogSine<FixedPhase> log_source(const IrrationalTarget& t);

// Residual tolerance for the exact identities at denominator b: 1e-9 up
// to 1e5, 1e-6 beyond (the error budget grows like b * 1e-15).
double identity_tolerance(double b);

// log|2 sin(pi x)|.  Throws SingularFactorError when x is an integer.
double log_sin_factor(double x);
// Exact reduction of n*a/b before rounding.
double log_sin_factor(std::uint64_t n, const Rational& x);

struct LogProductStream {
  Target target;
  std::uint64_t n_max = 0;
  std::uint64_t chunk_size = 0;
  std::vector<long double> values;
};

// values[N] = log P_N.  For a/b, N_max >= b meets the factor at n = b and
// throws SingularFactorError.
LogProductStream sudler_stream(const Target& target, std::uint64_t n_max,
                               const ScanConfig& cfg = {});

// Streaming aggregates of log P_N for 0 <= N <= n_max.
StreamSummary sudler_summary(const Target& target, std::uint64_t n_max,
                             const std::vector<double>& weights = {}, const ScanConfig& cfg = {});

// log sum_{N < b} P_N(a/b)^2.
long double jones_F(const Rational& x, const ScanConfig& cfg = {});

// (1/c) log sum_{N=0}^{n_max} P_N^c.
long double power_sum(const Target& target, double c, std::uint64_t n_max,
                      const ScanConfig& cfg = {});

struct ExtremeReport {
  long double log_max = 0;
  std::uint64_t argmax = 0;
  long double log_min = 0;
  std::uint64_t argmin = 0;
  long double log_b = 0;
};

// Over 0 <= N < b.
ExtremeReport extremes(const Rational& x, const ScanConfig& cfg = {});

// log P_N + log P_{b-N-1} - log b.
long double reflection_check(const Rational& x, std::uint64_t N, const ScanConfig& cfg = {});
// Largest |residual| over every N < b, from one stream.
long double reflection_sweep(const Rational& x, const ScanConfig& cfg = {});
// Mean of log P_N over N < b minus (log b)/2.
long double average_log_check(const Rational& x, const ScanConfig& cfg = {});

// sum_{n=1}^N cot(pi n alpha).
long double cotangent_sum(const Target& target, std::uint64_t N, const ScanConfig& cfg = {});

struct CotangentReport {
  std::size_t k = 0;
  long double max_abs = 0;
  std::uint64_t worst_N = 0;
  double bound = 0;
  bool within = false;
};

double cotangent_bound(const ConvergentTable& table, std::size_t k);
// Every partial sum N < q_k at the convergent p_k/q_k.
CotangentReport cotangent_sweep(const ConvergentTable& table, std::size_t k,
                                const ScanConfig& cfg = {});

struct TransferReport {
  std::size_t k = 0;
  long double residual = 0;
  std::uint64_t worst_N = 0;
  double bound = 0;  // log A_k / a_{k+1}
  double ratio = 0;
};

// log P_N(alpha) - log P_N(p_k/q_k) for one N < q_k.
TransferReport transfer_check(const ConvergentTable& table, std::size_t k, std::uint64_t N,
                              const ScanConfig& cfg = {});
// Largest |residual| over N < q_k.
TransferReport transfer_sweep(const ConvergentTable& table, std::size_t k,
                              const ScanConfig& cfg = {});

struct LubinskyExponents {
  double c1;
  double c2;
};
// Throws DomainError when K_inf < lambda.
LubinskyExponents lubinsky_exponents(double K_inf, double lambda);

struct HStep {
  std::size_t k;
  long double h;
  long double cesaro_mean;
};
// Only for [0; (a)]; FormError otherwise.
long double zagier_h(const QuadraticIrrational& alpha, std::size_t k, const ScanConfig& cfg = {});
std::vector<HStep> zagier_h_sequence(const QuadraticIrrational& alpha, std::size_t k_max,
                                     const ScanConfig& cfg = {});

}  // namespace sudlerlab
