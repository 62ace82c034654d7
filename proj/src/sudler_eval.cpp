#include "sudlerlab/sudler_eval.hpp"

#include <algorithm>
#include <cmath>

#include "sudlerlab/errors.hpp"

namespace sudlerlab {

namespace {

constexpr std::int64_t kMaxDenominator = std::int64_t{1} << 62;

template <class Fn>
auto with_phase(const Target& t, Fn&& fn) {
  if (const auto* r = std::get_if<Rational>(&t)) {
    const SmallFraction f = small_fraction(*r);
    return fn(RationalPhase(f.a, f.b));
  }
  return fn(phase_of(std::get<IrrationalTarget>(t)));
}

long double log_of(const BigInt& b) {
  if (b.fits_slong_p()) return std::log(static_cast<long double>(b.get_si()));
  return std::log(static_cast<long double>(b.get_d()));
}

SmallFraction convergent_fraction(const ConvergentTable& table, std::size_t k) {
  if (k > table.k_max()) throw RangeError("convergent index beyond the table");
  return small_fraction(Rational::make(table[k].p, table[k].q));
}

}  // namespace

SmallFraction small_fraction(const Rational& x) {
  if (x.den >= kMaxDenominator)
    throw RangeError("fraction " + x.to_string() + " exceeds the 62-bit kernel range");
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), x.num.get_mpz_t(), x.den.get_mpz_t());
  return {r.get_si(), x.den.get_si()};
}

double identity_tolerance(double b) { return b <= 1e5 ? 1e-9 : 1e-6; }

FixedPhase phase_of(const Real& alpha) { return FixedPhase(fractional_phase(alpha)); }

FixedPhase phase_of(const IrrationalTarget& t) {
  return phase_of(evaluate_surd(t.alpha, std::max(t.precision_bits, 192u)));
}

LogSine<RationalPhase> log_source(const SmallFraction& x) {
  return LogSine<RationalPhase>(RationalPhase(x.a, x.b));
}

LogSine<FixedPhase> log_source(const IrrationalTarget& t) {
  return LogSine<FixedPhase>(phase_of(t));
}

double log_sin_factor(double x) {
  const double frac = x - std::floor(x);
  if (frac == 0.0) throw SingularFactorError(0);
  return log_two_sin_pi(std::min(frac, 1.0 - frac));
}

double log_sin_factor(std::uint64_t n, const Rational& x) {
  const SmallFraction f = small_fraction(x);
  const RationalPhase ph(f.a, f.b);
  const ReducedPhase r = ph.reduce(ph.residue_at(n));
  if (r.zero) throw SingularFactorError(n);
  return log_two_sin_pi(r.y);
}

LogProductStream sudler_stream(const Target& target, std::uint64_t n_max, const ScanConfig& cfg) {
  LogProductStream s{target, n_max, cfg.chunk_size, {}};
  s.values = with_phase(target, [&](auto ph) {
    return prefix_values(LogSine<decltype(ph)>(ph), n_max, cfg);
  });
  return s;
}

StreamSummary sudler_summary(const Target& target, std::uint64_t n_max,
                             const std::vector<double>& weights, const ScanConfig& cfg) {
  return with_phase(target, [&](auto ph) {
    return summarize(LogSine<decltype(ph)>(ph), n_max, weights, cfg);
  });
}

long double jones_F(const Rational& x, const ScanConfig& cfg) {
  const SmallFraction f = small_fraction(x);
  return summarize(log_source(f), static_cast<std::uint64_t>(f.b - 1), {2.0}, cfg)
      .log_sum_exp[0];
}

long double power_sum(const Target& target, double c, std::uint64_t n_max,
                      const ScanConfig& cfg) {
  if (!(c > 0)) throw DomainError("power sum needs c > 0");
  return sudler_summary(target, n_max, {c}, cfg).log_sum_exp[0] / c;
}

ExtremeReport extremes(const Rational& x, const ScanConfig& cfg) {
  const SmallFraction f = small_fraction(x);
  const StreamSummary s = summarize(log_source(f), static_cast<std::uint64_t>(f.b - 1), {}, cfg);
  return {s.max, s.argmax, s.min, s.argmin, log_of(x.den)};
}

long double reflection_check(const Rational& x, std::uint64_t N, const ScanConfig& cfg) {
  const SmallFraction f = small_fraction(x);
  const auto b = static_cast<std::uint64_t>(f.b);
  if (N >= b) throw RangeError("reflection needs N < b");
  const auto v = prefix_values(log_source(f), b - 1, cfg);
  return v[N] + v[b - N - 1] - log_of(x.den);
}

long double reflection_sweep(const Rational& x, const ScanConfig& cfg) {
  const SmallFraction f = small_fraction(x);
  const auto b = static_cast<std::uint64_t>(f.b);
  const auto v = prefix_values(log_source(f), b - 1, cfg);
  const long double log_b = log_of(x.den);
  long double worst = 0;
  for (std::uint64_t N = 0; N < b; ++N)
    worst = std::max(worst, std::fabs(v[N] + v[b - N - 1] - log_b));
  return worst;
}

long double average_log_check(const Rational& x, const ScanConfig& cfg) {
  const SmallFraction f = small_fraction(x);
  const StreamSummary s = summarize(log_source(f), static_cast<std::uint64_t>(f.b - 1), {}, cfg);
  return s.sum / static_cast<long double>(f.b) - log_of(x.den) / 2;
}

long double cotangent_sum(const Target& target, std::uint64_t N, const ScanConfig& cfg) {
  return with_phase(target, [&](auto ph) {
    return summarize(Cotangent<decltype(ph)>(ph), N, {}, cfg).last;
  });
}

double cotangent_bound(const ConvergentTable& table, std::size_t k) {
  return (124.0 + 24.0 * std::log(static_cast<double>(table.A(k)))) * table[k].q.get_d();
}

CotangentReport cotangent_sweep(const ConvergentTable& table, std::size_t k,
                                const ScanConfig& cfg) {
  const SmallFraction f = convergent_fraction(table, k);
  const Cotangent<RationalPhase> src(RationalPhase(f.a, f.b));
  const StreamSummary s = summarize(src, static_cast<std::uint64_t>(f.b - 1), {}, cfg);
  CotangentReport rep;
  rep.k = k;
  const bool top = std::fabs(s.max) >= std::fabs(s.min);
  rep.max_abs = top ? std::fabs(s.max) : std::fabs(s.min);
  rep.worst_N = top ? s.argmax : s.argmin;
  rep.bound = cotangent_bound(table, k);
  rep.within = rep.max_abs <= rep.bound;
  return rep;
}

namespace {

TransferReport transfer_scan(const ConvergentTable& table, std::size_t k, std::uint64_t n_max,
                             bool last_only, const ScanConfig& cfg) {
  if (k < 1) throw RangeError("transfer needs k >= 1");
  const SmallFraction f = convergent_fraction(table, k);
  const DifferenceSource src(LogSine<FixedPhase>(phase_of(table.alpha())),
                             LogSine<RationalPhase>(RationalPhase(f.a, f.b)));
  const StreamSummary s = summarize(src, n_max, {}, cfg);
  TransferReport rep;
  rep.k = k;
  if (last_only) {
    rep.residual = s.last;
    rep.worst_N = n_max;
  } else {
    const bool top = std::fabs(s.max) >= std::fabs(s.min);
    rep.residual = top ? std::fabs(s.max) : std::fabs(s.min);
    rep.worst_N = top ? s.argmax : s.argmin;
  }
  const std::int64_t next_a = table.partial_quotient(k + 1);
  rep.bound = next_a > 0 ? std::log(static_cast<double>(table.A(k))) / static_cast<double>(next_a)
                         : 0.0;
  rep.ratio = rep.bound > 0 ? static_cast<double>(std::fabs(rep.residual)) / rep.bound : 0.0;
  return rep;
}

}  // namespace

TransferReport transfer_check(const ConvergentTable& table, std::size_t k, std::uint64_t N,
                              const ScanConfig& cfg) {
  if (BigInt(static_cast<unsigned long>(N)) >= table[k].q) throw RangeError("transfer needs N < q_k");
  return transfer_scan(table, k, N, true, cfg);
}

TransferReport transfer_sweep(const ConvergentTable& table, std::size_t k,
                              const ScanConfig& cfg) {
  const auto q = static_cast<std::uint64_t>(convergent_fraction(table, k).b);
  return transfer_scan(table, k, q - 1, false, cfg);
}

LubinskyExponents lubinsky_exponents(double K_inf, double lambda) {
  if (!(lambda > 0)) throw DomainError("lambda must be positive");
  if (K_inf < lambda) throw DomainError("K_inf below lambda contradicts the trivial lower bound");
  const double c2 = K_inf / lambda;
  return {c2 - 1.0, c2};
}

namespace {

void require_single_digit_family(const QuadraticIrrational& alpha) {
  if (alpha.a0() != 0 || alpha.s() != 0 || alpha.p() != 1)
    throw FormError("h along convergents is only defined here for [0; (a)]");
}

}  // namespace

long double zagier_h(const QuadraticIrrational& alpha, std::size_t k, const ScanConfig& cfg) {
  require_single_digit_family(alpha);
  if (k < 1) throw RangeError("h needs k >= 1");
  const ConvergentTable t = build_convergents(alpha, k);
  return jones_F(Rational::make(t[k].p, t[k].q), cfg) -
         jones_F(Rational::make(t[k - 1].p, t[k - 1].q), cfg);
}

std::vector<HStep> zagier_h_sequence(const QuadraticIrrational& alpha, std::size_t k_max,
                                     const ScanConfig& cfg) {
  require_single_digit_family(alpha);
  const ConvergentTable t = build_convergents(alpha, k_max);
  std::vector<HStep> out;
  long double prev = jones_F(Rational::make(t[0].p, t[0].q), cfg);
  long double total = 0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const long double cur = jones_F(Rational::make(t[k].p, t[k].q), cfg);
    total += cur - prev;
    out.push_back({k, cur - prev, total / static_cast<long double>(k)});
    prev = cur;
  }
  return out;
}

}  // namespace sudlerlab
