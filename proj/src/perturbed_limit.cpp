#include "sudlerlab/perturbed_limit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include "sudlerlab/errors.hpp"
#include "sudlerlab/factors.hpp"

namespace sudlerlab {

namespace {

std::uint64_t small_q(const ConvergentTable& table, std::size_t k) {
  if (k > table.k_max()) throw RangeError("convergent index beyond the table");
  if (!table[k].q.fits_ulong_p()) throw RangeError("q_k exceeds 64 bits");
  return table[k].q.get_ui();
}

// log prod_{n=1}^{q} |2 sin(pi (n alpha + shift))|.
long double shifted_product(u128 step, std::uint64_t q, const Real& shift, const ScanConfig& cfg) {
  const LogSine<FixedPhase> src(FixedPhase(step, fractional_phase(shift)));
  return summarize(src, q, {}, cfg).last;
}

// (-1)^k (b delta_k + eps_k(N)/q_k): the shift of the factor for digit
// value b at level k.
Real factor_shift(const ConvergentTable& table, std::size_t k, std::int64_t b,
                  const OstrowskiExpansion& x) {
  Real shift = table[k].delta * static_cast<long>(b) + epsilon(k, x, table) / table[k].q;
  return (k % 2 == 0) ? shift : -shift;
}

}  // namespace

long double perturbed_product(const ConvergentTable& table, std::size_t k, const Real& x,
                              const ScanConfig& cfg) {
  const std::uint64_t q = small_q(table, k);
  Real widened(table.precision_bits());
  mpfr_set(widened.get(), x.get(), MPFR_RNDN);
  Real shift = widened / table[k].q;
  if (k % 2 == 1) shift = -shift;
  return shifted_product(fractional_phase(table.alpha()), q, shift, cfg);
}

long double perturbed_product(const ConvergentTable& table, std::size_t k, double x,
                              const ScanConfig& cfg) {
  return perturbed_product(table, k, Real::from_long_double(x, table.precision_bits()), cfg);
}

long double ostrowski_factorization_check(const ConvergentTable& table, const BigInt& N,
                                          const ScanConfig& cfg) {
  const OstrowskiExpansion x = encode(N, table);
  if (!N.fits_ulong_p()) throw RangeError("N exceeds 64 bits");
  const u128 step = fractional_phase(table.alpha());
  const long double lhs = summarize(LogSine<FixedPhase>(FixedPhase(step)), N.get_ui(), {}, cfg).last;
  long double rhs = 0;
  for (std::size_t k = 0; k < x.digits.size(); ++k)
    for (std::int64_t b = 0; b < x.digits[k]; ++b)
      rhs += shifted_product(step, small_q(table, k), factor_shift(table, k, b, x), cfg);
  return lhs - rhs;
}

long double factorization_sweep(const ConvergentTable& table, std::uint64_t limit,
                                const ScanConfig& cfg) {
  if (limit == 0) return 0;
  const u128 step = fractional_phase(table.alpha());
  const auto plain = prefix_values(LogSine<FixedPhase>(FixedPhase(step)), limit - 1, cfg);

  std::map<std::tuple<std::size_t, std::int64_t, std::uint64_t>, long double> cache;
  long double worst = 0;
  for (std::uint64_t N = 0; N < limit; ++N) {
    const OstrowskiExpansion x = encode(BigInt(static_cast<unsigned long>(N)), table);
    std::uint64_t below = 0;  // sum_{l <= k} b_l q_l
    long double rhs = 0;
    for (std::size_t k = 0; k < x.digits.size(); ++k) {
      const std::uint64_t q = small_q(table, k);
      below += static_cast<std::uint64_t>(x.digits[k]) * q;
      const std::uint64_t above = N - below;
      for (std::int64_t b = 0; b < x.digits[k]; ++b) {
        const auto key = std::make_tuple(k, b, above);
        auto it = cache.find(key);
        if (it == cache.end())
          it = cache.emplace(key, shifted_product(step, q, factor_shift(table, k, b, x), cfg)).first;
        rhs += it->second;
      }
    }
    worst = std::max(worst, std::fabs(plain[N] - rhs));
  }
  return worst;
}

LimitFunctionSpec make_limit_spec(const SpectralData& sd, std::size_t r) {
  if (r < 1 || r > sd.p) throw RangeError("residue index out of range");
  return LimitFunctionSpec{r, sd.B[r - 1], sd.alpha_rev[r - 1]};
}

namespace {

constexpr std::uint64_t kHead = 4096;
constexpr std::uint64_t kCalibrationRef = std::uint64_t{1} << 20;
constexpr std::uint64_t kCalibrationLo = 64;
constexpr std::uint64_t kCalibrationHi = 16384;

double centered_phase(u128 v) { return std::ldexp(static_cast<double>(v), -128) - 0.5; }

}  // namespace

LimitFunction::LimitFunction(LimitFunctionSpec spec, std::uint64_t cap) : spec_(std::move(spec)) {
  b_ = spec_.B.to_double();
  const u128 step = fractional_phase(evaluate_surd(spec_.alpha_r, 192));

  // Partial sums of 2 log(1 - B u_n / n); their tail sets the constant.
  std::vector<long double> partial(kCalibrationRef + 1, 0);
  u128 v = 0;
  for (std::uint64_t n = 1; n <= kCalibrationRef; ++n) {
    v += step;
    partial[n] = partial[n - 1] + 2.0 * std::log1p(-b_ * centered_phase(v) / double(n));
  }
  double worst = 0;
  for (std::uint64_t n = kCalibrationLo; n <= kCalibrationHi; ++n) {
    const double gap = static_cast<double>(std::fabs(partial[kCalibrationRef] - partial[n]));
    worst = std::max(worst, gap * double(n) / std::log(double(n)));
  }
  tail_constant_ = 2.0 * worst;

  n_trunc_ = std::max(spec_.n_trunc, kHead);
  while (tail_estimate(n_trunc_) > spec_.tail_tolerance) {
    n_trunc_ *= 2;
    if (n_trunc_ > cap)
      throw ToleranceUnreachableError("tail tolerance needs more than " + std::to_string(cap) +
                                      " factors");
  }

  u_.resize(n_trunc_);
  v = 0;
  for (std::uint64_t n = 1; n <= n_trunc_; ++n) {
    v += step;
    u_[n - 1] = centered_phase(v);
  }
  precompute();
}

double LimitFunction::tail_estimate(std::uint64_t n) const {
  return tail_constant_ * std::log(double(n)) / double(n);
}

void LimitFunction::precompute() {
  tail_log_d_ = 0;
  tail_w_max_ = 0;
  for (auto& w : tail_w_) w = 0;
  for (std::uint64_t n = kHead + 1; n <= n_trunc_; ++n) {
    const double u = u_[n - 1];
    tail_log_d_ += 2.0 * std::log1p(-b_ * u / double(n));
    const double d = double(n) - b_ * u;
    const double w = 1.0 / (d * d);
    tail_w_max_ = std::max(tail_w_max_, w);
    long double wj = 1;
    for (auto& acc : tail_w_) {
      wj *= w;
      acc += wj;
    }
  }
}

LimitValue LimitFunction::operator()(double x) const {
  LimitValue out;
  const double prefactor = 2.0 * std::numbers::pi * std::fabs(x + b_);
  if (prefactor == 0.0) {
    out.log_value = -INFINITY;
    return out;
  }
  const double c = x + 0.5 * b_;
  const double c2 = c * c;

  long double log_sum = 0;
  const std::uint64_t head = std::min(kHead, n_trunc_);
  for (std::uint64_t n = 1; n <= head; ++n) {
    const double d = 1.0 - b_ * u_[n - 1] / double(n);
    const double f = std::fabs(d * d - c2 / (double(n) * double(n)));
    if (f == 0.0) {
      out.log_value = -INFINITY;
      return out;
    }
    log_sum += std::log(f);
  }

  double series_rest = 0;
  if (c2 * tail_w_max_ < 0.25) {
    log_sum += tail_log_d_;
    long double cj = 1;
    for (int j = 0; j < 4; ++j) {
      cj *= c2;
      log_sum -= cj * tail_w_[j] / (j + 1);
    }
    // sum_{j >= 5} (c^2 w)^j / j, with c^2 w < 1/4.
    series_rest = static_cast<double>(c2 * tail_w_max_ * cj * tail_w_[3] / (5.0 * 0.75));
  } else {
    for (std::uint64_t n = head + 1; n <= n_trunc_; ++n) {
      const double d = 1.0 - b_ * u_[n - 1] / double(n);
      log_sum += std::log(std::fabs(d * d - c2 / (double(n) * double(n))));
    }
  }

  const double n = double(n_trunc_);
  out.log_value = std::log(prefactor) + static_cast<double>(log_sum);
  out.value = std::exp(out.log_value);
  out.tail_bound = tail_estimate(n_trunc_) + 2.0 * c2 / (n - b_ - 1.0) + series_rest;
  return out;
}

std::vector<LimitFunction> make_limit_functions(const SpectralData& sd) {
  std::vector<LimitFunction> out;
  for (std::size_t r = 1; r <= sd.p; ++r) out.emplace_back(make_limit_spec(sd, r));
  return out;
}

IntervalSpec interval_I(const QuadraticIrrational& alpha, const SpectralData& sd, std::size_t r) {
  if (r < 1 || r > sd.p) throw RangeError("residue index out of range");
  const double B = sd.B_of(r);
  const double a = static_cast<double>(alpha.digit(sd.s + r + 1));
  return {r, -(1.0 - sd.kappa / 2) * B, (a - sd.kappa / 2) * B};
}

K0Report observed_k0(const QuadraticIrrational& alpha, const ConvergentTable& table,
                     const SpectralData& sd) {
  K0Report rep;
  rep.per_residue.assign(sd.p, std::nullopt);
  std::vector<std::optional<std::size_t>> last_fail(sd.p);
  std::vector<std::size_t> last_seen(sd.p, 0);
  std::vector<bool> seen(sd.p, false);
  for (std::size_t k = sd.s + 1; k <= table.k_max(); ++k) {
    const std::size_t r = sd.residue(k);
    const IntervalSpec I = interval_I(alpha, sd, r);
    const double qd = (table[k].delta * table[k].q).to_double();
    const double half = (1.0 - sd.kappa) * qd;
    bool ok = true;
    for (std::int64_t b = 0; b < table.partial_quotient(k + 1) && ok; ++b) {
      const double centre = static_cast<double>(b) * qd;
      ok = centre - half >= I.lo && centre + half <= I.hi;
    }
    if (!ok) last_fail[r - 1] = k;
    last_seen[r - 1] = k;
    seen[r - 1] = true;
  }
  std::size_t k0 = 0;
  bool determined = true;
  for (std::size_t i = 0; i < sd.p; ++i) {
    if (!seen[i] || (last_fail[i] && *last_fail[i] == last_seen[i])) {
      determined = false;
      continue;
    }
    const std::size_t first = last_fail[i] ? *last_fail[i] + sd.p : sd.s + i + 1;
    rep.per_residue[i] = first;
    k0 = std::max(k0, first);
  }
  if (determined) rep.k0 = k0;
  return rep;
}

std::vector<ConvergenceRow> convergence_report(const ConvergentTable& table,
                                               const SpectralData& sd, const LimitFunction& G,
                                               const std::vector<double>& x_grid,
                                               const std::vector<std::int64_t>& m_values,
                                               const ScanConfig& cfg) {
  std::vector<ConvergenceRow> rows;
  const std::size_t r = G.spec().r;
  for (const std::int64_t m : m_values) {
    if (m < 0) throw RangeError("block index must be nonnegative");
    const std::size_t k = sd.s + static_cast<std::size_t>(m) * sd.p + r;
    ConvergenceRow row{m, k, table[k].q, 0, 0};
    for (const double x : x_grid) {
      const double P = std::exp(static_cast<double>(perturbed_product(table, k, x, cfg)));
      row.sup_error = std::max(row.sup_error, std::fabs(P - G(x).value));
    }
    const double q = row.q_k.get_d();
    row.rate_envelope = std::pow(q, -0.5) * std::pow(std::log(q), 0.75);
    rows.push_back(std::move(row));
  }
  return rows;
}

long double g_N_product(const ConvergentTable& table, const SpectralData& sd,
                        const std::vector<LimitFunction>& G, const BigInt& N, std::size_t k0) {
  const OstrowskiExpansion x = encode(N, table);
  long double total = 0;
  for (std::size_t k = k0; k < x.digits.size(); ++k) {
    if (x.digits[k] == 0) continue;
    const double qd = (table[k].delta * table[k].q).to_double();
    const double eps = epsilon(k, x, table).to_double();
    const LimitFunction& g = G.at(sd.residue(k) - 1);
    for (std::int64_t b = 0; b < x.digits[k]; ++b) total += g(static_cast<double>(b) * qd + eps).log_value;
  }
  return total;
}

}  // namespace sudlerlab
