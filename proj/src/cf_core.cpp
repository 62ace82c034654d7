#include "sudlerlab/cf_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sudlerlab/errors.hpp"

namespace sudlerlab {

Rational Rational::make(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  Rational r{num / g, den / g};
  if (r.den < 0) {
    r.num = -r.num;
    r.den = -r.den;
  }
  return r;
}

std::string Rational::to_string() const { return num.get_str() + "/" + den.get_str(); }

QuadraticIrrational::QuadraticIrrational(std::int64_t a0, std::vector<std::int64_t> preperiod,
                                         std::vector<std::int64_t> period)
    : a0_(a0), preperiod_(std::move(preperiod)), period_(std::move(period)) {
  if (period_.empty()) throw CanonicalFormError("empty period");
  for (auto d : preperiod_)
    if (d < 1) throw CanonicalFormError("partial quotients after a0 must be positive");
  for (auto d : period_)
    if (d < 1) throw CanonicalFormError("partial quotients after a0 must be positive");

  const std::size_t p = period_.size();
  for (std::size_t d = 1; d < p; ++d) {
    if (p % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < p && repeats; ++i) repeats = period_[i] == period_[i - d];
    if (repeats)
      throw CanonicalFormError("period repeats a block of length " + std::to_string(d));
  }
  if (!preperiod_.empty() && preperiod_.back() == period_.back())
    throw CanonicalFormError("pre-period is not minimal: its last digit rotates into the period");
}

std::int64_t QuadraticIrrational::digit(std::size_t k) const {
  if (k == 0) return a0_;
  if (k <= preperiod_.size()) return preperiod_[k - 1];
  return period_[(k - preperiod_.size() - 1) % period_.size()];
}

std::int64_t QuadraticIrrational::max_partial_quotient() const {
  std::int64_t m = *std::max_element(period_.begin(), period_.end());
  for (auto d : preperiod_) m = std::max(m, d);
  return m;
}

std::string QuadraticIrrational::to_string() const {
  std::ostringstream os;
  os << '[' << a0_ << "; ";
  for (auto d : preperiod_) os << d << ", ";
  os << '(';
  for (std::size_t i = 0; i < period_.size(); ++i) os << (i ? ", " : "") << period_[i];
  os << ")]";
  return os.str();
}

std::vector<BigInt> cf_of_rational(const Rational& x) {
  std::vector<BigInt> digits;
  BigInt a = x.num;
  BigInt b = x.den;
  while (b != 0) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    BigInt r = a - q * b;
    digits.push_back(q);
    a = b;
    b = r;
  }
  return digits;
}

Rational rational_from_digits(std::span<const BigInt> digits) {
  if (digits.empty()) throw DomainError("empty continued fraction");
  BigInt p_prev = 1, q_prev = 0;
  BigInt p = digits[0], q = 1;
  for (std::size_t k = 1; k < digits.size(); ++k) {
    BigInt p_next = digits[k] * p + p_prev;
    BigInt q_next = digits[k] * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
  }
  return Rational::make(p, q);
}

namespace {

struct Mat2 {
  BigInt a, b, c, d;
};

Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

// prod_{period} [[a, 1], [1, 0]] = [[P1, P0], [Q1, Q0]].
Mat2 period_matrix(const std::vector<std::int64_t>& period) {
  Mat2 m{1, 0, 0, 1};
  for (auto d : period) m = mul(m, Mat2{BigInt(static_cast<long>(d)), 1, 1, 0});
  return m;
}

double log2_of(const BigInt& x) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

BigInt q_at(const QuadraticIrrational& alpha, std::size_t k) {
  BigInt q_prev = 0, q = 1;
  for (std::size_t j = 1; j <= k; ++j) {
    BigInt next = BigInt(static_cast<long>(alpha.digit(j))) * q + q_prev;
    q_prev = q;
    q = next;
  }
  return q;
}

}  // namespace

Real evaluate_surd(const QuadraticIrrational& alpha, unsigned precision_bits) {
  const unsigned bits = precision_bits + 64;
  const Mat2 m = period_matrix(alpha.period());
  // Tail y = (P1 y + P0) / (Q1 y + Q0), i.e. Q1 y^2 + (Q0 - P1) y - P0 = 0.
  const BigInt lin = m.a - m.d;
  const BigInt disc = lin * lin + 4 * m.c * m.b;
  const Real root = sqrt(Real(disc, bits));
  Real y(bits);
  if (lin >= 0) {
    y = (root + Real(lin, bits)) / (Real(m.c, bits) * 2);
  } else {
    y = Real(m.b, bits) * 2 / (root - Real(lin, bits));
  }
  Real x = y;
  for (std::size_t k = alpha.s(); k >= 1; --k) {
    x = Real(1, bits) / x + alpha.digit(k);
  }
  Real value = Real(1, bits) / x + alpha.a0();
  Real out(precision_bits);
  mpfr_set(out.get(), value.get(), MPFR_RNDN);
  return out;
}

double avg_partial_quotient(const QuadraticIrrational& alpha) {
  const auto& per = alpha.period();
  const double total = std::accumulate(per.begin(), per.end(), 0.0,
                                       [](double acc, std::int64_t d) { return acc + double(d); });
  return total / static_cast<double>(per.size());
}

double lambda_estimate(const QuadraticIrrational& alpha) {
  double a = 1, b = 0, c = 0, d = 1;
  for (auto digit : alpha.period()) {
    const double x = static_cast<double>(digit);
    const double na = a * x + b, nb = a, nc = c * x + d, nd = c;
    a = na;
    b = nb;
    c = nc;
    d = nd;
  }
  const double tr = a + d;
  const double det = (alpha.p() % 2 == 0) ? 1.0 : -1.0;
  const double eta = 0.5 * (tr + std::sqrt(tr * tr - 4.0 * det));
  return std::log(eta) / static_cast<double>(alpha.p());
}

unsigned required_precision_bits(const BigInt& q_k) {
  if (q_k <= 1) return 64;
  return static_cast<unsigned>(std::ceil(2.0 * log2_of(q_k))) + 64;
}

unsigned default_precision_bits(const QuadraticIrrational& alpha, std::size_t k_max) {
  const double lambda = lambda_estimate(alpha);
  const auto by_lambda = static_cast<unsigned>(
      std::ceil(2.0 * static_cast<double>(k_max) * lambda / std::log(2.0)) + 64);
  return std::max({256u, by_lambda, required_precision_bits(q_at(alpha, k_max))});
}

std::int64_t ConvergentTable::partial_quotient(std::size_t k) const {
  if (source_) return source_->digit(k);
  return k <= k_max() ? entries_[k].a : 0;
}

std::optional<BigInt> ConvergentTable::q_next() const {
  if (!source_) return std::nullopt;
  const std::size_t k = k_max();
  const BigInt q_prev = k == 0 ? BigInt(0) : entries_[k - 1].q;
  return BigInt(static_cast<long>(source_->digit(k + 1))) * entries_[k].q + q_prev;
}

std::int64_t ConvergentTable::A(std::size_t k) const {
  std::int64_t m = 0;
  for (std::size_t l = 1; l <= k; ++l) m = std::max(m, partial_quotient(l));
  return 1 + m;
}

namespace {

void fill_deltas(std::vector<ConvergentEntry>& entries, const Real& alpha) {
  for (std::size_t k = 0; k < entries.size(); ++k) {
    Real d = alpha * entries[k].q - entries[k].p;
    entries[k].delta = (k % 2 == 0) ? d : -d;
  }
}

}  // namespace

ConvergentTable build_convergents(const QuadraticIrrational& alpha, std::size_t k_max,
                                  unsigned precision_bits) {
  const unsigned bits = precision_bits ? precision_bits : default_precision_bits(alpha, k_max);
  ConvergentTable t;
  t.source_ = alpha;
  t.precision_bits_ = bits;
  t.entries_.reserve(k_max + 1);

  BigInt p_prev = 1, q_prev = 0;
  BigInt p = alpha.a0(), q = 1;
  t.entries_.push_back({alpha.a0(), p, q, Real(bits)});
  for (std::size_t k = 1; k <= k_max; ++k) {
    const std::int64_t a = alpha.digit(k);
    const BigInt big_a(static_cast<long>(a));
    BigInt p_next = big_a * p + p_prev;
    BigInt q_next = big_a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    t.entries_.push_back({a, p, q, Real(bits)});
  }
  const unsigned needed = required_precision_bits(q);
  if (bits < needed)
    throw PrecisionError("precision " + std::to_string(bits) + " bits is below the " +
                         std::to_string(needed) + " bits needed for q_" +
                         std::to_string(k_max));
  t.alpha_ = evaluate_surd(alpha, bits);
  fill_deltas(t.entries_, t.alpha_);
  return t;
}

ConvergentTable build_convergents(const Rational& x, std::size_t k_max, unsigned precision_bits) {
  const auto digits = cf_of_rational(x);
  k_max = std::min(k_max, digits.size() - 1);
  for (const auto& d : digits)
    if (!d.fits_slong_p()) throw RangeError("partial quotient does not fit in 64 bits");

  BigInt p_prev = 1, q_prev = 0;
  BigInt p = digits[0], q = 1;
  std::vector<ConvergentEntry> entries;
  entries.push_back({digits[0].get_si(), p, q, Real(64)});
  for (std::size_t k = 1; k <= k_max; ++k) {
    BigInt p_next = digits[k] * p + p_prev;
    BigInt q_next = digits[k] * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    entries.push_back({digits[k].get_si(), p, q, Real(64)});
  }
  const unsigned needed = required_precision_bits(q);
  const unsigned bits = precision_bits ? precision_bits : std::max(256u, needed);
  if (bits < needed)
    throw PrecisionError("precision " + std::to_string(bits) + " bits is below the " +
                         std::to_string(needed) + " bits needed for q_" +
                         std::to_string(k_max));
  ConvergentTable t;
  t.precision_bits_ = bits;
  t.alpha_ = Real(x.num, bits) / x.den;
  for (auto& e : entries) e.delta = Real(bits);
  t.entries_ = std::move(entries);
  fill_deltas(t.entries_, t.alpha_);
  return t;
}

std::size_t SpectralData::residue(std::size_t k) const {
  const auto d = static_cast<std::int64_t>(k) - static_cast<std::int64_t>(s) - 1;
  const auto pp = static_cast<std::int64_t>(p);
  return static_cast<std::size_t>(((d % pp) + pp) % pp + 1);
}

std::int64_t SpectralData::block(std::size_t k) const {
  const auto d = static_cast<std::int64_t>(k) - static_cast<std::int64_t>(s) -
                 static_cast<std::int64_t>(residue(k));
  return d / static_cast<std::int64_t>(p);
}

SpectralData spectral(const QuadraticIrrational& alpha, const ConvergentTable& table) {
  SpectralData sd;
  sd.s = alpha.s();
  sd.p = alpha.p();
  if (table.source() != alpha) throw DomainError("table was built for a different irrational");
  if (table.k_max() < sd.s + 3 * sd.p)
    throw RangeError("table must reach k = s + 3p for the spectral fit");

  const unsigned bits = table.precision_bits();
  const Mat2 m = period_matrix(alpha.period());
  sd.trace = m.a + m.d;
  sd.det = (sd.p % 2 == 0) ? 1 : -1;

  const Real tr(sd.trace, bits);
  sd.eta = (tr + sqrt(tr * tr - 4L * sd.det)) / 2L;
  sd.mu = Real(static_cast<long>(sd.det), bits) / sd.eta;
  sd.lambda = log(sd.eta).to_double() / static_cast<double>(sd.p);

  const Real gap = sd.eta - sd.mu;
  const Real q_tol = ldexp(Real(1, bits), -static_cast<long>(bits / 2));

  for (std::size_t r = 1; r <= sd.p; ++r) {
    const std::size_t span = table.k_max() - sd.s - r;
    const long m_last = static_cast<long>(span / sd.p);
    auto idx = [&](long m) { return sd.s + static_cast<std::size_t>(m) * sd.p + r; };

    // The first two blocks solve the 2x2 system with error near one ulp of
    // q; growth by eta^m then keeps the relative error of later blocks small.
    const Real x0(table[idx(0)].q, bits);
    const Real x1(table[idx(1)].q, bits);
    Real C = (x1 - sd.mu * x0) / gap;
    Real D = (sd.eta * x0 - x1) / gap;

    const Real x2(table[idx(m_last)].q, bits);
    const Real predicted = C * pow(sd.eta, m_last) + D * pow(sd.mu, m_last);
    if (abs(predicted - x2) / x2 > q_tol)
      throw InconsistencyError("q-recursion constants fail to predict a third sample (r = " +
                               std::to_string(r) + ")");

    // delta carries about 2 log2(q) fewer correct bits than the working
    // precision, so the verification tolerance follows that loss.
    const Real& delta_first = table[idx(0)].delta;
    const Real& delta_last = table[idx(m_last)].delta;
    Real E = delta_first;
    const long lost = static_cast<long>(required_precision_bits(table[idx(m_last)].q)) - 64 + 8;
    const long good_bits = std::min(static_cast<long>(bits / 2), static_cast<long>(bits) - lost);
    const Real e_tol = ldexp(Real(1, bits), -std::max(good_bits, 16L));
    const Real predicted_delta = E / pow(sd.eta, m_last);
    if (abs(predicted_delta - delta_last) / delta_last > e_tol)
      throw InconsistencyError("delta constants fail to predict a second sample (r = " +
                               std::to_string(r) + ")");

    sd.B.push_back(C * E);
    sd.C.push_back(std::move(C));
    sd.D.push_back(std::move(D));
    sd.E.push_back(std::move(E));

    std::vector<std::int64_t> reversed;
    for (std::size_t j = 0; j < sd.p; ++j) reversed.push_back(alpha.digit(sd.s + r + sd.p - j));
    sd.alpha_rev.emplace_back(0, std::vector<std::int64_t>{}, std::move(reversed));
  }

  sd.kappa_denominator = alpha.max_partial_quotient() + 3;
  sd.kappa = 1.0 / static_cast<double>(sd.kappa_denominator);
  return sd;
}

}  // namespace sudlerlab
