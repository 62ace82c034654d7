#include "sudlerlab/real.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>

namespace sudlerlab {

namespace {

mpfr_prec_t joint_precision(const Real& a, const Real& b) {
  return std::max(mpfr_get_prec(a.get()), mpfr_get_prec(b.get()));
}

}  // namespace

Real::Real(unsigned bits) {
  mpfr_init2(v_, static_cast<mpfr_prec_t>(std::max(bits, 2u)));
  mpfr_set_zero(v_, 1);
}

Real::Real(long value, unsigned bits) : Real(bits) { mpfr_set_si(v_, value, MPFR_RNDN); }

Real::Real(const BigInt& value, unsigned bits) : Real(bits) {
  mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
}

Real Real::from_long_double(long double value, unsigned bits) {
  Real r(bits);
  mpfr_set_ld(r.v_, value, MPFR_RNDN);
  return r;
}

Real Real::pi(unsigned bits) {
  Real r(bits);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

Real::Real(const Real& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) mpfr_swap(v_, other.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

BigInt Real::round_to_int() const {
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
  return z;
}

BigInt Real::floor_to_int() const {
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
  return z;
}

std::string Real::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

Real& Real::operator+=(const Real& o) { return *this = *this + o; }
Real& Real::operator-=(const Real& o) { return *this = *this - o; }
Real& Real::operator*=(const Real& o) { return *this = *this * o; }
Real& Real::operator/=(const Real& o) { return *this = *this / o; }

Real operator+(const Real& a, const Real& b) {
  Real r(static_cast<unsigned>(joint_precision(a, b)));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r(static_cast<unsigned>(joint_precision(a, b)));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r(static_cast<unsigned>(joint_precision(a, b)));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r(static_cast<unsigned>(joint_precision(a, b)));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator-(const Real& a) {
  Real r(a.precision());
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, long b) {
  Real r(a.precision());
  mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, long b) {
  Real r(a.precision());
  mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, long b) {
  Real r(a.precision());
  mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, long b) {
  Real r(a.precision());
  mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const BigInt& b) {
  Real r(a.precision());
  mpfr_mul_z(r.v_, a.v_, b.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const BigInt& b) {
  Real r(a.precision());
  mpfr_div_z(r.v_, a.v_, b.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const BigInt& b) {
  Real r(a.precision());
  mpfr_sub_z(r.v_, a.v_, b.get_mpz_t(), MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const Real& a, long b) {
  if (mpfr_nan_p(a.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.v_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real floor(const Real& x) {
  Real r(x.precision());
  mpfr_floor(r.get(), x.get());
  return r;
}

Real ldexp(const Real& x, long exponent) {
  Real r(x.precision());
  mpfr_mul_2si(r.get(), x.get(), exponent, MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long exponent) {
  Real r(x.precision());
  mpfr_pow_si(r.get(), x.get(), exponent, MPFR_RNDN);
  return r;
}

u128 to_u128(const BigInt& x) {
  const BigInt mask = (BigInt(1) << 64) - 1;
  const BigInt lo = x & mask;
  const BigInt hi = (x >> 64) & mask;
  return (static_cast<u128>(hi.get_ui()) << 64) | static_cast<u128>(lo.get_ui());
}

BigInt from_u128(u128 x) {
  BigInt hi(static_cast<unsigned long>(x >> 64));
  BigInt lo(static_cast<unsigned long>(x & ~std::uint64_t{0}));
  return (hi << 64) + lo;
}

u128 fractional_phase(const Real& x) {
  const unsigned bits = x.precision() + 130;
  Real widened(bits);
  mpfr_set(widened.get(), x.get(), MPFR_RNDN);
  Real frac = widened - floor(widened);
  BigInt scaled = ldexp(frac, 128).round_to_int();
  // Rounding can land exactly on 2^128, which is the phase 0.
  return to_u128(scaled);
}

}  // namespace sudlerlab
