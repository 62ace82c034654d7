#pragma once

#include <compare>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace sudlerlab {

using BigInt = mpz_class;
using u128 = unsigned __int128;

// Owning MPFR value with an explicit, per-object precision.  Binary
// operations produce a result at the larger of the two operand precisions,
// so a computation seeded at N bits stays at N bits without any global
// state.
class Real {
 public:
  explicit Real(unsigned bits = 64);
  Real(long value, unsigned bits);
  Real(const BigInt& value, unsigned bits);
  static Real from_long_double(long double value, unsigned bits);
  static Real pi(unsigned bits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  BigInt round_to_int() const;
  BigInt floor_to_int() const;
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  // Scientific notation with `digits` significant digits.
  std::string to_string(int digits = 20) const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator-(const Real& a);

  friend Real operator+(const Real& a, long b);
  friend Real operator-(const Real& a, long b);
  friend Real operator*(const Real& a, long b);
  friend Real operator/(const Real& a, long b);
  friend Real operator*(const Real& a, const BigInt& b);
  friend Real operator/(const Real& a, const BigInt& b);
  friend Real operator-(const Real& a, const BigInt& b);

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend std::partial_ordering operator<=>(const Real& a, long b);

 private:
  mpfr_t v_;
};

Real sqrt(const Real& x);
Real log(const Real& x);
Real abs(const Real& x);
Real floor(const Real& x);
Real ldexp(const Real& x, long exponent);
Real pow(const Real& x, long exponent);

// frac(x) scaled by 2^128 and rounded: the fixed-point phase used by the
// product kernels.  n * phase (mod 2^128) is then n*x mod 1 to within
// n * 2^-128.
u128 fractional_phase(const Real& x);

u128 to_u128(const BigInt& x);
BigInt from_u128(u128 x);

}  // namespace sudlerlab
