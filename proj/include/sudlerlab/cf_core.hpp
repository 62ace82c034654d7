#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sudlerlab/real.hpp"

namespace sudlerlab {

// Reduced fraction num/den with den >= 1.
struct Rational {
  BigInt num;
  BigInt den;

  static Rational make(const BigInt& num, const BigInt& den);
  std::string to_string() const;
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

// Eventually periodic continued fraction [a0; a1..as, (b1..bp)].
//
// Construction rejects non-canonical input: a period that repeats a
// shorter block, or a pre-period whose last digit could be rotated into
// the period.  The residue classes [k] and the reversed-period irrationals
// are defined relative to the stated period, so the input is never
// silently rewritten.
class QuadraticIrrational {
 public:
  QuadraticIrrational(std::int64_t a0, std::vector<std::int64_t> preperiod,
                      std::vector<std::int64_t> period);

  std::int64_t a0() const { return a0_; }
  const std::vector<std::int64_t>& preperiod() const { return preperiod_; }
  const std::vector<std::int64_t>& period() const { return period_; }
  std::size_t s() const { return preperiod_.size(); }
  std::size_t p() const { return period_.size(); }

  // a_k for any k >= 0.
  std::int64_t digit(std::size_t k) const;
  // max_{k >= 1} a_k.
  std::int64_t max_partial_quotient() const;
  // "[a0; a1, ..., (b1, ..., bp)]"
  std::string to_string() const;

  friend bool operator==(const QuadraticIrrational&, const QuadraticIrrational&) = default;

 private:
  std::int64_t a0_;
  std::vector<std::int64_t> preperiod_;
  std::vector<std::int64_t> period_;
};

// Canonical expansion of a rational; the last digit exceeds 1 unless the
// expansion is the single digit [a0].
std::vector<BigInt> cf_of_rational(const Rational& x);
Rational rational_from_digits(std::span<const BigInt> digits);

// Value of the periodic expansion: the purely periodic tail is the positive
// root of the integer quadratic given by its transfer matrix, and the
// pre-period is folded in backwards.
Real evaluate_surd(const QuadraticIrrational& alpha, unsigned precision_bits);

double avg_partial_quotient(const QuadraticIrrational& alpha);

// Growth exponent log(eta)/p from a double-precision pass.
double lambda_estimate(const QuadraticIrrational& alpha);

// max(256, ceil(2 k_max lambda / ln 2) + 64), raised if a long pre-period
// makes q_{k_max} larger than the estimate suggests.
unsigned default_precision_bits(const QuadraticIrrational& alpha, std::size_t k_max);

// Smallest working precision for which delta_k is meaningful at depth k.
unsigned required_precision_bits(const BigInt& q_k);

struct ConvergentEntry {
  std::int64_t a;
  BigInt p;
  BigInt q;
  // (-1)^k (q_k alpha - p_k)
  Real delta;
};

class ConvergentTable {
 public:
  std::size_t k_max() const { return entries_.size() - 1; }
  const ConvergentEntry& operator[](std::size_t k) const { return entries_.at(k); }
  const std::vector<ConvergentEntry>& entries() const { return entries_; }
  const Real& alpha() const { return alpha_; }
  unsigned precision_bits() const { return precision_bits_; }
  const std::optional<QuadraticIrrational>& source() const { return source_; }
  bool is_rational() const { return !source_.has_value(); }

  // a_k, including indices beyond the table for quadratic irrationals.
  std::int64_t partial_quotient(std::size_t k) const;
  // q_{k_max+1} when the expansion continues past the table.
  std::optional<BigInt> q_next() const;
  // A_k = 1 + max_{1 <= l <= k} a_l  (A_0 = 1).
  std::int64_t A(std::size_t k) const;

 private:
  friend ConvergentTable build_convergents(const QuadraticIrrational&, std::size_t, unsigned);
  friend ConvergentTable build_convergents(const Rational&, std::size_t, unsigned);

  std::vector<ConvergentEntry> entries_;
  Real alpha_;
  unsigned precision_bits_ = 0;
  std::optional<QuadraticIrrational> source_;
};

// precision_bits == 0 selects default_precision_bits.  Throws PrecisionError
// when precision_bits < 2 log2(q_{k_max}) + 64.
ConvergentTable build_convergents(const QuadraticIrrational& alpha, std::size_t k_max,
                                  unsigned precision_bits = 0);
// k_max is capped at the length of the expansion.
ConvergentTable build_convergents(const Rational& x, std::size_t k_max,
                                  unsigned precision_bits = 0);

struct SpectralData {
  std::size_t s = 0;
  std::size_t p = 0;
  BigInt trace;
  int det = 1;
  Real eta;
  Real mu;
  double lambda = 0.0;
  // Index r-1 holds the constant of residue class r.
  std::vector<Real> C;
  std::vector<Real> D;
  std::vector<Real> E;
  std::vector<Real> B;
  std::vector<QuadraticIrrational> alpha_rev;
  std::int64_t kappa_denominator = 0;
  double kappa = 0.0;

  // [k] in 1..p: k = s + m p + [k].
  std::size_t residue(std::size_t k) const;
  // m with k = s + m p + [k]; negative inside the pre-period.
  std::int64_t block(std::size_t k) const;
  double B_of(std::size_t r) const { return B.at(r - 1).to_double(); }
};

// Requires the table to reach k = s + 3p (two samples per residue class to
// solve, one to verify).
SpectralData spectral(const QuadraticIrrational& alpha, const ConvergentTable& table);

}  // namespace sudlerlab
