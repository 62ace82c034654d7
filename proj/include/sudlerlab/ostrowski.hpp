#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sudlerlab/cf_core.hpp"

namespace sudlerlab {

// N = sum_k digits[k] * q_k, little-endian.  N = 0 has no digits.
struct OstrowskiExpansion {
  BigInt N;
  std::vector<std::int64_t> digits;

  std::int64_t digit(std::size_t k) const { return k < digits.size() ? digits[k] : 0; }
};

// Greedy from the largest q_k <= N.  Throws RangeError unless N lies below
// the first denominator past the table.
OstrowskiExpansion encode(const BigInt& N, const ConvergentTable& table);

// Throws InvalidDigitError on a digit out of range or a broken extra rule.
void validate(const OstrowskiExpansion& x, const ConvergentTable& table);
BigInt decode(const OstrowskiExpansion& x, const ConvergentTable& table);

// q_k * sum_{l > k} (-1)^(k+l) b_l delta_l at the table precision.
Real epsilon(std::size_t k, const OstrowskiExpansion& x, const ConvergentTable& table);

}  // namespace sudlerlab
