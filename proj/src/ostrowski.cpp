#include "sudlerlab/ostrowski.hpp"

#include <string>

#include "sudlerlab/errors.hpp"

namespace sudlerlab {

namespace {

BigInt upper_limit(const ConvergentTable& table) {
  if (auto next = table.q_next()) return *next;
  return table[table.k_max()].q;
}

}  // namespace

OstrowskiExpansion encode(const BigInt& N, const ConvergentTable& table) {
  if (N < 0) throw RangeError("Ostrowski expansion of a negative integer");
  if (N >= upper_limit(table))
    throw RangeError(N.get_str() + " is too large for a table reaching k = " +
                     std::to_string(table.k_max()));

  OstrowskiExpansion x{N, {}};
  if (N == 0) return x;

  std::size_t top = 0;
  while (top + 1 <= table.k_max() && table[top + 1].q <= N) ++top;
  x.digits.assign(top + 1, 0);
  BigInt rest = N;
  for (std::size_t k = top + 1; k-- > 0;) {
    BigInt b = rest / table[k].q;
    rest -= b * table[k].q;
    x.digits[k] = b.get_si();
  }
  try {
    validate(x, table);
  } catch (const InvalidDigitError& e) {
    throw InconsistencyError(std::string("greedy expansion broke a digit rule: ") + e.what());
  }
  return x;
}

void validate(const OstrowskiExpansion& x, const ConvergentTable& table) {
  if (!x.digits.empty() && x.digits.size() - 1 > table.k_max())
    throw InvalidDigitError("digit vector is longer than the table");
  for (std::size_t k = 0; k < x.digits.size(); ++k) {
    const std::int64_t b = x.digits[k];
    const std::int64_t next_a = table.partial_quotient(k + 1);
    const std::int64_t cap = k == 0 ? next_a - 1 : next_a;
    if (b < 0 || b > cap)
      throw InvalidDigitError("digit b_" + std::to_string(k) + " = " + std::to_string(b) +
                              " outside [0, " + std::to_string(cap) + "]");
    if (k >= 1 && b == next_a && x.digits[k - 1] != 0)
      throw InvalidDigitError("b_" + std::to_string(k) + " is maximal but b_" +
                              std::to_string(k - 1) + " is not zero");
  }
}

BigInt decode(const OstrowskiExpansion& x, const ConvergentTable& table) {
  validate(x, table);
  BigInt N = 0;
  for (std::size_t k = 0; k < x.digits.size(); ++k) N += table[k].q * x.digits[k];
  return N;
}

Real epsilon(std::size_t k, const OstrowskiExpansion& x, const ConvergentTable& table) {
  if (k > table.k_max()) throw RangeError("epsilon index beyond the table");
  Real sum(table.precision_bits());
  for (std::size_t l = x.digits.size(); l-- > k + 1;) {
    if (x.digits[l] == 0) continue;
    const Real term = table[l].delta * static_cast<long>(x.digits[l]);
    if ((k + l) % 2 == 0)
      sum += term;
    else
      sum -= term;
  }
  return sum * table[k].q;
}

}  // namespace sudlerlab
