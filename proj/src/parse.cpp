#include "sudlerlab/parse.hpp"

#include <cctype>
#include <charconv>
#include <string>
#include <vector>

#include "sudlerlab/errors.hpp"

namespace sudlerlab {

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool done() {
    skip_space();
    return i_ == s_.size();
  }
  char peek() {
    skip_space();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, i_); }
  std::size_t pos() const { return i_; }

  BigInt integer() {
    skip_space();
    const std::size_t start = i_;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) ++i_;
    const std::size_t digits = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ == digits) {
      i_ = start;
      fail("expected an integer");
    }
    std::string text(s_.substr(start, i_ - start));
    if (text[0] == '+') text.erase(0, 1);
    return BigInt(text);
  }

  std::int64_t small_integer() {
    skip_space();
    const std::size_t start = i_;
    const BigInt v = integer();
    if (!v.fits_slong_p()) {
      i_ = start;
      fail("integer does not fit in 64 bits");
    }
    return v.get_si();
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

Rational parse_rational(std::string_view text) {
  Cursor c(text);
  const BigInt num = c.integer();
  BigInt den = 1;
  if (c.accept('/')) {
    const std::size_t at = c.pos();
    den = c.integer();
    if (den <= 0) throw ParseError("denominator must be positive", at);
  }
  if (!c.done()) c.fail("unexpected trailing input");
  return Rational::make(num, den);
}

QuadraticIrrational parse_quadratic(std::string_view text) {
  Cursor c(text);
  c.expect('[');
  const std::int64_t a0 = c.small_integer();
  std::vector<std::int64_t> pre;
  std::vector<std::int64_t> period;
  if (c.accept(';')) {
    bool first = true;
    while (period.empty()) {
      if (!first) c.expect(',');
      first = false;
      if (c.accept('(')) {
        do {
          period.push_back(c.small_integer());
        } while (c.accept(','));
        c.expect(')');
      } else {
        pre.push_back(c.small_integer());
      }
      if (c.peek() == ']') break;
    }
  }
  if (period.empty()) c.fail("missing parenthesized period");
  c.expect(']');
  if (!c.done()) c.fail("unexpected trailing input");
  return QuadraticIrrational(a0, std::move(pre), std::move(period));
}

ParsedNumber parse_number(std::string_view text) {
  Cursor c(text);
  if (c.peek() == '[') return parse_quadratic(text);
  return parse_rational(text);
}

}  // namespace sudlerlab
