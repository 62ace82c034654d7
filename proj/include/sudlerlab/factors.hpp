#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "sudlerlab/real.hpp"

namespace sudlerlab {

// A point of R/Z folded onto [0, 1/2]: the original phase is y or 1 - y.
struct ReducedPhase {
  double y = 0.0;
  bool upper = false;
  bool zero = false;
};

// log(2 sin(pi y)) for y in (0, 1/2].  Above 1/4 the complement is exact,
// so the cosine form keeps full accuracy near the maximum.
inline double log_two_sin_pi(double y) {
  if (y <= 0.25) return std::log(2.0 * std::sin(std::numbers::pi * y));
  return std::log(2.0 * std::cos(std::numbers::pi * (0.5 - y)));
}

// cot(pi y) for y in (0, 1/2]; exactly 0 at y = 1/2.
inline double cot_pi(double y) {
  if (y <= 0.25) return 1.0 / std::tan(std::numbers::pi * y);
  return std::tan(std::numbers::pi * (0.5 - y));
}

// n*a/b mod 1 with the residue kept as an exact integer.
class RationalPhase {
 public:
  RationalPhase(std::int64_t a, std::int64_t b)
      : a_(static_cast<std::uint64_t>(((a % b) + b) % b)), b_(static_cast<std::uint64_t>(b)) {}

  std::uint64_t residue_at(std::uint64_t n) const {
    return static_cast<std::uint64_t>(static_cast<u128>(n % b_) * a_ % b_);
  }
  std::uint64_t step() const { return a_; }
  std::uint64_t modulus() const { return b_; }

  ReducedPhase reduce(std::uint64_t r) const {
    if (r == 0) return {0.0, false, true};
    const bool upper = 2 * r > b_;
    const std::uint64_t folded = upper ? b_ - r : r;
    return {static_cast<double>(folded) / static_cast<double>(b_), upper, false};
  }

  class Cursor {
   public:
    Cursor(const RationalPhase& ph, std::uint64_t n) : ph_(&ph), r_(ph.residue_at(n)) {}
    ReducedPhase next() {
      const ReducedPhase out = ph_->reduce(r_);
      r_ += ph_->a_;
      if (r_ >= ph_->b_) r_ -= ph_->b_;
      return out;
    }

   private:
    const RationalPhase* ph_;
    std::uint64_t r_;
  };
  Cursor cursor(std::uint64_t n) const { return Cursor(*this, n); }

 private:
  std::uint64_t a_;
  std::uint64_t b_;
};

// offset + n*step in units of 2^-128, exact modular arithmetic.
class FixedPhase {
 public:
  FixedPhase(u128 step, u128 offset = 0) : step_(step), offset_(offset) {}

  u128 at(std::uint64_t n) const { return offset_ + static_cast<u128>(n) * step_; }

  static ReducedPhase reduce(u128 v) {
    if (v == 0) return {0.0, false, true};
    const u128 half = static_cast<u128>(1) << 127;
    const bool upper = v > half;
    const u128 folded = upper ? static_cast<u128>(0) - v : v;
    return {std::ldexp(static_cast<double>(folded), -128), upper, false};
  }

  class Cursor {
   public:
    Cursor(const FixedPhase& ph, std::uint64_t n) : step_(ph.step_), v_(ph.at(n)) {}
    ReducedPhase next() {
      const ReducedPhase out = reduce(v_);
      v_ += step_;
      return out;
    }

   private:
    u128 step_;
    u128 v_;
  };
  Cursor cursor(std::uint64_t n) const { return Cursor(*this, n); }

 private:
  u128 step_;
  u128 offset_;
};

// Factor sources: value(n) and sequential cursors yielding log|2 sin| or
// cot at consecutive n.  A singular factor comes out as NaN.
template <class Phase>
class LogSine {
 public:
  explicit LogSine(Phase ph) : ph_(std::move(ph)) {}

  class Cursor {
   public:
    Cursor(const Phase& ph, std::uint64_t n) : c_(ph.cursor(n)) {}
    double next() {
      const ReducedPhase r = c_.next();
      return r.zero ? std::numeric_limits<double>::quiet_NaN() : log_two_sin_pi(r.y);
    }

   private:
    typename Phase::Cursor c_;
  };
  Cursor cursor(std::uint64_t n) const { return Cursor(ph_, n); }
  double at(std::uint64_t n) const { return cursor(n).next(); }

 private:
  Phase ph_;
};

template <class Phase>
class Cotangent {
 public:
  explicit Cotangent(Phase ph) : ph_(std::move(ph)) {}

  class Cursor {
   public:
    Cursor(const Phase& ph, std::uint64_t n) : c_(ph.cursor(n)) {}
    double next() {
      const ReducedPhase r = c_.next();
      if (r.zero) return std::numeric_limits<double>::quiet_NaN();
      const double v = cot_pi(r.y);
      return r.upper ? -v : v;
    }

   private:
    typename Phase::Cursor c_;
  };
  Cursor cursor(std::uint64_t n) const { return Cursor(ph_, n); }
  double at(std::uint64_t n) const { return cursor(n).next(); }

 private:
  Phase ph_;
};

// Termwise difference of two sources.
template <class First, class Second>
class DifferenceSource {
 public:
  DifferenceSource(First f, Second s) : f_(std::move(f)), s_(std::move(s)) {}

  class Cursor {
   public:
    Cursor(const DifferenceSource& d, std::uint64_t n) : f_(d.f_.cursor(n)), s_(d.s_.cursor(n)) {}
    double next() { return f_.next() - s_.next(); }

   private:
    typename First::Cursor f_;
    typename Second::Cursor s_;
  };
  Cursor cursor(std::uint64_t n) const { return Cursor(*this, n); }
  double at(std::uint64_t n) const { return cursor(n).next(); }

 private:
  First f_;
  Second s_;
};

}  // namespace sudlerlab
