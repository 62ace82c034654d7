#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sudlerlab {

// Base of every error the library raises; callers that only care about
// "did the computation fail" can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Working precision too small for the requested table depth.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// Requested work exceeds the configured factor budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InconsistencyError : public Error {
 public:
  using Error::Error;
};

class InvalidDigitError : public Error {
 public:
  using Error::Error;
};

class CanonicalFormError : public Error {
 public:
  using Error::Error;
};

class FormError : public Error {
 public:
  using Error::Error;
};

class ToleranceUnreachableError : public Error {
 public:
  using Error::Error;
};

// A factor |2 sin(pi x)| with integral x was requested, i.e. the product is
// exactly zero from index n on.
class SingularFactorError : public Error {
 public:
  explicit SingularFactorError(std::uint64_t n)
      : Error("singular factor at n = " + std::to_string(n)), n_(n) {}

  std::uint64_t n() const noexcept { return n_; }

 private:
  std::uint64_t n_;
};

}  // namespace sudlerlab
