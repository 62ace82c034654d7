#pragma once

#include <string_view>
#include <variant>

#include "sudlerlab/cf_core.hpp"

namespace sudlerlab {

using ParsedNumber = std::variant<Rational, QuadraticIrrational>;

// "a/b", an integer, or "[a0; a1, ..., (b1, ..., bp)]".  Errors are
// ParseError with the offending character offset; a well-formed but
// non-canonical expansion raises CanonicalFormError.
ParsedNumber parse_number(std::string_view text);
Rational parse_rational(std::string_view text);
QuadraticIrrational parse_quadratic(std::string_view text);

}  // namespace sudlerlab
