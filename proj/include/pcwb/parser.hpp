#pragma once

#include <string>

#include "pcwb/ratfunc.hpp"

namespace pcwb::exactmath {

// Parse an ASCII expression over `field` in the named variable.
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' uint)?
//   base   := uint | variable | 'sqrtd' | '(' expr ')' | '-' base
// Throws ParseError with a byte offset on malformed input, Error on
// division by the zero polynomial or 'sqrtd' over Q.
RatFunc parse_ratfunc(const std::string& text, const GroundField& field,
                      const std::string& variable);

// Canonical printer; parse(print(f)) == f and print is a fixed point of
// parse-then-print.
std::string print_ratfunc(const RatFunc& f, const std::string& variable);
std::string print_poly(const Poly& p, const std::string& variable);

} // namespace pcwb::exactmath
