#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace aind {

/// Arbitrary-precision rational; every probability in the library is one of these.
using Rational = mpq_class;

/// Parses "p/q", an integer, or an exact decimal such as "0.25" or "1e-3".
/// Throws InputError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form ("p" when the denominator is 1).
std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact binary value of a finite double.
Rational from_double(double x);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace aind
