#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace coneray {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q" or "p" (optional sign, arbitrary precision). Throws
// Error(InputError) on malformed input or zero denominator.
Rational parse_rational(const std::string& s);

// Canonical text form: gcd-reduced, positive denominator, "p" when the
// denominator is one, otherwise "p/q".
std::string format_rational(const Rational& q);

double to_double(const Rational& q);

// Exact square root when q is a square of a rational, nullopt otherwise.
std::optional<Rational> rational_sqrt(const Rational& q);

// Best rational approximation via continued fractions. Stops as soon as the
// approximant is within tol*max(1,|x|) of x or the denominator would exceed
// max_den. Values within tol of an integer snap to that integer.
Rational rationalize(double x, double tol = 1e-12,
                     const BigInt& max_den = BigInt("1000000000000"));

// Continued-fraction approximation with a hard denominator cap and no
// accuracy requirement (used by the exact-certificate ladder).
Rational rationalize_capped(double x, const BigInt& max_den);

}  // namespace coneray
