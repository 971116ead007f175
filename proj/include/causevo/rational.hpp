#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace causevo {

/// Exact probability weights. Every measure in the library stores its masses
/// as rationals; floating point only enters through the optional float-mode
/// feasibility solver.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "p/q", an integer, or a plain decimal such as "0.125" or "1e-3"
/// into an exact rational. Throws InputError on malformed text.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string format_rational(const Rational& r);

/// Exact conversion of a finite double (every double is a dyadic rational).
Rational rational_from_double(double v);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace causevo
