#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace freelunch {

/// Exact rational number backed by GMP. All prices, probabilities and LP
/// data in the library use this type; there is no floating point in the core.
using Rational = boost::multiprecision::mpq_rational;

/// A state-indexed vector (random variable on a finite space).
using Vec = std::vector<Rational>;

/// Parses "p/q", "p" or "-p/q" (decimal integers, q > 0). Throws
/// std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers are written with denominator 1.
std::string format_rational(const Rational& value);

bool is_zero(const Vec& v);

}  // namespace freelunch
