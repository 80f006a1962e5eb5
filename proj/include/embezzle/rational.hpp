#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace embezzle {

using Integer = mpz_class;
using Rational = mpq_class;

// Accepts "p", "p/q" and plain decimals such as "0.25" or "-1.5e-3".
Rational parse_rational(std::string_view text);

std::string to_string(const Integer& z);
std::string to_string(const Rational& q);

// Rational power with a signed exponent; base must be nonzero when e < 0.
Rational pow(const Rational& base, long e);

Integer gcd(const Integer& a, const Integer& b);
long gcd(const std::vector<long>& values);

// Exact rational for the dyadic value of a finite double.
Rational from_double(double x);

}  // namespace embezzle
