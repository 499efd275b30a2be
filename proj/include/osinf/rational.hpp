#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace osinf {

using Integer = mpz_class;
using Rational = mpq_class;

// n! as an exact integer.
Integer factorial(unsigned n);

// Binomial coefficient; zero when k > n. binomial(-1, -1) is taken as 1 so that
// inclusion-exclusion sums starting at the empty set need no special case.
Integer binomial(long n, long k);

// Product (lo+1)(lo+2)...(hi); 1 when hi <= lo.
Integer rising_range(unsigned lo, unsigned hi);

Rational make_rational(long num, long den = 1);

// Parses "p", "p/q" or a plain decimal such as "-0.125" or "1e-3" exactly.
// Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

// Exact rational value of a finite double, recovered from its shortest
// round-trip decimal form (so 0.1 maps to 1/10, not the binary expansion).
Rational rational_from_double(double value);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace osinf
