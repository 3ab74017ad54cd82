#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cmreflex {

using Integer = mpz_class;
using Rational = mpq_class;

// Accepts "n", "-n" or "p/q"; the result is canonicalized.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
// n/d in lowest terms (d nonzero).
Rational frac(const Integer& n, const Integer& d);
std::string to_string(const Integer& z);

Integer floor_div(const Integer& a, const Integer& b);
Integer ceil_div(const Integer& a, const Integer& b);
Integer floor(const Rational& q);
Integer ceil(const Rational& q);
Integer mod(const Integer& a, const Integer& m);  // result in [0, m)
Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
Integer pow(const Integer& b, unsigned long e);
Rational pow(const Rational& b, long e);
Rational abs(const Rational& q);

// Smallest k with k*k >= x (x >= 0).
Integer isqrt_ceil(const Integer& x);
// Rational r with r >= sqrt(x) and r - sqrt(x) <= 2^-bits (roughly).
Rational sqrt_upper(const Rational& x, unsigned bits);

bool is_probable_prime(const Integer& n);
std::vector<std::pair<Integer, unsigned>> factor_integer(const Integer& n);
std::vector<long> primes_up_to(long bound);

}  // namespace cmreflex
