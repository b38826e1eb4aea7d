#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace bcml {

using Integer = mpz_class;
using Rational = mpq_class;

/// v_p(n) for n != 0.
int valuation(const Integer& n, long p);
/// v_p(q) for q != 0; negative when p divides the denominator.
int valuation(const Rational& q, long p);

Integer power(const Integer& base, unsigned long exponent);
Integer power(long base, unsigned long exponent);

/// Least non-negative residue of a modulo m (m > 0).
Integer mod(const Integer& a, const Integer& m);
/// Inverse of a modulo m; throws NonUnit when gcd(a, m) != 1.
Integer inverse_mod(const Integer& a, const Integer& m);

bool is_prime(long n);

/// floor(log_base(n)) for n >= 1.
int floor_log(long base, const Integer& n);

/// Base-p digits of a in [0, p^width), most significant first, zero padded.
std::string base_p_digits(const Integer& a, long p, int width);

/// Parses "c/d" or "c" into a reduced rational; throws InvalidInput.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

long binomial(long n, long k);

}  // namespace bcml
