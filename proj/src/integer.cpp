#include "bcml/integer.hpp"

#include <algorithm>
#include <charconv>

#include "bcml/error.hpp"

namespace bcml {

int valuation(const Integer& n, long p) {
  if (n == 0) fail(ErrorKind::InvalidInput, "valuation of zero");
  Integer q = n;
  Integer pp = p;
  return static_cast<int>(mpz_remove(q.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

int valuation(const Rational& q, long p) {
  return valuation(Integer(q.get_num()), p) - valuation(Integer(q.get_den()), p);
}

Integer power(const Integer& base, unsigned long exponent) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

Integer power(long base, unsigned long exponent) { return power(Integer(base), exponent); }

Integer mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer inverse_mod(const Integer& a, const Integer& m) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    fail(ErrorKind::NonUnit, a.get_str() + " is not invertible modulo " + m.get_str());
  }
  return r;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

int floor_log(long base, const Integer& n) {
  int k = 0;
  Integer b = base;
  while (b <= n) {
    b *= base;
    ++k;
  }
  return k;
}

std::string base_p_digits(const Integer& a, long p, int width) {
  std::string out(static_cast<size_t>(width), '0');
  Integer x = a;
  for (int i = width - 1; i >= 0; --i) {
    Integer r = mod(x, Integer(p));
    long d = r.get_si();
    out[static_cast<size_t>(i)] = static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10));
    x = (x - r) / p;
  }
  return out;
}

Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    Integer v;
    if (s.empty() || v.set_str(std::string(s), 10) != 0) {
      fail(ErrorKind::InvalidInput, "malformed rational '" + std::string(text) + "'");
    }
    return v;
  };
  auto slash = text.find('/');
  Rational q;
  if (slash == std::string_view::npos) {
    q = Rational(parse_int(text));
  } else {
    Integer den = parse_int(text.substr(slash + 1));
    if (den == 0) fail(ErrorKind::InvalidInput, "zero denominator in '" + std::string(text) + "'");
    q = Rational(parse_int(text.substr(0, slash)), den);
  }
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

long binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r.get_si();
}

}  // namespace bcml
