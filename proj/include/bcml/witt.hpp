#pragma once

#include <map>
#include <string>
#include <vector>

#include "bcml/error.hpp"
#include "bcml/padic.hpp"
#include "bcml/residue_field.hpp"

namespace bcml {

PadicNumber operator+(const PadicNumber& a, const Integer& c);

/// Multivariate polynomial with exact integer coefficients.
class IntPolynomial {
 public:
  using Exponents = std::vector<int>;

  explicit IntPolynomial(std::vector<std::string> variables);
  static IntPolynomial constant(std::vector<std::string> variables, const Integer& c);
  static IntPolynomial variable(std::vector<std::string> variables, size_t index);

  const std::vector<std::string>& variables() const { return vars_; }
  size_t arity() const { return vars_.size(); }
  const std::map<Exponents, Integer>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  Integer coefficient(const Exponents& e) const;

  void add_term(const Exponents& e, const Integer& c);

  IntPolynomial operator-() const;
  IntPolynomial& operator+=(const IntPolynomial& o);
  IntPolynomial& operator-=(const IntPolynomial& o);
  friend IntPolynomial operator+(IntPolynomial a, const IntPolynomial& b) { return a += b; }
  friend IntPolynomial operator-(IntPolynomial a, const IntPolynomial& b) { return a -= b; }
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  IntPolynomial operator*(const Integer& c) const;
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  IntPolynomial pow(unsigned int e) const;
  /// Exact division of every coefficient; DivisionNotExact otherwise.
  IntPolynomial divide_exact(const Integer& d) const;
  /// Substitutes images[i] for variable i; all images share one variable list.
  IntPolynomial substitute(const std::vector<IntPolynomial>& images) const;
  /// The same polynomial viewed in a larger variable list whose prefix is ours.
  IntPolynomial extend(const std::vector<std::string>& variables) const;

  template <class T>
  T evaluate(const std::vector<T>& values, const T& zero) const {
    if (values.size() != vars_.size()) {
      fail(ErrorKind::InvalidInput, "evaluation point has the wrong number of coordinates");
    }
    T acc = zero;
    for (const auto& [e, c] : terms_) {
      T term = zero + c;
      for (size_t i = 0; i < e.size(); ++i) {
        for (int k = 0; k < e[i]; ++k) term = term * values[i];
      }
      acc = acc + term;
    }
    return acc;
  }

  std::string to_string() const;

 private:
  void check_vars(const IntPolynomial& o) const;

  std::vector<std::string> vars_;
  std::map<Exponents, Integer> terms_;
};

/// C_p(X, Y) = (X^p + Y^p - (X+Y)^p) / p.
IntPolynomial cp_polynomial(long p);
/// C_p evaluated without dividing, so no precision is lost.
PadicNumber cp_evaluate(const PadicNumber& x, const PadicNumber& y);
Integer cp_evaluate(long p, const Integer& x, const Integer& y);

/// Length-2 p-typical Witt vector over Z_q/p^N or over Z (symbolic mode).
template <class T>
struct WittPair {
  T a0;
  T a1;
};

WittPair<PadicNumber> witt_add(const WittPair<PadicNumber>& u, const WittPair<PadicNumber>& v);
WittPair<PadicNumber> witt_mul(const WittPair<PadicNumber>& u, const WittPair<PadicNumber>& v);
WittPair<PadicNumber> ghost(const WittPair<PadicNumber>& u);
WittPair<Integer> witt_add(long p, const WittPair<Integer>& u, const WittPair<Integer>& v);
WittPair<Integer> witt_mul(long p, const WittPair<Integer>& u, const WittPair<Integer>& v);
WittPair<Integer> ghost(long p, const WittPair<Integer>& u);

/// delta(x) = (sigma(x) - x^p) / p, at precision N - 1.
PadicNumber delta_std(const PadicNumber& x);
/// delta(n) = (n - n^p) / p on the integers.
Integer delta_std(long p, const Integer& n);
/// phi(x) = x^p + p delta(x). Equal to sigma(x), known to the full precision N.
PadicNumber frobenius_lift(const PadicNumber& x);

/// x -> (x, delta x), the ring homomorphism into W_1 attached to delta.
WittPair<PadicNumber> witt_section(const PadicNumber& x);

/// Variable names used by prolong for the derivative coordinates.
std::vector<std::string> jet_variables(const std::vector<std::string>& base);

/// delta f(x, x') = [f(x^p + p x') - f(x)^p] / p in variables x_1..x_n, x_1'..x_n'.
IntPolynomial prolong(const IntPolynomial& f, long p);

struct JetPoint {
  FieldPtr field;
  std::vector<FiniteField::Elem> base;
  std::vector<FiniteField::Elem> derivative;
};

/// ((point mod p), (delta(point) mod p)); NotOnVariety unless every
/// equation vanishes at the point to full precision. With verify set, the
/// prolonged equations are also checked at the output.
JetPoint nabla(const std::vector<PadicNumber>& point, const std::vector<IntPolynomial>& system,
               bool verify = true);

}  // namespace bcml
