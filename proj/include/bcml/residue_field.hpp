#pragma once

#include <memory>
#include <optional>
#include <vector>

namespace bcml {

/// F_{p^k} built from the same defining polynomial as the p-adic context of
/// residue degree k, so residue() of a PadicNumber is an element here.
/// Elements are encoded as integers sum c_i p^i with c_i the theta-coordinates.
class FiniteField {
 public:
  using Elem = long;

  static std::shared_ptr<const FiniteField> get(long p, int k);

  long p() const { return p_; }
  int degree() const { return k_; }
  long size() const { return q_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(long n) const;
  Elem from_coeffs(const std::vector<long>& c) const;
  std::vector<long> coeffs(Elem x) const;
  /// The defining root theta, a generator of the multiplicative group.
  Elem generator() const { return exp_[1 % (q_ - 1)]; }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, long e) const;
  Elem frobenius(Elem a) const { return pow(a, p_); }

  bool is_square(Elem a) const;
  std::optional<Elem> sqrt(Elem a) const;
  /// Smallest d such that a lies in F_{p^d}.
  int degree_of(Elem a) const;

  /// Image of x in F_{p^k} under the Conway-compatible embedding F_{p^d} -> F_{p^k}.
  Elem embed_from(const FiniteField& sub, Elem x) const;

 private:
  FiniteField(long p, int k);

  long p_;
  int k_;
  long q_;
  std::vector<long> poly_;
  std::vector<Elem> exp_;
  std::vector<long> log_;
};

using FieldPtr = std::shared_ptr<const FiniteField>;

/// Polynomials over F_q, coefficients low to high with no trailing zeros
/// (the zero polynomial is empty).
using FqPoly = std::vector<FiniteField::Elem>;

void fq_trim(FqPoly& a);
int fq_degree(const FqPoly& a);
FqPoly fq_add(const FiniteField& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_sub(const FiniteField& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_mul(const FiniteField& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_scale(const FiniteField& F, const FqPoly& a, FiniteField::Elem c);
/// Quotient and remainder of a by b (b nonzero).
std::pair<FqPoly, FqPoly> fq_divmod(const FiniteField& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_gcd(const FiniteField& F, FqPoly a, FqPoly b);
FqPoly fq_monic(const FiniteField& F, const FqPoly& a);
FqPoly fq_derivative(const FiniteField& F, const FqPoly& a);
FiniteField::Elem fq_eval(const FiniteField& F, const FqPoly& a, FiniteField::Elem x);
/// Multiplicity of x as a root of the nonzero polynomial a.
int fq_root_multiplicity(const FiniteField& F, const FqPoly& a, FiniteField::Elem x);
/// Roots of a in F by enumeration, with multiplicities.
std::vector<std::pair<FiniteField::Elem, int>> fq_roots(const FiniteField& F, const FqPoly& a);
FqPoly fq_embed(const FiniteField& to, const FiniteField& from, const FqPoly& a);

}  // namespace bcml
