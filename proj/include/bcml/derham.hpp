#pragma once

#include <string>
#include <vector>

#include "bcml/integer.hpp"
#include "bcml/padic.hpp"
#include "bcml/residue_field.hpp"

namespace bcml {

using IntMatrix = std::vector<std::vector<Integer>>;

/// Exact discriminant of a monic integer polynomial (coefficients low to high).
Integer discriminant(const std::vector<Integer>& f);

/// y^2 = f(x) with f monic of degree 2g+1 and good reduction at an odd prime p.
class HyperellipticCurve {
 public:
  HyperellipticCurve(long p, std::vector<Integer> f_coeffs, int precision, std::string label = {});

  long p() const { return p_; }
  int genus() const { return g_; }
  /// Target absolute precision N.
  int precision() const { return N_; }
  const std::vector<Integer>& f() const { return f_; }
  const ContextPtr& context() const { return ctx_; }
  const Integer& disc() const { return disc_; }
  const std::string& label() const { return label_; }

  bool p_at_least_2g() const { return p_ >= 2 * g_; }
  bool p_exceeds_2g_minus_2() const { return p_ > 2 * g_ - 2; }

  /// f mod p with coefficients in the given extension of F_p.
  FqPoly reduction(const FiniteField& F) const;

 private:
  long p_;
  int g_;
  int N_;
  std::vector<Integer> f_;
  ContextPtr ctx_;
  Integer disc_;
  std::string label_;
};

/// Matrices of F and V = pF^{-1} in the basis x^i dx/y, i < 2g.
/// Column i holds the image of x^i dx/y.
struct FrobeniusStructure {
  long p = 0;
  int genus = 0;
  IntMatrix F;
  IntMatrix V;
  int precision = 0;    // F is known modulo p^precision
  int v_precision = 0;  // V is known modulo p^v_precision
  int working_precision = 0;
  int terms = 0;
  int lost_digits = 0;
};

/// Kedlaya-style computation of the Frobenius matrix. A working precision of 0
/// selects one large enough to reach the curve's target precision.
FrobeniusStructure frobenius_matrix(const HyperellipticCurve& curve, int working_precision = 0);

/// Coefficients of det(T - A) mod m, low to high (division free).
std::vector<Integer> charpoly_mod(const IntMatrix& A, const Integer& m);

IntMatrix matmul_mod(const IntMatrix& A, const IntMatrix& B, const Integer& m);

/// F V = V F = p I modulo p^min(precision, v_precision).
bool fv_identity_holds(const FrobeniusStructure& S);

class CohomologyClass {
 public:
  CohomologyClass(int genus, std::vector<PadicNumber> coords);
  static CohomologyClass basis(int genus, const ContextPtr& ctx, int i);

  int genus() const { return g_; }
  const std::vector<PadicNumber>& coords() const { return coords_; }
  const ContextPtr& context() const { return coords_.front().context(); }
  int precision() const;
  bool is_holomorphic() const;

  CohomologyClass operator+(const CohomologyClass& o) const;
  CohomologyClass operator-(const CohomologyClass& o) const;
  CohomologyClass operator*(const PadicNumber& c) const;
  friend bool operator==(const CohomologyClass& a, const CohomologyClass& b);

 private:
  int g_;
  std::vector<PadicNumber> coords_;
};

/// sigma-semilinear F on classes with coefficients in Z_q.
CohomologyClass frobenius_apply(const FrobeniusStructure& S, const CohomologyClass& eta);
/// sigma^{-1}-semilinear V = pF^{-1}.
CohomologyClass verschiebung_apply(const FrobeniusStructure& S, const CohomologyClass& eta);

/// Largest n with eta in p^n times the lattice; AtPrecisionZero if eta vanishes.
int class_valuation(const CohomologyClass& eta);

/// h(x) dx/y on the reduced curve, deg h <= g-1.
struct DifferentialModP {
  FieldPtr field;
  int genus = 0;
  FqPoly h;
};

DifferentialModP reduce_bar(const CohomologyClass& eta);

struct CurvePointBar {
  enum class Kind { FiniteNonWeierstrass, Weierstrass, Infinity };
  Kind kind = Kind::Infinity;
  FieldPtr field;
  FiniteField::Elem x = 0;
  FiniteField::Elem y = 0;

  static CurvePointBar finite(const HyperellipticCurve& curve, FieldPtr field, FiniteField::Elem a,
                              FiniteField::Elem b);
  static CurvePointBar weierstrass(const HyperellipticCurve& curve, FieldPtr field,
                                   FiniteField::Elem a);
  static CurvePointBar infinity(const HyperellipticCurve& curve);
};

/// All points of the reduced curve over F_{p^k}, affine ones in field order
/// followed by the point at infinity.
std::vector<CurvePointBar> points_over(const HyperellipticCurve& curve, int k);

/// Order of vanishing of h(x) dx/y at the point.
int ord_at_point(const DifferentialModP& w, const CurvePointBar& z);

/// g x g Cartier matrix mod p: column i is the image of x^i dx/y.
std::vector<std::vector<long>> cartier_matrix(const HyperellipticCurve& curve);
bool is_ordinary(const HyperellipticCurve& curve);

/// #X(F_{p^k}) for k = 1..kmax by enumeration, including the point at infinity.
std::vector<Integer> point_counts(const HyperellipticCurve& curve, int kmax, int jobs = 1);

/// L(T) of degree 2g, coefficients low to high.
std::vector<Integer> zeta_numerator_bruteforce(const HyperellipticCurve& curve, int jobs = 1);

}  // namespace bcml
