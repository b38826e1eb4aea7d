#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "bcml/integer.hpp"

namespace bcml {

class PadicContext;
using ContextPtr = std::shared_ptr<const PadicContext>;

/// Conway polynomial of degree f over F_p, coefficients low to high.
/// Shipped for p <= 11, f <= 4; degree 1 is available for every prime.
std::vector<Integer> conway_polynomial(long p, int f);

/// Z_q / p^N with q = p^f, elements written in the power basis of a root
/// theta of the defining polynomial.
class PadicContext : public std::enable_shared_from_this<PadicContext> {
 public:
  static ContextPtr create(long p, int f, int N);
  static ContextPtr create(long p, std::vector<Integer> defining_poly, int N);

  long p() const { return p_; }
  int f() const { return f_; }
  int N() const { return N_; }
  const Integer& modulus() const { return modulus_; }
  const std::vector<Integer>& defining_poly() const { return poly_; }
  /// q = p^f, the residue field size.
  const Integer& q() const { return q_; }

  /// Same p and defining polynomial, so elements may be mixed.
  bool compatible(const PadicContext& other) const;
  ContextPtr with_precision(int N) const;

  // Coefficient-level helpers shared by every module working in Z_q.
  std::vector<Integer> multiply(const std::vector<Integer>& a, const std::vector<Integer>& b,
                                const Integer& m) const;
  std::vector<Integer> reduce(std::vector<Integer> a, const Integer& m) const;
  /// sigma applied to a coefficient vector, modulo m (which must divide p^N).
  std::vector<Integer> apply_sigma(const std::vector<Integer>& a, const Integer& m) const;

 private:
  PadicContext(long p, std::vector<Integer> poly, int N);
  void lift_sigma();

  long p_;
  int f_;
  int N_;
  Integer modulus_;
  Integer q_;
  std::vector<Integer> poly_;
  // sigma_[j] = sigma(theta^j) mod p^N
  std::vector<std::vector<Integer>> sigma_;
};

class PadicNumber {
 public:
  explicit PadicNumber(ContextPtr ctx);
  PadicNumber(ContextPtr ctx, const Integer& n);
  PadicNumber(ContextPtr ctx, std::vector<Integer> coeffs);

  static PadicNumber one(ContextPtr ctx) { return PadicNumber(std::move(ctx), Integer(1)); }

  const ContextPtr& context() const { return ctx_; }
  long prime() const { return ctx_->p(); }
  int precision() const { return ctx_->N(); }
  const std::vector<Integer>& coeffs() const { return coeffs_; }
  /// The element as an integer; only meaningful when f = 1 or the
  /// element lies in Z_p.
  const Integer& rational_part() const { return coeffs_[0]; }
  bool in_prime_subring() const;

  bool is_zero() const;
  bool is_one() const;

  PadicNumber operator-() const;
  PadicNumber& operator+=(const PadicNumber& o);
  PadicNumber& operator-=(const PadicNumber& o);
  PadicNumber& operator*=(const PadicNumber& o);
  friend PadicNumber operator+(PadicNumber a, const PadicNumber& b) { return a += b; }
  friend PadicNumber operator-(PadicNumber a, const PadicNumber& b) { return a -= b; }
  friend PadicNumber operator*(PadicNumber a, const PadicNumber& b) { return a *= b; }
  PadicNumber operator*(const Integer& c) const;

  /// Equality after truncating both sides to the common precision.
  friend bool operator==(const PadicNumber& a, const PadicNumber& b);

  PadicNumber pow(const Integer& e) const;
  PadicNumber pow(unsigned long e) const { return pow(Integer(e)); }

  /// Drops to absolute precision M <= N.
  PadicNumber truncate(int M) const;
  /// x / p^k, known to precision N - k. DivisionNotExact unless p^k | x.
  PadicNumber divide_by_p_power(int k) const;
  /// p^k x at precision N (the top k digits are lost).
  PadicNumber times_p_power(int k) const;

  /// Coefficients reduced mod p, i.e. the image in F_q.
  std::vector<long> residue() const;

 private:
  void mix(const PadicNumber& o);

  ContextPtr ctx_;
  std::vector<Integer> coeffs_;
};

/// Minimum p-adic valuation of the coefficients; nullopt means the element
/// is zero modulo p^N (AtPrecisionZero: valuation >= N, undetermined).
std::optional<int> valuation(const PadicNumber& x);
/// As above but throws AtPrecisionZero.
int valuation_or_throw(const PadicNumber& x);

PadicNumber invert(const PadicNumber& x);

/// Teichmuller lift of a residue field element given in the theta basis.
PadicNumber teichmuller(const ContextPtr& ctx, const std::vector<long>& t);
PadicNumber teichmuller(const ContextPtr& ctx, long t);

PadicNumber frobenius_auto(const PadicNumber& x);
/// sigma^k for any integer k (negative powers use sigma^{-1} = sigma^{f-1}).
PadicNumber frobenius_auto(const PadicNumber& x, long k);

/// Capped-relative element of Q_q: p^shift * unit, with the unit known to
/// relative precision rel_prec. Zero carries only an absolute bound.
class PadicValue {
 public:
  static constexpr int kExact = 1 << 28;

  /// Exact zero.
  explicit PadicValue(ContextPtr ctx);
  /// Zero known to absolute precision abs_prec.
  static PadicValue zero(ContextPtr ctx, int abs_prec);
  /// p^shift * x where x is an element of Z_q (not necessarily a unit).
  PadicValue(int shift, const PadicNumber& x);
  static PadicValue from_rational(ContextPtr ctx, const Rational& q, int rel_prec);

  const ContextPtr& context() const { return ctx_; }
  bool is_zero() const { return is_zero_; }
  /// Valuation of a nonzero element.
  int valuation() const { return shift_; }
  /// Absolute precision: the value is known modulo p^absolute_precision().
  int absolute_precision() const;
  int relative_precision() const { return is_zero_ ? 0 : unit_.precision(); }
  const PadicNumber& unit() const { return unit_; }

  PadicValue operator-() const;
  PadicValue operator+(const PadicValue& o) const;
  PadicValue operator-(const PadicValue& o) const { return *this + (-o); }
  PadicValue operator*(const PadicValue& o) const;
  PadicValue operator/(const PadicValue& o) const;
  PadicValue scale(const Rational& c) const;
  PadicValue times_p_power(int k) const;

  PadicValue frobenius(long k = 1) const;
  /// Truncation into Z_q at absolute precision M; requires valuation >= 0.
  PadicNumber to_integral(int M) const;
  /// Lowers the absolute precision cap.
  PadicValue cap(int abs_prec) const;

  /// Agreement modulo p^M for M at most both absolute precisions.
  bool agrees_with(const PadicValue& o, int M) const;

 private:
  PadicValue(ContextPtr ctx, int shift, PadicNumber unit, bool zero);
  static PadicValue normalize(int shift, const PadicNumber& x);

  ContextPtr ctx_;
  int shift_ = kExact;
  PadicNumber unit_;
  bool is_zero_ = true;
};

}  // namespace bcml
