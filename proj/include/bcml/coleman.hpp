#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bcml/derham.hpp"
#include "bcml/series.hpp"

namespace bcml {

/// How k_0 is defined. Uniform adds one to every order of vanishing so the
/// polygon corners are (p^{n_i} k_i, -i) for all i; Literal leaves k_0 as the
/// bare order.
enum class KConvention { Uniform, Literal };

/// Positions where V does not raise the valuation, with the normalized
/// reductions there.
struct NSequence {
  std::vector<long> n;                      // n_0 = 0 < n_1 < ...
  std::vector<int> trace;                   // val(V^m omega), m = 0..n.back()
  std::vector<DifferentialModP> reductions;  // reduce_bar(V^{n_i} omega)
  std::vector<CohomologyClass> iterates;    // V^{n_i} omega
  int precision = 0;
  /// val(V^m omega) = m - #{i >= 1 : n_i <= m} along the whole trace.
  bool lemma_holds = false;
};

/// First L terms. omega must be holomorphic and nonzero mod p.
NSequence n_sequence(const FrobeniusStructure& S, const CohomologyClass& omega, int L);

struct ColemanSequence {
  long p = 0;
  int genus = 0;
  NSequence nseq;
  std::vector<long> n;
  std::vector<long> k;
  KConvention convention = KConvention::Uniform;

  int length() const { return static_cast<int>(n.size()); }
  /// p^{n_i} k_i
  std::vector<Integer> abscissas() const;
};

std::vector<long> k_sequence(const NSequence& ns, const CurvePointBar& z,
                             KConvention conv = KConvention::Uniform);

ColemanSequence coleman_sequence(const FrobeniusStructure& S, const CohomologyClass& omega,
                                 const CurvePointBar& z, int L,
                                 KConvention conv = KConvention::Uniform);
ColemanSequence coleman_sequence(const FrobeniusStructure& S, const NSequence& ns,
                                 const CurvePointBar& z, KConvention conv = KConvention::Uniform);

/// 1/(p^{n_{i+1}} k_{i+1} - p^{n_i} k_i) below 1/(2g-2), ascending.
std::vector<Rational> candidate_slopes(const ColemanSequence& seq);

/// lambda = 1/(k p^b - l p^a) with a < b and k, l in [1, 2g-1].
struct SlopeForm {
  long k = 0;
  long l = 0;
  long b = 0;
  long a = 0;
  friend bool operator==(const SlopeForm&, const SlopeForm&) = default;
};

Rational slope_value(const SlopeForm& s, long p);
/// Every representation with b <= bmax, by enumeration.
std::vector<SlopeForm> slope_forms(const Rational& lambda, long p, int g, long bmax);
/// The representation read off from the base-p digits, if any.
std::optional<SlopeForm> decode_slope(const Rational& lambda, long p, int g);

/// Valuation of the integral at a point with val T = lambda, from the corners
/// (p^{n_i} k_i, -i). RangeNotCertified when the computed terms cannot rule
/// out a lower corner further out.
SlopeValuation integral_valuation(const ColemanSequence& seq, const Rational& lambda);

struct DifferentialReport {
  std::string source;                 // "basis", "combination", "search"
  std::vector<std::vector<long>> omega;  // residues of the coordinates
  std::vector<long> n;
  std::vector<long> k;
  SlopeValuation valuation;
};

struct UnramifiedVerdict {
  bool excluded = false;
  std::string branch;  // which argument decided
  std::vector<DifferentialReport> certificate;
  std::optional<std::pair<long, long>> common_nk;  // (n, k) shared by the basis
  std::string contradiction;  // "order", "valuation" or empty
};

/// Precomputed data for repeated tests on one curve.
struct UnramifiedInputs {
  const HyperellipticCurve* curve = nullptr;
  const FrobeniusStructure* S = nullptr;
  int L = 0;
  std::vector<NSequence> basis;  // x^j dx/y, j < g
};

UnramifiedInputs prepare_unramified(const HyperellipticCurve& curve, const FrobeniusStructure& S, int L);

UnramifiedVerdict unramified_test(const UnramifiedInputs& in, const CurvePointBar& z,
                                  const Rational& lambda);
UnramifiedVerdict unramified_test(const HyperellipticCurve& curve, const FrobeniusStructure& S,
                                  const CurvePointBar& z, const Rational& lambda, int L);

/// Teichmuller lift of a finite non-Weierstrass point, y by Hensel.
struct LiftedPoint {
  PadicNumber x0;
  PadicNumber y0;
};

LiftedPoint lift_point(const HyperellipticCurve& curve, const CurvePointBar& z, int N);

/// Coefficients of h(x0+T)/y(T), T^0..T^{M-1}, for h = sum coords[j] x^j.
std::vector<PadicNumber> local_expansion(const HyperellipticCurve& curve, const LiftedPoint& z0,
                                         const std::vector<PadicNumber>& coords, long M);

struct DiscExpansion {
  LiftedPoint base;
  long M = 0;
  std::vector<PadicValue> coefficients;      // S(T) = sum a_m T^m, m < M
  std::vector<std::vector<PadicValue>> g;    // g_i(T), truncated
  std::vector<long> n;                       // n_0..n_J with p^{n_J} >= M
  int precision = 0;                         // min absolute precision of the a_m
  int g_min_valuation = 0;                   // over the certified g_i coefficients

  PadicSeries series() const;
};

DiscExpansion disc_expansion(const HyperellipticCurve& curve, const FrobeniusStructure& S,
                             const CurvePointBar& z, const CohomologyClass& omega, long M);

}  // namespace bcml
