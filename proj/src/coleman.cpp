#include "bcml/coleman.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "bcml/error.hpp"

namespace bcml {

namespace {

using Elem = FiniteField::Elem;

FieldPtr common_field(long p, int a, int b) {
  return FiniteField::get(p, std::lcm(a, b));
}

// Coefficient of (x - a)^m in h where m is the root multiplicity, or the
// leading coefficient at infinity. Two differentials with the same order at z
// differ to higher order exactly when these ratios agree.
Elem leading_at(const DifferentialModP& w, const CurvePointBar& z, const FiniteField& K) {
  FqPoly h = fq_embed(K, *w.field, w.h);
  if (z.kind == CurvePointBar::Kind::Infinity) return h.back();
  Elem a = K.embed_from(*z.field, z.x);
  FqPoly lin = {K.neg(a), K.one()};
  while (fq_eval(K, h, a) == 0) h = fq_divmod(K, h, lin).first;
  return fq_eval(K, h, a);
}

PadicNumber lift_into(const ContextPtr& ctx, const PadicNumber& x) {
  if (x.context()->compatible(*ctx)) return PadicNumber(ctx, x.truncate(std::min(x.precision(), ctx->N())).coeffs());
  if (!x.in_prime_subring()) fail(ErrorKind::ContextMismatch, "cannot move element between unramified rings");
  return PadicNumber(ctx, x.rational_part());
}

CohomologyClass class_over(const ContextPtr& ctx, const CohomologyClass& eta) {
  auto c = ctx->with_precision(std::min(ctx->N(), eta.precision()));
  std::vector<PadicNumber> coords;
  for (const auto& x : eta.coords()) coords.push_back(lift_into(c, x));
  return CohomologyClass(eta.genus(), std::move(coords));
}

std::vector<std::vector<long>> residues(const CohomologyClass& eta) {
  std::vector<std::vector<long>> out;
  for (const auto& c : eta.coords()) out.push_back(c.residue());
  return out;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace

NSequence n_sequence(const FrobeniusStructure& S, const CohomologyClass& omega, int L) {
  if (L < 1) fail(ErrorKind::InvalidInput, "sequence length must be positive");
  if (!omega.is_holomorphic()) fail(ErrorKind::InvalidInput, "omega must be holomorphic");
  if (class_valuation(omega) != 0) fail(ErrorKind::InvalidInput, "omega must be nonzero mod p");

  NSequence ns;
  ns.n.push_back(0);
  ns.trace.push_back(0);
  ns.iterates.push_back(omega);
  ns.reductions.push_back(reduce_bar(omega));
  CohomologyClass cur = omega;
  int val = 0;
  long m = 0;
  while (static_cast<int>(ns.n.size()) < L) {
    cur = verschiebung_apply(S, cur);
    ++m;
    int v;
    try {
      v = class_valuation(cur);
    } catch (const Error&) {
      fail(ErrorKind::PrecisionExhausted,
           "V^" + std::to_string(m) + " omega vanishes at working precision");
    }
    ns.trace.push_back(v);
    if (v == val) {
      ns.n.push_back(m);
      ns.iterates.push_back(cur);
      ns.reductions.push_back(reduce_bar(cur));
    }
    val = v;
  }
  ns.precision = cur.precision() - val;

  ns.lemma_holds = true;
  for (long t = 0; t < static_cast<long>(ns.trace.size()); ++t) {
    long j = std::count_if(ns.n.begin() + 1, ns.n.end(), [&](long x) { return x <= t; });
    if (ns.trace[t] != t - j) ns.lemma_holds = false;
  }
  return ns;
}

std::vector<Integer> ColemanSequence::abscissas() const {
  std::vector<Integer> out;
  for (size_t i = 0; i < n.size(); ++i) out.push_back(power(p, n[i]) * k[i]);
  return out;
}

std::vector<long> k_sequence(const NSequence& ns, const CurvePointBar& z, KConvention conv) {
  std::vector<long> k;
  for (size_t i = 0; i < ns.reductions.size(); ++i) {
    long o = ord_at_point(ns.reductions[i], z);
    k.push_back(conv == KConvention::Literal && i == 0 ? o : o + 1);
  }
  return k;
}

ColemanSequence coleman_sequence(const FrobeniusStructure& S, const NSequence& ns,
                                 const CurvePointBar& z, KConvention conv) {
  ColemanSequence seq;
  seq.p = S.p;
  seq.genus = S.genus;
  seq.nseq = ns;
  seq.n = ns.n;
  seq.k = k_sequence(ns, z, conv);
  seq.convention = conv;
  return seq;
}

ColemanSequence coleman_sequence(const FrobeniusStructure& S, const CohomologyClass& omega,
                                 const CurvePointBar& z, int L, KConvention conv) {
  return coleman_sequence(S, n_sequence(S, omega, L), z, conv);
}

std::vector<Rational> candidate_slopes(const ColemanSequence& seq) {
  auto X = seq.abscissas();
  Rational limit(1, 2 * seq.genus - 2);
  std::vector<Rational> out;
  for (size_t i = 0; i + 1 < X.size(); ++i) {
    Integer d = X[i + 1] - X[i];
    if (d <= 0) continue;
    Rational s(Integer(1), d);
    s.canonicalize();
    if (s < limit) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational slope_value(const SlopeForm& s, long p) {
  Integer d = power(p, s.b) * s.k - power(p, s.a) * s.l;
  if (d <= 0) fail(ErrorKind::InvalidInput, "slope form with non-positive denominator");
  Rational r(Integer(1), d);
  r.canonicalize();
  return r;
}

std::vector<SlopeForm> slope_forms(const Rational& lambda, long p, int g, long bmax) {
  std::vector<SlopeForm> out;
  if (lambda <= 0 || lambda.get_num() != 1) return out;
  const Integer& m = lambda.get_den();
  for (long b = 1; b <= bmax; ++b)
    for (long a = 0; a < b; ++a)
      for (long k = 1; k <= 2 * g - 1; ++k)
        for (long l = 1; l <= 2 * g - 1; ++l) {
          if (power(p, b) * k - power(p, a) * l == m) out.push_back({k, l, b, a});
        }
  return out;
}

std::optional<SlopeForm> decode_slope(const Rational& lambda, long p, int g) {
  if (lambda <= 0 || lambda.get_num() != 1) return std::nullopt;
  Integer m = lambda.get_den();
  long a = valuation(m, p);
  Integer rest = m / power(p, a);
  long l = mod(-rest, Integer(p)).get_si();
  if (l < 1 || l > 2 * g - 1) return std::nullopt;
  Integer t = rest + l;
  long d = valuation(t, p);
  if (d < 1) return std::nullopt;
  Integer k = t / power(p, d);
  if (k < 1 || k > 2 * g - 1) return std::nullopt;
  return SlopeForm{k.get_si(), l, a + d, a};
}

SlopeValuation integral_valuation(const ColemanSequence& seq, const Rational& lambda) {
  if (lambda <= 0) fail(ErrorKind::InvalidInput, "lambda must be positive");
  if (seq.n.empty()) fail(ErrorKind::InvalidInput, "empty Coleman sequence");
  auto X = seq.abscissas();
  long L = static_cast<long>(X.size());

  std::optional<Rational> best;
  long arg = 0;
  int hits = 0;
  for (long i = 0; i < L; ++i) {
    Rational v = lambda * Rational(X[i]) - i;
    if (!best || v < *best) {
      best = v;
      arg = i;
      hits = 1;
    } else if (v == *best) {
      ++hits;
    }
  }

  // Coefficients before the first corner have valuation at least 1.
  if (X[0] > 1 && !(lambda + 1 > *best)) {
    fail(ErrorKind::RangeNotCertified, "coefficients below the first corner may dominate");
  }
  // Corners past the computed ones sit at abscissa >= p^{n_{L-1} + j - L + 1}.
  long c = seq.n.back();
  Rational prev;
  for (long j = L;; ++j) {
    Rational h = lambda * Rational(power(seq.p, static_cast<unsigned long>(c + j - L + 1))) - j;
    if (!(h > *best)) {
      fail(ErrorKind::RangeNotCertified,
           "Coleman sequence too short to certify lambda = " + to_string(lambda));
    }
    if (j > L && h >= prev) break;
    prev = h;
  }

  PolygonVertex vertex{X[arg].get_si(), Rational(-arg)};
  if (hits > 1) return {SlopeValuation::Kind::IsASlope, *best, vertex};
  return {SlopeValuation::Kind::Exact, *best, vertex};
}

UnramifiedInputs prepare_unramified(const HyperellipticCurve& curve, const FrobeniusStructure& S, int L) {
  if (!curve.p_at_least_2g()) {
    fail(ErrorKind::HypothesisViolated, "unramified test needs p >= 2g");
  }
  UnramifiedInputs in;
  in.curve = &curve;
  in.S = &S;
  in.L = L;
  auto ctx = curve.context()->with_precision(S.v_precision);
  for (int j = 0; j < curve.genus(); ++j) {
    in.basis.push_back(n_sequence(S, CohomologyClass::basis(curve.genus(), ctx, j), L));
  }
  return in;
}

namespace {

DifferentialReport report(const std::string& source, const ColemanSequence& seq,
                          const Rational& lambda) {
  DifferentialReport r;
  r.source = source;
  r.omega = residues(seq.nseq.iterates.front());
  r.n = seq.n;
  r.k = seq.k;
  r.valuation = integral_valuation(seq, lambda);
  return r;
}

bool excludes(const DifferentialReport& r) {
  return r.valuation.kind == SlopeValuation::Kind::Exact && !is_integer(r.valuation.value);
}

}  // namespace

UnramifiedVerdict unramified_test(const UnramifiedInputs& in, const CurvePointBar& z,
                                  const Rational& lambda) {
  if (lambda <= 0) fail(ErrorKind::InvalidInput, "lambda must be positive");
  const auto& S = *in.S;
  const auto& curve = *in.curve;
  int g = curve.genus();
  long p = curve.p();
  UnramifiedVerdict verdict;

  std::vector<ColemanSequence> seqs;
  for (const auto& ns : in.basis) seqs.push_back(coleman_sequence(S, ns, z));

  if (lambda >= Rational(1, 2 * g - 2)) {
    // A differential not vanishing at z gives val = lambda directly.
    for (const auto& seq : seqs) {
      if (seq.k[0] != 1) continue;
      verdict.branch = "non-vanishing";
      verdict.certificate.push_back(report("basis", seq, lambda));
      verdict.excluded = excludes(verdict.certificate.back());
      return verdict;
    }
    fail(ErrorKind::InvalidInput, "every basis differential vanishes at the point");
  }

  verdict.branch = "basis";
  for (const auto& seq : seqs) verdict.certificate.push_back(report("basis", seq, lambda));
  for (const auto& r : verdict.certificate) {
    if (excludes(r)) {
      verdict.excluded = true;
      return verdict;
    }
  }

  // Two differentials sharing (n, k): cancel the leading term. Each new
  // combination joins the pool and is paired again.
  auto K = common_field(p, 1, z.field->degree());
  auto ctxq = PadicContext::create(p, K->degree(), S.v_precision);
  struct Member {
    CohomologyClass omega;
    ColemanSequence seq;
  };
  std::vector<Member> pool;
  std::set<std::pair<std::vector<long>, std::vector<long>>> seen;
  for (const auto& seq : seqs) {
    pool.push_back({class_over(ctxq, seq.nseq.iterates.front()), seq});
    seen.insert({seq.n, seq.k});
  }
  constexpr std::size_t kPoolLimit = 48;
  for (std::size_t b = 1; b < pool.size(); ++b)
    for (std::size_t a = 0; a < b; ++a) {
      std::vector<Member> fresh;
      for (int swap = 0; swap < 2; ++swap) {
        const Member& m1 = swap ? pool[b] : pool[a];
        const Member& m2 = swap ? pool[a] : pool[b];
        const auto& s1 = m1.seq;
        const auto& s2 = m2.seq;
        for (long i = 0; i < s1.length(); ++i)
          for (long j = i; j < s2.length(); ++j) {
            if (s1.n[i] != s2.n[j] || s1.k[i] != s2.k[j]) continue;
            long n = s1.n[i];
            Elem c1 = leading_at(s1.nseq.reductions[i], z, *K);
            Elem c2 = leading_at(s2.nseq.reductions[j], z, *K);
            Elem ratio = K->pow(K->div(c1, c2), mod(power(p, n), Integer(K->size() - 1)).get_si());
            PadicNumber alpha = teichmuller(ctxq, K->coeffs(ratio));
            PadicNumber scale = alpha * PadicNumber(ctxq, power(p, static_cast<unsigned long>(j - i)));
            CohomologyClass eta = m1.omega - m2.omega * scale;

            CohomologyClass vn = eta;
            for (long t = 0; t < n; ++t) vn = verschiebung_apply(S, vn);
            std::string fired;
            if (class_valuation(vn) > n - i) {
              fired = "valuation";
            } else if (ord_at_point(reduce_bar(vn), z) > s1.k[i] - 1) {
              fired = "order";
            }
            if (verdict.contradiction.empty()) {
              verdict.common_nk = std::make_pair(n, s1.k[i]);
              verdict.contradiction = fired;
            }
            std::optional<ColemanSequence> seq;
            try {
              seq = coleman_sequence(S, eta, z, in.L);
            } catch (const Error& e) {
              if (e.kind() != ErrorKind::PrecisionExhausted) throw;
              continue;
            }
            auto r = report("combination", *seq, lambda);
            if (excludes(r)) {
              verdict.excluded = true;
              verdict.branch = "combination";
              verdict.common_nk = std::make_pair(n, s1.k[i]);
              verdict.contradiction = fired;
              verdict.certificate.push_back(std::move(r));
              return verdict;
            }
            if (pool.size() + fresh.size() < kPoolLimit && seen.insert({seq->n, seq->k}).second) {
              fresh.push_back({std::move(eta), std::move(*seq)});
            }
          }
      }
      for (auto& m : fresh) pool.push_back(std::move(m));
    }

  // Remaining F_p-combinations of the basis, up to scaling.
  auto ctx = curve.context()->with_precision(S.v_precision);
  std::vector<long> c(g, 0);
  while (true) {
    int t = 0;
    while (t < g && ++c[t] == p) c[t++] = 0;
    if (t == g) break;
    int lead = g - 1;
    while (lead >= 0 && c[lead] == 0) --lead;
    if (lead < 0 || c[lead] != 1) continue;
    if (std::count_if(c.begin(), c.end(), [](long x) { return x != 0; }) < 2) continue;
    std::vector<PadicNumber> coords(2 * g, PadicNumber(ctx));
    for (int j = 0; j < g; ++j) coords[j] = PadicNumber(ctx, Integer(c[j]));
    auto seq = coleman_sequence(S, CohomologyClass(g, coords), z, in.L);
    auto r = report("search", seq, lambda);
    if (excludes(r)) {
      verdict.excluded = true;
      verdict.branch = "search";
      verdict.certificate.push_back(std::move(r));
      return verdict;
    }
  }
  verdict.branch = "none";
  return verdict;
}

UnramifiedVerdict unramified_test(const HyperellipticCurve& curve, const FrobeniusStructure& S,
                                  const CurvePointBar& z, const Rational& lambda, int L) {
  return unramified_test(prepare_unramified(curve, S, L), z, lambda);
}

LiftedPoint lift_point(const HyperellipticCurve& curve, const CurvePointBar& z, int N) {
  if (z.kind != CurvePointBar::Kind::FiniteNonWeierstrass) {
    fail(ErrorKind::UnsupportedDisc, "disc expansion needs a finite non-Weierstrass point");
  }
  const auto& F = *z.field;
  auto ctx = PadicContext::create(curve.p(), F.degree(), N);
  PadicNumber x0 = teichmuller(ctx, F.coeffs(z.x));
  PadicNumber fx(ctx);
  for (auto it = curve.f().rbegin(); it != curve.f().rend(); ++it) fx = fx * x0 + PadicNumber(ctx, *it);
  std::vector<Integer> yc;
  for (long c : F.coeffs(z.y)) yc.push_back(c);
  PadicNumber y(ctx, yc);
  PadicNumber half = invert(PadicNumber(ctx, Integer(2)));
  for (int it = 0; it < N; ++it) y = y - (y * y - fx) * invert(y) * half;
  return {x0, y};
}

namespace {

using Series = std::vector<PadicNumber>;

Series series_mul(const Series& a, const Series& b, long M) {
  Series c(M, PadicNumber(a.front().context()));
  for (long i = 0; i < M && i < static_cast<long>(a.size()); ++i) {
    if (a[i].is_zero()) continue;
    for (long j = 0; i + j < M && j < static_cast<long>(b.size()); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// Coefficients of P(x0 + T) for an integer-coefficient polynomial given by
// coefficients in Z_q.
Series taylor_shift(const std::vector<PadicNumber>& P, const PadicNumber& x0, long M) {
  auto ctx = x0.context();
  Series out(std::max<long>(M, 1), PadicNumber(ctx));
  // Horner in (x0 + T).
  Series acc(1, PadicNumber(ctx));
  for (auto it = P.rbegin(); it != P.rend(); ++it) {
    Series next(std::min<long>(acc.size() + 1, M), PadicNumber(ctx));
    for (size_t i = 0; i < acc.size(); ++i) {
      if (static_cast<long>(i) < M) next[i] += acc[i] * x0;
      if (static_cast<long>(i + 1) < M) next[i + 1] += acc[i];
    }
    next[0] += *it;
    acc = std::move(next);
  }
  for (size_t i = 0; i < acc.size() && static_cast<long>(i) < M; ++i) out[i] = acc[i];
  return out;
}

}  // namespace

std::vector<PadicNumber> local_expansion(const HyperellipticCurve& curve, const LiftedPoint& z0,
                                         const std::vector<PadicNumber>& coords, long M) {
  if (M <= 0) return {};
  int N = z0.x0.precision();
  for (const auto& c : coords) N = std::min(N, c.precision());
  auto ctx = z0.x0.context()->with_precision(N);
  PadicNumber x0 = lift_into(ctx, z0.x0);
  PadicNumber y0 = lift_into(ctx, z0.y0);
  std::vector<PadicNumber> fP, hP;
  for (const auto& c : curve.f()) fP.push_back(PadicNumber(ctx, c));
  for (const auto& c : coords) hP.push_back(lift_into(ctx, c));
  Series F = taylor_shift(fP, x0, M);
  Series H = taylor_shift(hP, x0, M);

  // Newton iteration R <- R + R (1 - F R^2) / 2 for R = F^{-1/2}, R(0) = 1/y0.
  PadicNumber half = invert(PadicNumber(ctx, Integer(2)));
  Series R(1, invert(y0));
  long have = 1;
  while (have < M) {
    have = std::min(2 * have, M);
    R.resize(have, PadicNumber(ctx));
    Series R2 = series_mul(R, R, have);
    Series E = series_mul(F, R2, have);
    for (auto& e : E) e = -e;
    E[0] += PadicNumber::one(ctx);
    Series D = series_mul(R, E, have);
    for (long i = 0; i < have; ++i) R[i] += D[i] * half;
  }
  return series_mul(H, R, M);
}

PadicSeries DiscExpansion::series() const { return PadicSeries::from_values(coefficients); }

DiscExpansion disc_expansion(const HyperellipticCurve& curve, const FrobeniusStructure& S,
                             const CurvePointBar& z, const CohomologyClass& omega, long M) {
  if (M < 2) fail(ErrorKind::InvalidInput, "truncation must be at least 2");
  if (!curve.p_exceeds_2g_minus_2()) fail(ErrorKind::HypothesisViolated, "disc expansion needs p > 2g-2");
  long p = curve.p();
  int N = S.v_precision;
  DiscExpansion out{lift_point(curve, z, N), M, {}, {}, {}, 0, 0};
  auto ctxq = out.base.x0.context();

  long J = 0;
  while (power(p, J) < M) ++J;
  NSequence ns = n_sequence(S, class_over(ctxq, omega), static_cast<int>(J + 1));
  // n_i >= i, so J + 1 terms reach p^{n_J} >= M; the actual cut may come earlier.
  long Jc = 0;
  while (power(p, ns.n[Jc]) < M) ++Jc;
  out.n.assign(ns.n.begin(), ns.n.begin() + Jc + 1);

  // nu_i = V^{n_i} omega / p^{n_i - i}, integrated termwise in T = x - x0.
  auto primitive = [&](long i, long D) {
    const auto& it = ns.iterates[i];
    std::vector<PadicNumber> nu;
    for (const auto& c : it.coords()) {
      nu.push_back(c.truncate(it.precision()).divide_by_p_power(static_cast<int>(ns.n[i] - i)));
    }
    std::vector<PadicValue> E(D, PadicValue(nu.front().context()));
    if (D <= 1) return E;
    auto a = local_expansion(curve, out.base, nu, D - 1);
    for (long m = 0; m + 1 < D; ++m) {
      E[m + 1] = PadicValue(0, a[m]).scale(Rational(1, m + 1));
    }
    return E;
  };

  auto count = [&](long i) { return (M - 1) / power(p, ns.n[i]).get_si() + 1; };
  std::vector<std::vector<PadicValue>> E;
  for (long i = 0; i <= Jc; ++i) E.push_back(primitive(i, count(i)));

  out.g_min_valuation = PadicValue::kExact;
  for (long i = 0; i < Jc; ++i) {
    long D = count(i);
    long step = power(p, ns.n[i + 1] - ns.n[i]).get_si();
    long delta = ns.n[i + 1] - ns.n[i];
    std::vector<PadicValue> gi = E[i];
    for (long d = 0; d < D; d += step) {
      long e = d / step;
      if (e >= static_cast<long>(E[i + 1].size())) break;
      gi[d] = gi[d] - E[i + 1][e].frobenius(delta).times_p_power(-1);
    }
    for (const auto& c : gi) {
      if (!c.is_zero() && c.absolute_precision() > c.valuation()) {
        out.g_min_valuation = std::min(out.g_min_valuation, c.valuation());
      }
    }
    out.g.push_back(std::move(gi));
  }

  out.coefficients.assign(M, PadicValue(ctxq));
  for (long i = 0; i < Jc; ++i) {
    long step = power(p, ns.n[i]).get_si();
    for (long d = 0; d < static_cast<long>(out.g[i].size()); ++d) {
      long m = d * step;
      if (m >= M) break;
      out.coefficients[m] =
          out.coefficients[m] + out.g[i][d].frobenius(ns.n[i]).times_p_power(-static_cast<int>(i));
    }
  }
  out.precision = PadicValue::kExact;
  for (long m = 1; m < M; ++m) out.precision = std::min(out.precision, out.coefficients[m].absolute_precision());
  return out;
}

}  // namespace bcml
