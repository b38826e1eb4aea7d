#include "bcml/derham.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <thread>

#include "bcml/error.hpp"

namespace bcml {

namespace {

using Poly = std::vector<Integer>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly reduce_mod(Poly a, const Integer& m) {
  for (auto& c : a) c = mod(c, m);
  trim(a);
  return a;
}

Poly add_mod(const Poly& a, const Poly& b, const Integer& m) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return reduce_mod(std::move(r), m);
}

Poly scale_mod(const Poly& a, const Integer& c, const Integer& m) {
  Poly r(a);
  for (auto& x : r) x *= c;
  return reduce_mod(std::move(r), m);
}

Poly mul_mod(const Poly& a, const Poly& b, const Integer& m) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return reduce_mod(std::move(r), m);
}

Poly mul_exact(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

Poly derivative(const Poly& a) {
  Poly r;
  for (size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<long>(i));
  trim(r);
  return r;
}

Poly shift(const Poly& a, long k) {
  if (a.empty()) return a;
  Poly r(static_cast<size_t>(k), 0);
  r.insert(r.end(), a.begin(), a.end());
  return r;
}

// Division by a monic polynomial over Z/m.
std::pair<Poly, Poly> divmod_monic(Poly a, const Poly& f, const Integer& m) {
  size_t d = f.size() - 1;
  if (a.size() <= d) return {{}, reduce_mod(std::move(a), m)};
  Poly q(a.size() - d, 0);
  for (size_t i = a.size(); i-- > d;) {
    Integer c = mod(a[i], m);
    if (c == 0) continue;
    q[i - d] = c;
    for (size_t j = 0; j <= d; ++j) a[i - d + j] -= c * f[j];
  }
  a.resize(d);
  return {reduce_mod(std::move(q), m), reduce_mod(std::move(a), m)};
}

Integer determinant(IntMatrix M) {
  // Bareiss fraction-free elimination.
  size_t n = M.size();
  if (n == 0) return 1;
  int sign = 1;
  Integer prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (M[k][k] == 0) {
      size_t r = k + 1;
      while (r < n && M[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(M[k], M[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
      }
    }
    prev = M[k][k];
  }
  return sign * M[n - 1][n - 1];
}

IntMatrix sylvester(const Poly& a, const Poly& b) {
  size_t m = a.size() - 1, n = b.size() - 1;
  IntMatrix S(m + n, std::vector<Integer>(m + n, 0));
  for (size_t r = 0; r < n; ++r)
    for (size_t i = 0; i <= m; ++i) S[r][r + i] = a[m - i];
  for (size_t r = 0; r < m; ++r)
    for (size_t i = 0; i <= n; ++i) S[n + r][r + i] = b[n - i];
  return S;
}

// Solves M x = rhs over Z/m when M is invertible mod p.
std::vector<Integer> solve_unimodular(IntMatrix M, std::vector<Integer> rhs, long p,
                                      const Integer& m) {
  size_t n = M.size();
  for (size_t c = 0; c < n; ++c) {
    size_t r = c;
    while (r < n && mod(M[r][c], Integer(p)) == 0) ++r;
    if (r == n) fail(ErrorKind::BadReduction, "singular Bezout system");
    std::swap(M[r], M[c]);
    std::swap(rhs[r], rhs[c]);
    Integer inv = inverse_mod(M[c][c], m);
    for (auto& x : M[c]) x = mod(x * inv, m);
    rhs[c] = mod(rhs[c] * inv, m);
    for (size_t i = 0; i < n; ++i) {
      if (i == c || M[i][c] == 0) continue;
      Integer t = M[i][c];
      for (size_t j = c; j < n; ++j) M[i][j] = mod(M[i][j] - t * M[c][j], m);
      rhs[i] = mod(rhs[i] - t * rhs[c], m);
    }
  }
  return rhs;
}

// value = c / p^e, known modulo p^absprec; c is kept modulo p^(e + absprec).
struct Scaled {
  int e = 0;
  int absprec = 0;
  Poly c;
};

Scaled merge(long p, const Scaled& a, const Scaled& b) {
  Scaled r;
  r.e = std::max(a.e, b.e);
  r.absprec = std::min(a.absprec, b.absprec);
  Integer m = power(p, static_cast<unsigned long>(std::max(0, r.e + r.absprec)));
  Poly ca = scale_mod(a.c, power(p, static_cast<unsigned long>(r.e - a.e)), m);
  Poly cb = scale_mod(b.c, power(p, static_cast<unsigned long>(r.e - b.e)), m);
  r.c = add_mod(ca, cb, m);
  return r;
}

int tail_bound_at(long p, int g, long k) {
  Integer s = Integer(p) * (2 * k + 1);
  Integer deg = Integer(p) * (2 * g) - 1 + Integer(k) * p * (2 * g + 1);
  return static_cast<int>(k + 1) - 2 * floor_log(p, s) - floor_log(p, 2 * deg + 1);
}

// Lower bound for the valuation of everything contributed by terms k >= K.
int tail_bound(long p, int g, long K) {
  int best = tail_bound_at(p, g, K);
  for (long k = K + 1; k < K + 200; ++k) best = std::min(best, tail_bound_at(p, g, k));
  return best;
}

int tracked_loss_estimate(long p, long K) {
  int loss = 0;
  for (long j = 1; j <= p * (2 * K + 1); j += 2) {
    long t = j;
    while (t % p == 0) {
      t /= p;
      ++loss;
    }
  }
  return loss;
}

struct KedlayaRun {
  IntMatrix F;
  int precision;
};

KedlayaRun kedlaya(const HyperellipticCurve& curve, int W, long K) {
  long p = curve.p();
  int g = curve.genus();
  const Poly& f = curve.f();
  Poly fp = derivative(f);
  Integer mW = power(p, static_cast<unsigned long>(W));

  // E = (f(x^p) - f(x)^p) / p
  Poly fxp;
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    if (fxp.size() < i * p + 1) fxp.resize(i * p + 1, 0);
    fxp[i * p] = f[i];
  }
  Poly fpow = {1};
  for (long i = 0; i < p; ++i) fpow = mul_exact(fpow, f);
  Poly E(std::max(fxp.size(), fpow.size()), 0);
  for (size_t i = 0; i < fxp.size(); ++i) E[i] += fxp[i];
  for (size_t i = 0; i < fpow.size(); ++i) E[i] -= fpow[i];
  for (auto& c : E) {
    if (!mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p))) {
      fail(ErrorKind::InvalidInput, "f(x^p) - f(x)^p not divisible by p");
    }
    c /= p;
  }
  trim(E);

  // B with A f + B f' = 1, from the Sylvester system.
  size_t n = 4 * g + 1;
  IntMatrix M(n, std::vector<Integer>(n, 0));
  for (int j = 0; j < 2 * g; ++j)
    for (size_t t = 0; t < f.size(); ++t) M[j + t][j] = f[t];
  for (int j = 0; j <= 2 * g; ++j)
    for (size_t t = 0; t < fp.size(); ++t) M[j + t][2 * g + j] = fp[t];
  std::vector<Integer> rhs(n, 0);
  rhs[0] = 1;
  auto sol = solve_unimodular(M, rhs, p, mW);
  Poly B(sol.begin() + 2 * g, sol.end());
  trim(B);

  // sum_k binom(-1/2, k) p^(k+1) E^k, shared by all columns.
  std::vector<Poly> terms;
  Poly Ek = {1};
  Integer inv4 = inverse_mod(4, mW);
  Integer inv4k = 1;
  for (long k = 0; k < K; ++k) {
    Integer coeff = Integer(binomial(2 * k, k)) * inv4k * power(p, static_cast<unsigned long>(k + 1));
    if (k % 2 == 1) coeff = -coeff;
    terms.push_back(scale_mod(Ek, mod(coeff, mW), mW));
    Ek = mul_mod(Ek, E, mW);
    inv4k = mod(inv4k * inv4, mW);
  }

  KedlayaRun run;
  run.F.assign(2 * g, std::vector<Integer>(2 * g, 0));
  run.precision = PadicValue::kExact;
  for (int i = 0; i < 2 * g; ++i) {
    std::map<long, Scaled> levels;
    for (long k = 0; k < K; ++k) {
      Scaled t{0, W, shift(terms[k], p * (i + 1) - 1)};
      long s = p * (2 * k + 1);
      auto it = levels.find(s);
      levels[s] = it == levels.end() ? t : merge(p, it->second, t);
    }
    long top = p * (2 * K - 1);
    for (long s = top; s >= 3; s -= 2) {
      auto it = levels.find(s);
      if (it == levels.end()) continue;
      Scaled P = std::move(it->second);
      levels.erase(it);
      Integer m = power(p, static_cast<unsigned long>(std::max(0, P.e + P.absprec)));
      Scaled next{P.e, P.absprec, {}};
      if (!P.c.empty() && m > 1) {
        auto [Q, R] = divmod_monic(P.c, f, m);
        Poly b = divmod_monic(mul_mod(R, B, m), f, m).second;
        Poly num = add_mod(R, scale_mod(mul_exact(b, fp), Integer(-1), m), m);
        auto [a, rem] = divmod_monic(num, f, m);
        if (!rem.empty()) fail(ErrorKind::InvalidInput, "inexact cohomological reduction");
        long s2 = s - 2;
        int v = 0;
        while (s2 % p == 0) {
          s2 /= p;
          ++v;
        }
        Integer pv = power(p, static_cast<unsigned long>(v));
        Integer factor = mod(2 * inverse_mod(s2, m), m);
        next.e = P.e + v;
        next.absprec = P.absprec - v;
        next.c = add_mod(scale_mod(add_mod(Q, a, m), pv, m), scale_mod(derivative(b), factor, m), m);
      } else {
        next.c.clear();
      }
      auto low = levels.find(s - 2);
      levels[s - 2] = low == levels.end() ? next : merge(p, low->second, next);
    }

    Scaled P = levels.count(1) ? levels[1] : Scaled{0, W, {}};
    Integer m = power(p, static_cast<unsigned long>(std::max(0, P.e + P.absprec)));
    for (long d = static_cast<long>(P.c.size()) - 1; d >= 2 * g; --d) {
      Integer c = mod(P.c[d], m);
      if (c == 0) continue;
      long k = d - 2 * g;
      long lc = 2 * k + 2 * g + 1;
      int v = 0;
      while (lc % p == 0) {
        lc /= p;
        ++v;
      }
      // 2k x^(k-1) f + x^k f' is exact, with leading coefficient 2k + 2g + 1.
      Poly Qk = shift(fp, k);
      if (k > 0) Qk = add_mod(Qk, shift(scale_mod(f, Integer(2 * k), m), k - 1), m);
      if (v > 0) {
        P.c = scale_mod(P.c, power(p, static_cast<unsigned long>(v)), m);
        P.e += v;
        P.absprec -= v;
      }
      P.c.resize(std::max(P.c.size(), Qk.size()), 0);
      Poly sub = scale_mod(Qk, mod(-c * inverse_mod(lc, m), m), m);
      P.c = add_mod(P.c, sub, m);
      if (static_cast<long>(P.c.size()) > d) P.c[d] = 0;
      trim(P.c);
    }
    if (P.absprec <= 0) fail(ErrorKind::PrecisionExhausted, "working precision too small");
    Integer pe = power(p, static_cast<unsigned long>(P.e));
    Integer out = power(p, static_cast<unsigned long>(P.absprec));
    for (int j = 0; j < 2 * g; ++j) {
      Integer c = j < static_cast<int>(P.c.size()) ? P.c[j] : Integer(0);
      if (!mpz_divisible_p(c.get_mpz_t(), pe.get_mpz_t())) {
        fail(ErrorKind::LatticeMismatch, "Frobenius is not integral in the basis x^i dx/y");
      }
      run.F[j][i] = mod(c / pe, out);
    }
    run.precision = std::min(run.precision, P.absprec);
  }
  run.precision = std::min(run.precision, tail_bound(p, g, K));
  if (run.precision <= 0) fail(ErrorKind::PrecisionExhausted, "series truncation exhausts precision");
  Integer out = power(p, static_cast<unsigned long>(run.precision));
  for (auto& row : run.F)
    for (auto& x : row) x = mod(x, out);
  return run;
}

// V = p F^{-1} by Gauss-Jordan with minimal-valuation pivots.
std::pair<IntMatrix, int> verschiebung_matrix(const IntMatrix& F, long p, int N) {
  size_t n = F.size();
  auto ctx = PadicContext::create(p, 1, N);
  std::vector<std::vector<PadicValue>> M(n, std::vector<PadicValue>(2 * n, PadicValue(ctx)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) M[i][j] = PadicValue(0, PadicNumber(ctx, F[i][j]));
    M[i][n + i] = PadicValue(0, PadicNumber::one(ctx));
  }
  for (size_t c = 0; c < n; ++c) {
    size_t best = n;
    for (size_t r = c; r < n; ++r) {
      if (M[r][c].is_zero()) continue;
      if (best == n || M[r][c].valuation() < M[best][c].valuation()) best = r;
    }
    if (best == n) fail(ErrorKind::PrecisionExhausted, "Frobenius matrix singular at this precision");
    std::swap(M[c], M[best]);
    PadicValue piv = M[c][c];
    for (auto& x : M[c]) x = x / piv;
    for (size_t r = 0; r < n; ++r) {
      if (r == c || M[r][c].is_zero()) continue;
      PadicValue t = M[r][c];
      for (size_t j = 0; j < 2 * n; ++j) M[r][j] = M[r][j] - t * M[c][j];
    }
  }
  int prec = PadicValue::kExact;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      M[i][n + j] = M[i][n + j].times_p_power(1);
      prec = std::min(prec, M[i][n + j].absolute_precision());
    }
  if (prec <= 0) fail(ErrorKind::PrecisionExhausted, "Verschiebung lost all precision");
  IntMatrix V(n, std::vector<Integer>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      const PadicValue& x = M[i][n + j];
      if (!x.is_zero() && x.valuation() < 0) {
        fail(ErrorKind::LatticeMismatch, "pF^{-1} is not integral in the basis x^i dx/y");
      }
      V[i][j] = x.to_integral(prec).rational_part();
    }
  return {V, prec};
}

FiniteField::Elem eval_reduced(const FiniteField& F, const FqPoly& f, FiniteField::Elem x) {
  return fq_eval(F, f, x);
}

FieldPtr common_field(long p, int a, int b) {
  return FiniteField::get(p, std::lcm(a, b));
}

}  // namespace

Integer discriminant(const std::vector<Integer>& f) {
  Poly a = f;
  trim(a);
  if (a.size() < 2 || a.back() != 1) fail(ErrorKind::InvalidInput, "discriminant needs a monic polynomial");
  long n = static_cast<long>(a.size()) - 1;
  if (n == 1) return 1;
  Integer res = determinant(sylvester(a, derivative(a)));
  return (n * (n - 1) / 2) % 2 == 0 ? res : Integer(-res);
}

HyperellipticCurve::HyperellipticCurve(long p, std::vector<Integer> f_coeffs, int precision,
                                       std::string label)
    : p_(p), N_(precision), f_(std::move(f_coeffs)), label_(std::move(label)) {
  if (!is_prime(p)) fail(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
  if (p == 2) fail(ErrorKind::InvalidInput, "p must be odd");
  if (precision < 1) fail(ErrorKind::InvalidInput, "precision must be at least 1");
  trim(f_);
  if (f_.size() < 2 || f_.back() != 1) fail(ErrorKind::InvalidInput, "f must be monic");
  long deg = static_cast<long>(f_.size()) - 1;
  if (deg % 2 == 0) fail(ErrorKind::InvalidInput, "f must have odd degree 2g+1");
  g_ = static_cast<int>((deg - 1) / 2);
  if (g_ < 2) fail(ErrorKind::InvalidInput, "genus must be at least 2");
  disc_ = discriminant(f_);
  if (disc_ == 0) fail(ErrorKind::BadReduction, "f has a repeated root (discriminant 0)");
  int v = valuation(disc_, p);
  if (v > 0) {
    fail(ErrorKind::BadReduction,
         "bad reduction at " + std::to_string(p) + ": disc valuation " + std::to_string(v));
  }
  ctx_ = PadicContext::create(p, 1, precision);
}

FqPoly HyperellipticCurve::reduction(const FiniteField& F) const {
  FqPoly r;
  for (const auto& c : f_) r.push_back(F.from_int(mod(c, Integer(p_)).get_si()));
  fq_trim(r);
  return r;
}

FrobeniusStructure frobenius_matrix(const HyperellipticCurve& curve, int working_precision) {
  long p = curve.p();
  int g = curve.genus();
  int N = curve.precision();
  long K = 1;
  while (tail_bound(p, g, K) < N) ++K;
  bool automatic = working_precision <= 0;
  int W = working_precision;
  if (automatic) {
    int extra = floor_log(p, Integer(std::max(20, 4 * g * N) - 1)) + 1;
    W = N + extra + tracked_loss_estimate(p, K);
  }
  KedlayaRun run = kedlaya(curve, W, K);
  for (int attempt = 0; automatic && run.precision < N && attempt < 4; ++attempt) {
    W += N - run.precision;
    run = kedlaya(curve, W, K);
  }

  FrobeniusStructure S;
  S.p = p;
  S.genus = g;
  S.F = std::move(run.F);
  S.precision = run.precision;
  S.working_precision = W;
  S.terms = static_cast<int>(K);
  S.lost_digits = W - run.precision;
  auto [V, vp] = verschiebung_matrix(S.F, p, S.precision);
  S.V = std::move(V);
  S.v_precision = vp;
  for (int i = g; i < 2 * g; ++i)
    for (int j = 0; j < 2 * g; ++j) {
      if (mod(S.V[i][j], Integer(p)) != 0) {
        fail(ErrorKind::LatticeMismatch, "image of V is not inside H0(Omega) + pH1");
      }
    }
  return S;
}

IntMatrix matmul_mod(const IntMatrix& A, const IntMatrix& B, const Integer& m) {
  size_t n = A.size(), k = B.size(), l = B.empty() ? 0 : B[0].size();
  IntMatrix C(n, std::vector<Integer>(l, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < l; ++j) {
      Integer s = 0;
      for (size_t t = 0; t < k; ++t) s += A[i][t] * B[t][j];
      C[i][j] = mod(s, m);
    }
  return C;
}

std::vector<Integer> charpoly_mod(const IntMatrix& A, const Integer& m) {
  size_t n = A.size();
  if (n == 0) return {1};
  // Berkowitz, coefficients high to low while building.
  std::vector<Integer> poly = {1, mod(-A[0][0], m)};
  for (size_t k = 1; k < n; ++k) {
    std::vector<Integer> col(k + 2, 0);
    col[0] = 1;
    col[1] = mod(-A[k][k], m);
    std::vector<Integer> v(k);
    for (size_t i = 0; i < k; ++i) v[i] = A[i][k];
    for (size_t j = 0; j < k; ++j) {
      Integer dot = 0;
      for (size_t i = 0; i < k; ++i) dot += A[k][i] * v[i];
      col[2 + j] = mod(-dot, m);
      std::vector<Integer> w(k, 0);
      for (size_t r = 0; r < k; ++r) {
        for (size_t c = 0; c < k; ++c) w[r] += A[r][c] * v[c];
        w[r] = mod(w[r], m);
      }
      v = std::move(w);
    }
    std::vector<Integer> next(k + 2, 0);
    for (size_t i = 0; i < k + 2; ++i) {
      for (size_t j = 0; j <= std::min(i, k); ++j) next[i] += col[i - j] * poly[j];
      next[i] = mod(next[i], m);
    }
    poly = std::move(next);
  }
  std::reverse(poly.begin(), poly.end());
  return poly;
}

bool fv_identity_holds(const FrobeniusStructure& S) {
  int M = std::min(S.precision, S.v_precision);
  Integer m = power(S.p, static_cast<unsigned long>(M));
  auto FV = matmul_mod(S.F, S.V, m);
  auto VF = matmul_mod(S.V, S.F, m);
  for (size_t i = 0; i < FV.size(); ++i)
    for (size_t j = 0; j < FV.size(); ++j) {
      Integer want = i == j ? mod(Integer(S.p), m) : Integer(0);
      if (FV[i][j] != want || VF[i][j] != want) return false;
    }
  return true;
}

CohomologyClass::CohomologyClass(int genus, std::vector<PadicNumber> coords)
    : g_(genus), coords_(std::move(coords)) {
  if (static_cast<int>(coords_.size()) != 2 * g_) {
    fail(ErrorKind::InvalidInput, "a class needs 2g coordinates");
  }
  for (const auto& c : coords_) {
    if (!c.context()->compatible(*coords_.front().context())) {
      fail(ErrorKind::ContextMismatch, "class coordinates from different rings");
    }
  }
}

CohomologyClass CohomologyClass::basis(int genus, const ContextPtr& ctx, int i) {
  if (i < 0 || i >= 2 * genus) fail(ErrorKind::InvalidInput, "basis index out of range");
  std::vector<PadicNumber> c(2 * genus, PadicNumber(ctx));
  c[i] = PadicNumber::one(ctx);
  return CohomologyClass(genus, std::move(c));
}

int CohomologyClass::precision() const {
  int m = coords_.front().precision();
  for (const auto& c : coords_) m = std::min(m, c.precision());
  return m;
}

bool CohomologyClass::is_holomorphic() const {
  for (int j = g_; j < 2 * g_; ++j)
    if (!coords_[j].is_zero()) return false;
  return true;
}

CohomologyClass CohomologyClass::operator+(const CohomologyClass& o) const {
  std::vector<PadicNumber> c;
  for (size_t j = 0; j < coords_.size(); ++j) c.push_back(coords_[j] + o.coords_.at(j));
  return CohomologyClass(g_, std::move(c));
}

CohomologyClass CohomologyClass::operator-(const CohomologyClass& o) const {
  std::vector<PadicNumber> c;
  for (size_t j = 0; j < coords_.size(); ++j) c.push_back(coords_[j] - o.coords_.at(j));
  return CohomologyClass(g_, std::move(c));
}

CohomologyClass CohomologyClass::operator*(const PadicNumber& a) const {
  std::vector<PadicNumber> c;
  for (const auto& x : coords_) c.push_back(x * a);
  return CohomologyClass(g_, std::move(c));
}

bool operator==(const CohomologyClass& a, const CohomologyClass& b) {
  if (a.g_ != b.g_) return false;
  for (size_t j = 0; j < a.coords_.size(); ++j)
    if (!(a.coords_[j] == b.coords_[j])) return false;
  return true;
}

namespace {

CohomologyClass apply_matrix(const IntMatrix& A, int mprec, const CohomologyClass& eta, long twist) {
  int g = eta.genus();
  if (static_cast<int>(A.size()) != 2 * g) fail(ErrorKind::InvalidInput, "genus mismatch");
  int M = std::min(eta.precision(), mprec);
  auto ctx = eta.context()->with_precision(M);
  std::vector<PadicNumber> tw;
  for (const auto& c : eta.coords()) {
    tw.push_back(PadicNumber(ctx, frobenius_auto(c, twist).truncate(M).coeffs()));
  }
  std::vector<PadicNumber> out(2 * g, PadicNumber(ctx));
  for (int j = 0; j < 2 * g; ++j)
    for (int i = 0; i < 2 * g; ++i) {
      if (A[j][i] != 0) out[j] += tw[i] * A[j][i];
    }
  return CohomologyClass(g, std::move(out));
}

}  // namespace

CohomologyClass frobenius_apply(const FrobeniusStructure& S, const CohomologyClass& eta) {
  return apply_matrix(S.F, S.precision, eta, 1);
}

CohomologyClass verschiebung_apply(const FrobeniusStructure& S, const CohomologyClass& eta) {
  return apply_matrix(S.V, S.v_precision, eta, -1);
}

int class_valuation(const CohomologyClass& eta) {
  std::optional<int> best;
  for (const auto& c : eta.coords()) {
    auto v = valuation(c);
    if (v && (!best || *v < *best)) best = v;
  }
  if (!best) fail(ErrorKind::AtPrecisionZero, "class vanishes at working precision");
  return *best;
}

DifferentialModP reduce_bar(const CohomologyClass& eta) {
  int v = class_valuation(eta);
  int g = eta.genus();
  const auto& ctx = eta.context();
  DifferentialModP w;
  w.field = FiniteField::get(ctx->p(), ctx->f());
  w.genus = g;
  for (int j = 0; j < 2 * g; ++j) {
    PadicNumber c = eta.coords()[j].truncate(eta.precision()).divide_by_p_power(v);
    auto r = c.residue();
    FiniteField::Elem e = w.field->from_coeffs(r);
    if (j >= g && e != 0) {
      fail(ErrorKind::NotInHolomorphicPlusP,
           "normalized class has a non-holomorphic component that is nonzero mod p");
    }
    if (j < g) w.h.push_back(e);
  }
  fq_trim(w.h);
  return w;
}

CurvePointBar CurvePointBar::finite(const HyperellipticCurve& curve, FieldPtr field,
                                    FiniteField::Elem a, FiniteField::Elem b) {
  if (field->p() != curve.p()) fail(ErrorKind::ContextMismatch, "point over the wrong prime");
  if (b == 0) return weierstrass(curve, std::move(field), a);
  FiniteField::Elem fa = eval_reduced(*field, curve.reduction(*field), a);
  if (field->mul(b, b) != fa) fail(ErrorKind::NotOnVariety, "b^2 != f(a) on the reduced curve");
  return {Kind::FiniteNonWeierstrass, std::move(field), a, b};
}

CurvePointBar CurvePointBar::weierstrass(const HyperellipticCurve& curve, FieldPtr field,
                                         FiniteField::Elem a) {
  if (field->p() != curve.p()) fail(ErrorKind::ContextMismatch, "point over the wrong prime");
  if (eval_reduced(*field, curve.reduction(*field), a) != 0) {
    fail(ErrorKind::NotOnVariety, "f(a) != 0, not a Weierstrass point");
  }
  return {Kind::Weierstrass, std::move(field), a, 0};
}

CurvePointBar CurvePointBar::infinity(const HyperellipticCurve& curve) {
  return {Kind::Infinity, FiniteField::get(curve.p(), 1), 0, 0};
}

std::vector<CurvePointBar> points_over(const HyperellipticCurve& curve, int k) {
  auto F = FiniteField::get(curve.p(), k);
  FqPoly fb = curve.reduction(*F);
  std::vector<CurvePointBar> out;
  for (long x = 0; x < F->size(); ++x) {
    auto v = fq_eval(*F, fb, x);
    if (v == 0) {
      out.push_back({CurvePointBar::Kind::Weierstrass, F, x, 0});
      continue;
    }
    auto s = F->sqrt(v);
    if (!s) continue;
    auto y1 = std::min(*s, F->neg(*s)), y2 = std::max(*s, F->neg(*s));
    out.push_back({CurvePointBar::Kind::FiniteNonWeierstrass, F, x, y1});
    out.push_back({CurvePointBar::Kind::FiniteNonWeierstrass, F, x, y2});
  }
  out.push_back(CurvePointBar::infinity(curve));
  return out;
}

int ord_at_point(const DifferentialModP& w, const CurvePointBar& z) {
  if (w.h.empty()) fail(ErrorKind::InvalidInput, "zero differential has no order");
  if (z.kind == CurvePointBar::Kind::Infinity) return 2 * w.genus - 2 - 2 * fq_degree(w.h);
  auto K = common_field(w.field->p(), w.field->degree(), z.field->degree());
  FqPoly h = fq_embed(*K, *w.field, w.h);
  FiniteField::Elem a = K->embed_from(*z.field, z.x);
  int m = fq_root_multiplicity(*K, h, a);
  return z.kind == CurvePointBar::Kind::Weierstrass ? 2 * m : m;
}

std::vector<std::vector<long>> cartier_matrix(const HyperellipticCurve& curve) {
  long p = curve.p();
  int g = curve.genus();
  Integer P = p;
  Poly h = {1};
  Poly fr = reduce_mod(curve.f(), P);
  for (long i = 0; i < (p - 1) / 2; ++i) h = mul_mod(h, fr, P);
  std::vector<std::vector<long>> C(g, std::vector<long>(g, 0));
  for (int j = 0; j < g; ++j)
    for (int i = 0; i < g; ++i) {
      long idx = (j + 1) * p - (i + 1);
      if (idx < static_cast<long>(h.size())) C[j][i] = h[idx].get_si();
    }
  return C;
}

bool is_ordinary(const HyperellipticCurve& curve) {
  auto C = cartier_matrix(curve);
  IntMatrix M;
  for (const auto& row : C) M.emplace_back(row.begin(), row.end());
  return mod(determinant(M), Integer(curve.p())) != 0;
}

std::vector<Integer> point_counts(const HyperellipticCurve& curve, int kmax, int jobs) {
  std::vector<Integer> counts;
  jobs = std::max(1, jobs);
  for (int k = 1; k <= kmax; ++k) {
    auto F = FiniteField::get(curve.p(), k);
    FqPoly fb = curve.reduction(*F);
    long q = F->size();
    std::vector<long> partial(jobs, 0);
    auto work = [&](int w) {
      long lo = q * w / jobs, hi = q * (w + 1) / jobs, c = 0;
      for (long x = lo; x < hi; ++x) {
        auto v = fq_eval(*F, fb, x);
        c += v == 0 ? 1 : (F->is_square(v) ? 2 : 0);
      }
      partial[w] = c;
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    counts.push_back(Integer(std::accumulate(partial.begin(), partial.end(), 1L)));
  }
  return counts;
}

std::vector<Integer> zeta_numerator_bruteforce(const HyperellipticCurve& curve, int jobs) {
  long p = curve.p();
  int g = curve.genus();
  auto N = point_counts(curve, g, jobs);
  std::vector<Integer> s(g + 1, 0);
  for (int k = 1; k <= g; ++k) s[k] = power(p, static_cast<unsigned long>(k)) + 1 - N[k - 1];
  std::vector<Integer> a(2 * g + 1, 0);
  a[0] = 1;
  for (int j = 1; j <= g; ++j) {
    Integer acc = 0;
    for (int i = 1; i <= j; ++i) acc += s[i] * a[j - i];
    a[j] = -acc / j;
  }
  for (int j = 0; j < g; ++j) a[2 * g - j] = power(p, static_cast<unsigned long>(g - j)) * a[j];
  return a;
}

}  // namespace bcml
