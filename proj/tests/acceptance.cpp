// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Every oracle here is computed independently of the library
// routine under test.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "bcml/bounds.hpp"
#include "bcml/coleman.hpp"
#include "bcml/derham.hpp"
#include "bcml/error.hpp"
#include "bcml/series.hpp"
#include "bcml/witt.hpp"
#include "curves.hpp"
#include "support.hpp"

using namespace bcml;
using namespace bcml::testing;
namespace fs = std::filesystem;

namespace {

// Collects failures without stopping at the first one.
struct Tally {
  long checks = 0;
  long failures = 0;
  std::string first;
  std::string info;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first = what;
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<void(Tally&)> body;
};

// ---------------------------------------------------------------------------
// Small exact helpers shared by several criteria.

Integer ipow(const Integer& b, long e) {
  Integer r = 1;
  for (long i = 0; i < e; ++i) r *= b;
  return r;
}

Integer factorial(long n) {
  Integer r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

Integer posmod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

std::vector<CurvePointBar> sample_points(const HyperellipticCurve& C, size_t count) {
  auto pts = points_over(C, 1);
  for (const auto& z : points_over(C, 2)) {
    if (pts.size() >= count) break;
    if (z.kind != CurvePointBar::Kind::Infinity && z.field->degree_of(z.x) == 2) pts.push_back(z);
  }
  if (pts.size() > count) pts.resize(count);
  return pts;
}

struct Fixture {
  HyperellipticCurve curve;
  FrobeniusStructure S;
};

const Fixture& fixture(const StoredCurve& sc) {
  static std::map<std::string, Fixture> cache;
  auto it = cache.find(sc.label);
  if (it != cache.end()) return it->second;
  auto C = make_curve(sc, 10);
  auto S = frobenius_matrix(C);
  return cache.emplace(sc.label, Fixture{C, S}).first->second;
}

CohomologyClass random_holomorphic(const Fixture& fx) {
  int g = fx.curve.genus();
  auto ctx = fx.curve.context()->with_precision(fx.S.v_precision);
  while (true) {
    std::vector<PadicNumber> c(2 * g, PadicNumber(ctx));
    for (int j = 0; j < g; ++j) c[j] = random_element(ctx);
    CohomologyClass eta(g, c);
    if (class_valuation(eta) == 0) return eta;
  }
}

// ---------------------------------------------------------------------------
// 1. Formula exactness through the command-line tool.

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args, const fs::path& out, const fs::path& manifest) {
  std::string cmd = shell_quote(BCML_CLI) + " " + args + " --out " + shell_quote(out.string()) +
                    " --manifest " + shell_quote(manifest.string()) + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

fs::path scratch_dir() {
  fs::path d = fs::temp_directory_path() / ("bcml-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

void formula_exactness(Tally& t) {
  auto dir = scratch_dir();
  auto value_of = [&](const std::string& args) {
    fs::path out = dir / "bound.json", man = dir / "bound.manifest.json";
    int rc = run_cli(args, out, man);
    t.check(rc == 0, args + " exited with " + std::to_string(rc));
    auto j = nlohmann::json::parse(slurp(out), nullptr, false);
    if (j.is_discarded() || !j.contains("value") || !j["value"].is_string()) {
      t.check(false, args + " produced no string value");
      return Integer(-1);
    }
    return Integer(j["value"].get<std::string>());
  };
  // The printed formulas, evaluated by plain repeated multiplication.
  auto bracket = [](long g, long p) { return Integer(p * (2 * g - 2) + 6 * g); };
  Integer mm = ipow(5, 4) * ipow(3, 2) * bracket(2, 5) * factorial(2);
  Integer red = ipow(5, 6) * ipow(3, 2) * bracket(2, 5) * factorial(2);

  Integer got_red = value_of("bound ml-red --g 2 --r 0 --p 5");
  Integer got_mm = value_of("bound mm --g 2 --p 5");
  t.check(got_red == 6187500, "ml-red printed " + got_red.get_str());
  t.check(got_mm == 247500, "mm printed " + got_mm.get_str());
  t.check(red == 6187500 && got_red == red, "ml-red differs from the oracle");
  t.check(mm == 247500 && got_mm == mm, "mm differs from the oracle");
  t.check(mordell_lang_reduction_bound(2, 0, 5) == red, "library ml-red differs");
  t.check(buium_mm_bound(2, 5) == mm, "library mm differs");
  fs::remove_all(dir);
  t.info = "ml-red=" + got_red.get_str() + " mm=" + got_mm.get_str();
}

// ---------------------------------------------------------------------------
// 2. p-derivation axioms and the Frobenius lift.

// C_p(x, y) = -sum_{0<k<p} (binom(p,k)/p) x^k y^{p-k}
PadicNumber cp_oracle(const PadicNumber& x, const PadicNumber& y) {
  long p = x.prime();
  PadicNumber acc(x.context());
  for (long k = 1; k < p; ++k) {
    Integer c = Integer(binomial(p, k)) / p;
    acc -= x.pow(static_cast<unsigned long>(k)) * y.pow(static_cast<unsigned long>(p - k)) * c;
  }
  return acc;
}

void derivation_axioms(Tally& t) {
  long pairs = 0;
  for (long p : {2L, 3L, 5L, 7L}) {
    for (int round = 0; round < 1000; ++round) {
      int f = round % 2 ? 2 : 1;
      auto ctx = PadicContext::create(p, f, 12);
      auto x = random_element(ctx), y = random_element(ctx);
      auto up = static_cast<unsigned long>(p);
      std::string tag = " p=" + std::to_string(p) + " f=" + std::to_string(f);
      t.check(delta_std(PadicNumber::one(ctx)).is_zero(), "(i) delta(1) != 0" + tag);
      t.check(delta_std(x + y) == delta_std(x) + delta_std(y) + cp_oracle(x, y), "(ii)" + tag);
      t.check(delta_std(x * y) == x.pow(up) * delta_std(y) + y.pow(up) * delta_std(x) +
                                      delta_std(x) * delta_std(y) * Integer(p),
              "(iii)" + tag);
      auto phi = [](const PadicNumber& a) { return frobenius_lift(a); };
      t.check(phi(x + y) == phi(x) + phi(y), "phi additive" + tag);
      t.check(phi(x * y) == phi(x) * phi(y), "phi multiplicative" + tag);
      t.check(phi(PadicNumber::one(ctx)).is_one(), "phi(1) != 1" + tag);
      t.check((phi(x) - x.pow(up)).truncate(1).is_zero(), "phi is not a lift" + tag);
      if (f == 1) {
        // On Z_p the lift is the identity: delta(n) = (n - n^p)/p exactly.
        Integer n = x.rational_part();
        Integer want = posmod((n - ipow(n, p)) / p, ipow(p, 11));
        t.check(posmod(delta_std(x).rational_part(), ipow(p, 11)) == want, "delta on Z_p" + tag);
      }
      ++pairs;
    }
  }
  t.info = std::to_string(pairs) + " pairs";
}

// ---------------------------------------------------------------------------
// 3. Ghost map and x -> (x, delta x).

void witt_correspondence(Tally& t) {
  for (long p : {2L, 3L, 5L, 7L}) {
    auto ctx = PadicContext::create(p, 2, 12);
    auto up = static_cast<unsigned long>(p);
    auto ghost_oracle = [&](const WittPair<PadicNumber>& w) {
      return WittPair<PadicNumber>{w.a0, w.a0.pow(up) + w.a1 * Integer(p)};
    };
    for (int round = 0; round < 1000; ++round) {
      auto x = random_element(ctx), y = random_element(ctx);
      auto z = random_element(ctx), w = random_element(ctx);
      WittPair<PadicNumber> u{x, y}, v{z, w};
      auto gu = ghost_oracle(u), gv = ghost_oracle(v);
      auto gs = ghost(witt_add(u, v)), gp = ghost(witt_mul(u, v));
      std::string tag = " p=" + std::to_string(p);
      t.check(ghost(u).a0 == gu.a0 && ghost(u).a1 == gu.a1, "ghost formula" + tag);
      t.check(gs.a0 == gu.a0 + gv.a0 && gs.a1 == gu.a1 + gv.a1, "ghost additive" + tag);
      t.check(gp.a0 == gu.a0 * gv.a0 && gp.a1 == gu.a1 * gv.a1, "ghost multiplicative" + tag);

      auto s = witt_add(witt_section(x), witt_section(z));
      auto m = witt_mul(witt_section(x), witt_section(z));
      t.check(s.a0 == x + z && s.a1 == delta_std(x + z), "section additive" + tag);
      t.check(m.a0 == x * z && m.a1 == delta_std(x * z), "section multiplicative" + tag);
      t.check(witt_section(x).a0 == x, "first projection" + tag);
      auto one = witt_section(PadicNumber::one(ctx));
      t.check(one.a0.is_one() && one.a1.is_zero(), "section(1)" + tag);

      // Over Z the ghost map is injective, so it pins down the Witt sum exactly.
      Integer a = Integer(uniform(-500, 500)), b = Integer(uniform(-500, 500));
      Integer c = Integer(uniform(-500, 500)), d = Integer(uniform(-500, 500));
      auto zs = witt_add(p, {a, b}, {c, d});
      auto zm = witt_mul(p, {a, b}, {c, d});
      using Ghost = std::pair<Integer, Integer>;
      auto zg = [&](const WittPair<Integer>& q) { return Ghost(q.a0, ipow(q.a0, p) + p * q.a1); };
      auto g1 = zg({a, b}), g2 = zg({c, d});
      t.check(zg(zs) == Ghost(g1.first + g2.first, g1.second + g2.second), "Z sum" + tag);
      t.check(zg(zm) == Ghost(g1.first * g2.first, g1.second * g2.second), "Z product" + tag);
    }
  }
  t.info = "4000 pairs";
}

// ---------------------------------------------------------------------------
// 4. Jet prolongation at constructed solutions.

void jet_prolongation(Tally& t) {
  long systems = 0;
  for (int trial = 0; trial < 50; ++trial) {
    long p = std::vector<long>{2, 3, 5, 7}[uniform(0, 3)];
    int nv = static_cast<int>(uniform(1, 3));
    std::vector<std::string> vars;
    for (int i = 0; i < nv; ++i) vars.push_back("x" + std::to_string(i));
    std::vector<Integer> a;
    for (int i = 0; i < nv; ++i) a.push_back(Integer(uniform(-20, 20)));

    // f = h - h(a) vanishes at a by construction.
    std::vector<IntPolynomial> system;
    int neq = static_cast<int>(uniform(1, 3));
    for (int e = 0; e < neq; ++e) {
      IntPolynomial h(vars);
      int terms = static_cast<int>(uniform(1, 5));
      for (int k = 0; k < terms; ++k) {
        IntPolynomial::Exponents ex(nv, 0);
        int deg = static_cast<int>(uniform(0, 4));
        for (int s = 0; s < deg; ++s) ex[uniform(0, nv - 1)]++;
        h.add_term(ex, Integer(uniform(-9, 9)));
      }
      Integer ha = h.evaluate(a, Integer(0));
      system.push_back(h - IntPolynomial::constant(vars, ha));
    }

    std::vector<Integer> da;
    for (const auto& v : a) da.push_back((v - ipow(v, p)) / p);
    std::vector<Integer> full = a;
    full.insert(full.end(), da.begin(), da.end());
    std::string tag = " trial " + std::to_string(trial);
    try {
      for (const auto& f : system) {
        IntPolynomial df = prolong(f, p);
        t.check(df.evaluate(full, Integer(0)) == 0, "prolonged system nonzero" + tag);
      }
      auto ctx = PadicContext::create(p, 1, 10);
      std::vector<PadicNumber> pt;
      for (const auto& v : a) pt.push_back(PadicNumber(ctx, v));
      auto jet = nabla(pt, system, true);
      for (int i = 0; i < nv; ++i) {
        t.check(jet.base[i] == jet.field->from_int(posmod(a[i], p).get_si()), "nabla base" + tag);
        t.check(jet.derivative[i] == jet.field->from_int(posmod(da[i], p).get_si()),
                "nabla derivative" + tag);
      }
    } catch (const Error& e) {
      t.check(false, std::string(e.what()) + tag);
    }
    ++systems;
  }
  t.info = std::to_string(systems) + " systems";
}

// ---------------------------------------------------------------------------
// 5. Newton polygons of products and direct evaluation.

using Poly = std::vector<Integer>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

long unit_integer(long p) {
  while (true) {
    long u = uniform(1, 1000);
    if (u % p) return uniform(0, 1) ? u : -u;
  }
}

void newton_polygons(Tally& t) {
  for (int trial = 0; trial < 100; ++trial) {
    long p = std::vector<long>{2, 3, 5, 7}[uniform(0, 3)];
    int r = static_cast<int>(uniform(1, 6));
    Poly f = {1};
    std::map<long, long> want;
    for (int i = 0; i < r; ++i) {
      long a = uniform(0, 6);
      f = poly_mul(f, {Integer(-unit_integer(p)) * ipow(p, a), 1});
      if (a > 0) want[a]++;
    }
    std::vector<Slope> expect;
    for (auto [a, m] : want) expect.push_back({Rational(a), m});
    try {
      t.check(negative_slopes(newton_polygon(PadicSeries::from_integers(p, f))) == expect,
              "slope multiset, trial " + std::to_string(trial));
    } catch (const Error& e) {
      t.check(false, e.what());
    }
  }

  int compared = 0;
  for (int trial = 0; compared < 100 && trial < 10000; ++trial) {
    long p = std::vector<long>{2, 3, 5, 7}[uniform(0, 3)];
    Poly f = {1};
    int r = static_cast<int>(uniform(1, 5));
    for (int i = 0; i < r; ++i) f = poly_mul(f, {Integer(-unit_integer(p)) * ipow(p, uniform(0, 5)), 1});
    long k = uniform(1, 6);
    Integer z = Integer(unit_integer(p)) * ipow(p, k);
    auto P = newton_polygon(PadicSeries::from_integers(p, f));
    auto pred = value_valuation(P, Rational(k));
    if (pred.is_slope()) continue;
    Integer acc = 0;
    for (size_t i = f.size(); i-- > 0;) acc = acc * z + f[i];
    t.check(acc != 0 && Rational(valuation(acc, p)) == pred.value,
            "value_valuation at val " + std::to_string(k));
    ++compared;
  }
  t.check(compared == 100, "only " + std::to_string(compared) + " evaluation points");
  t.info = "100 products, " + std::to_string(compared) + " evaluations";
}

// ---------------------------------------------------------------------------
// 6. Frobenius matrices against an independent zeta function.

// F_{p^k} for k <= 3 as polynomials modulo a monic irreducible of degree k.
struct SmallField {
  long p;
  int k;
  std::vector<long> mod;  // monic, low to high, size k+1

  SmallField(long p_, int k_) : p(p_), k(k_) {
    if (k == 1) {
      mod = {0, 1};
      return;
    }
    // Degree 2 and 3 polynomials are irreducible iff they have no root.
    std::vector<long> c(k + 1, 0);
    c[k] = 1;
    for (long code = 0;; ++code) {
      long x = code;
      for (int i = 0; i < k; ++i) {
        c[i] = x % p;
        x /= p;
      }
      bool root = false;
      for (long r = 0; r < p && !root; ++r) {
        long v = 0;
        for (int i = k; i >= 0; --i) v = (v * r + c[i]) % p;
        root = v == 0;
      }
      if (!root) break;
    }
    mod = c;
  }

  using E = std::vector<long>;
  E add(const E& a, const E& b) const {
    E r(k);
    for (int i = 0; i < k; ++i) r[i] = (a[i] + b[i]) % p;
    return r;
  }
  E mul(const E& a, const E& b) const {
    std::vector<long> r(2 * k - 1, 0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    for (int d = 2 * k - 2; d >= k; --d) {
      long c = r[d];
      if (!c) continue;
      for (int i = 0; i <= k; ++i) r[d - k + i] = ((r[d - k + i] - c * mod[i]) % p + p) % p;
    }
    r.resize(k);
    return r;
  }
  E pow(E a, Integer e) const {
    E r(k, 0);
    r[0] = 1;
    while (e > 0) {
      if (e % 2 != 0) r = mul(r, a);
      a = mul(a, a);
      e /= 2;
    }
    return r;
  }
  E constant(const Integer& c) const {
    E r(k, 0);
    r[0] = posmod(c, p).get_si();
    return r;
  }
  long size() const { return ipow(p, k).get_si(); }
  E element(long code) const {
    E r(k);
    for (int i = 0; i < k; ++i) {
      r[i] = code % p;
      code /= p;
    }
    return r;
  }
};

Integer count_points(const std::vector<Integer>& f, long p, int k) {
  SmallField F(p, k);
  Integer q = ipow(p, k);
  Integer half = (q - 1) / 2;
  Integer count = 1;  // the point at infinity
  SmallField::E one = F.constant(1);
  SmallField::E zero(k, 0);
  for (long code = 0; code < F.size(); ++code) {
    auto x = F.element(code);
    SmallField::E v = zero;
    for (size_t i = f.size(); i-- > 0;) v = F.add(F.mul(v, x), F.constant(f[i]));
    if (v == zero) {
      count += 1;
    } else if (F.pow(v, half) == one) {
      count += 2;
    }
  }
  return count;
}

// L(T) from #X(F_{p^k}), k = 1..g, by Newton's identities and the functional equation.
std::vector<Integer> zeta_oracle(const std::vector<Integer>& f, long p, int g) {
  std::vector<Integer> s(g + 1, 0);
  for (int k = 1; k <= g; ++k) s[k] = ipow(p, k) + 1 - count_points(f, p, k);
  std::vector<Integer> e(g + 1, 0);
  e[0] = 1;
  for (int k = 1; k <= g; ++k) {
    Integer acc = 0;
    for (int i = 1; i <= k; ++i) acc += (i % 2 ? 1 : -1) * e[k - i] * s[i];
    e[k] = acc / k;
  }
  std::vector<Integer> L(2 * g + 1, 0);
  for (int k = 0; k <= g; ++k) L[k] = (k % 2 ? -1 : 1) * e[k];
  for (int k = 0; k < g; ++k) L[2 * g - k] = ipow(p, g - k) * L[k];
  return L;
}

// det(T - A) over Q by Faddeev-LeVerrier, low to high.
std::vector<Rational> charpoly_oracle(const IntMatrix& A) {
  size_t n = A.size();
  using RM = std::vector<std::vector<Rational>>;
  RM M(n, std::vector<Rational>(n, 0)), AM(n, std::vector<Rational>(n, 0));
  std::vector<Rational> c(n + 1, 0);
  c[n] = 1;
  for (size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I, with M_0 = 0.
    RM next(n, std::vector<Rational>(n, 0));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        Rational acc = 0;
        for (size_t l = 0; l < n; ++l) acc += Rational(A[i][l]) * M[l][j];
        next[i][j] = acc + (i == j ? c[n - k + 1] : Rational(0));
      }
    M = next;
    Rational tr = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t l = 0; l < n; ++l) tr += Rational(A[i][l]) * M[l][i];
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return c;
}

Integer rational_mod(const Rational& r, const Integer& m) {
  return posmod(r.get_num() * inverse_mod(r.get_den(), m), m);
}

// Hasse-Witt matrix from f^{(p-1)/2}; the curve is ordinary iff it is invertible mod p.
bool ordinary_oracle(const std::vector<Integer>& f, long p, int g) {
  std::vector<Integer> h = {1};
  for (long e = 0; e < (p - 1) / 2; ++e) {
    std::vector<Integer> r(h.size() + f.size() - 1, 0);
    for (size_t i = 0; i < h.size(); ++i)
      for (size_t j = 0; j < f.size(); ++j) r[i + j] += h[i] * f[j];
    h = r;
  }
  std::vector<std::vector<long>> H(g, std::vector<long>(g));
  for (int i = 1; i <= g; ++i)
    for (int j = 1; j <= g; ++j) {
      long idx = i * p - j;
      H[i - 1][j - 1] = idx < static_cast<long>(h.size()) ? posmod(h[idx], p).get_si() : 0;
    }
  // Rank by Gaussian elimination mod p.
  int rank = 0;
  for (int col = 0; col < g && rank < g; ++col) {
    int piv = -1;
    for (int r = rank; r < g; ++r)
      if (H[r][col]) piv = r;
    if (piv < 0) continue;
    std::swap(H[piv], H[rank]);
    long inv = inverse_mod(Integer(H[rank][col]), Integer(p)).get_si();
    for (int r = 0; r < g; ++r) {
      if (r == rank || !H[r][col]) continue;
      long factor = H[r][col] * inv % p;
      for (int c = 0; c < g; ++c) H[r][c] = ((H[r][c] - factor * H[rank][c]) % p + p) % p;
    }
    ++rank;
  }
  return rank == g;
}

void frobenius_validity(Tally& t) {
  int g2 = 0, g3 = 0;
  long reductions = 0;
  for (const auto& sc : stored_curves()) {
    int g = (static_cast<int>(sc.f.size()) - 2) / 2;
    if (!((g == 2 && (sc.p == 5 || sc.p == 7)) || (g == 3 && sc.p == 7))) continue;
    const auto& fx = fixture(sc);
    const auto& S = fx.S;
    std::string tag = " " + sc.label;
    t.check(S.precision >= 4, "N_out < 4" + tag);

    // (a) FV = VF = pI
    Integer m = ipow(sc.p, std::min(S.precision, S.v_precision));
    size_t d = S.F.size();
    bool fv = true;
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) {
        Integer fvij = 0, vfij = 0;
        for (size_t l = 0; l < d; ++l) {
          fvij += S.F[i][l] * S.V[l][j];
          vfij += S.V[i][l] * S.F[l][j];
        }
        Integer want = i == j ? Integer(sc.p) : Integer(0);
        fv = fv && posmod(fvij - want, m) == 0 && posmod(vfij - want, m) == 0;
      }
    t.check(fv, "FV = VF = p fails" + tag);

    // (b) charpoly(F) against L(T) from point counts
    Integer mo = ipow(sc.p, S.precision);
    auto cp = charpoly_oracle(S.F);
    auto L = zeta_oracle(sc.f, sc.p, g);
    bool zeta = cp.size() == L.size();
    for (size_t j = 0; zeta && j < L.size(); ++j) zeta = rational_mod(cp[d - j], mo) == posmod(L[j], mo);
    t.check(zeta, "charpoly differs from the zeta numerator" + tag);

    // (c) V of a holomorphic class reduces to a differential mod p. The
    // normalized reduction is only guaranteed when V keeps the valuation,
    // which holds for every class on an ordinary curve.
    bool ord = ordinary_oracle(sc.f, sc.p, g);
    for (int r = 0; r < 100; ++r) {
      auto eta = random_holomorphic(fx);
      auto v = verschiebung_apply(S, eta);
      bool rows = true;
      for (int i = g; i < 2 * g; ++i) {
        auto val = valuation(v.coords()[i]);
        rows = rows && (!val || *val >= 1);
      }
      t.check(rows, "V(eta) outside H0 + pH1" + tag);
      if (!ord && class_valuation(v) > 0) continue;
      try {
        auto w = reduce_bar(v);
        t.check(!w.h.empty(), "empty reduction" + tag);
        ++reductions;
      } catch (const Error& e) {
        t.check(false, std::string(e.what()) + tag);
      }
    }
    if (ord) (g == 2 ? g2 : g3)++;
  }
  t.check(g2 >= 6, "fewer than 6 ordinary genus-2 curves");
  t.check(g3 >= 2, "fewer than 2 ordinary genus-3 curves");
  t.info = std::to_string(g2) + " ordinary genus-2 and " + std::to_string(g3) + " genus-3 curves, " +
           std::to_string(reductions) + " reductions";
}

// ---------------------------------------------------------------------------
// 7. Coleman sequence laws.

void coleman_laws(Tally& t) {
  int curves = 0, ordinary = 0;
  long sequences = 0;
  for (const auto& sc : stored_curves()) {
    const auto& fx = fixture(sc);
    int g = fx.curve.genus();
    if (sc.p < 2 * g) continue;
    ++curves;
    bool ord = ordinary_oracle(sc.f, sc.p, g);
    ordinary += ord;
    auto ctx = fx.curve.context()->with_precision(fx.S.v_precision);
    std::vector<CohomologyClass> forms;
    for (int j = 0; j < g; ++j) forms.push_back(CohomologyClass::basis(g, ctx, j));
    for (int r = 0; r < 3; ++r) forms.push_back(random_holomorphic(fx));
    for (const auto& z : sample_points(fx.curve, 6)) {
      for (const auto& w : forms) {
        std::string tag = " " + sc.label;
        auto seq = coleman_sequence(fx.S, w, z, 5);
        for (long k : seq.k) t.check(k >= 1 && k <= 2 * g - 1, "k out of [1, 2g-1]" + tag);
        const auto& tr = seq.nseq.trace;
        for (size_t m = 1; m < tr.size(); ++m) {
          int step = tr[m] - tr[m - 1];
          t.check(step == 0 || step == 1, "trace step not in {0,1}" + tag);
        }
        Integer prev = -1;
        for (long i = 0; i < seq.length(); ++i) {
          Integer X = ipow(sc.p, seq.n[i]) * seq.k[i];
          t.check(X > prev, "abscissas not increasing" + tag);
          prev = X;
        }
        if (ord) t.check(seq.n == std::vector<long>{0, 1, 2, 3, 4}, "n_i != i on ordinary" + tag);
        ++sequences;
      }
    }
  }
  t.info = std::to_string(curves) + " curves (" + std::to_string(ordinary) + " ordinary), " +
           std::to_string(sequences) + " sequences";
}

// ---------------------------------------------------------------------------
// 8. The unramified test.

void unramified_theorem(Tally& t) {
  long tested = 0, excluded = 0, reciprocal_survivors = 0;
  for (const auto& sc : stored_curves()) {
    const auto& fx = fixture(sc);
    int g = fx.curve.genus();
    if (sc.p < 2 * g) continue;
    auto in = prepare_unramified(fx.curve, fx.S, 6);
    auto pts = sample_points(fx.curve, 10);
    t.check(pts.size() == 10, "fewer than 10 sample points on " + sc.label);
    for (const auto& z : pts) {
      for (long d = 2; d <= 20; ++d)
        for (long c = 1; c < d; ++c) {
          if (std::gcd(c, d) != 1) continue;
          Rational lambda(c, d);
          auto v = unramified_test(in, z, lambda);
          ++tested;
          if (v.excluded) {
            ++excluded;
          } else if (c == 1) {
            ++reciprocal_survivors;
          } else {
            t.check(false, sc.label + " lambda=" + lambda.get_str() + " NotExcluded");
          }
        }
    }
  }
  t.info = std::to_string(excluded) + "/" + std::to_string(tested) + " Excluded, " +
           std::to_string(reciprocal_survivors) + " NotExcluded at lambda=1/m";
}

// ---------------------------------------------------------------------------
// 9. Disc expansions.

// h(x0+T)/y(x0+T) with y from y^2 = f(x0+T) by the coefficient recurrence.
std::vector<PadicNumber> expansion_oracle(const HyperellipticCurve& C, const PadicNumber& x0,
                                          const PadicNumber& y0,
                                          const std::vector<PadicNumber>& h, long M) {
  auto ctx = x0.context();
  auto shift = [&](const std::vector<PadicNumber>& P) {
    std::vector<PadicNumber> out(M, PadicNumber(ctx));
    for (size_t n = 0; n < P.size(); ++n)
      for (long k = 0; k <= static_cast<long>(n) && k < M; ++k)
        out[k] += P[n] * x0.pow(n - k) * Integer(binomial(n, k));
    return out;
  };
  std::vector<PadicNumber> fp;
  for (const auto& c : C.f()) fp.push_back(PadicNumber(ctx, c));
  auto F = shift(fp);
  std::vector<PadicNumber> hh;
  for (const auto& c : h) {
    hh.push_back(PadicNumber(ctx, c.truncate(std::min(c.precision(), ctx->N())).coeffs()));
  }
  auto H = shift(hh);
  PadicNumber inv2y = invert(y0 * Integer(2));
  std::vector<PadicNumber> y(M, PadicNumber(ctx));
  y[0] = y0;
  for (long n = 1; n < M; ++n) {
    PadicNumber s = F[n];
    for (long i = 1; i < n; ++i) s -= y[i] * y[n - i];
    y[n] = s * inv2y;
  }
  PadicNumber iy0 = invert(y0);
  std::vector<PadicNumber> r(M, PadicNumber(ctx));
  r[0] = iy0;
  for (long n = 1; n < M; ++n) {
    PadicNumber s(ctx);
    for (long i = 1; i <= n; ++i) s += y[i] * r[n - i];
    r[n] = -(s * iy0);
  }
  std::vector<PadicNumber> out(M, PadicNumber(ctx));
  for (long i = 0; i < M; ++i)
    for (long j = 0; i + j < M; ++j) out[i + j] += H[i] * r[j];
  return out;
}

void disc_expansions(Tally& t) {
  const long M = 40;
  const auto& curves = stored_curves();
  int triples = 0;
  long support_checked = 0;
  while (triples < 20) {
    const auto& sc = curves[uniform(0, static_cast<long>(curves.size()) - 1)];
    const auto& fx = fixture(sc);
    std::vector<CurvePointBar> finite;
    for (const auto& z : sample_points(fx.curve, 16))
      if (z.kind == CurvePointBar::Kind::FiniteNonWeierstrass) finite.push_back(z);
    if (finite.empty()) continue;
    const auto& z = finite[uniform(0, static_cast<long>(finite.size()) - 1)];
    auto omega = random_holomorphic(fx);
    std::string tag = " " + sc.label + " triple " + std::to_string(triples);
    try {
      auto D = disc_expansion(fx.curve, fx.S, z, omega, M);
      int N = D.precision;
      t.check(N >= 1, "no precision left" + tag);
      auto ref = expansion_oracle(fx.curve, D.base.x0, D.base.y0, omega.coords(), M);
      t.check(D.coefficients[0].is_zero(), "constant term" + tag);
      for (long m = 1; m < M; ++m) {
        PadicValue dS = D.coefficients[m].scale(Rational(m));
        PadicValue want(0, ref[m - 1]);
        t.check(dS.absolute_precision() >= N && want.absolute_precision() >= N,
                "coefficient below N_out" + tag);
        t.check(dS.agrees_with(want, N), "dS/dT differs at T^" + std::to_string(m - 1) + tag);
      }
      auto seq = coleman_sequence(fx.S, omega, z, static_cast<int>(D.n.size()));
      for (long m = 1; m < M; ++m) {
        const auto& a = D.coefficients[m];
        if (a.is_zero() || a.absolute_precision() <= a.valuation() || a.valuation() > -1) continue;
        // val a_m = -i forces m in p^{n_j} Z_{>= k_j} for every j <= i.
        for (long j = 1; j < seq.length() && -j >= a.valuation(); ++j) {
          Integer step = ipow(sc.p, seq.n[j]);
          t.check(m % step == 0 && m / step >= seq.k[j], "support law at m=" + std::to_string(m) + tag);
          ++support_checked;
        }
      }
    } catch (const Error& e) {
      t.check(false, std::string(e.what()) + tag);
    }
    ++triples;
  }
  t.info = std::to_string(triples) + " triples, " + std::to_string(support_checked) +
           " support conditions";
}

// ---------------------------------------------------------------------------
// 10. Group lemmas.

// #(G/pG) and #G[p] by listing every element of prod Z/p^{e_i}.
std::pair<Integer, Integer> group_oracle(const std::vector<long>& orders, long p) {
  long total = 1;
  for (long m : orders) total *= m;
  std::set<std::vector<long>> image;
  long kernel = 0;
  std::vector<long> x(orders.size(), 0);
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (size_t i = 0; i < orders.size(); ++i) {
      x[i] = c % orders[i];
      c /= orders[i];
    }
    bool killed = true;
    std::vector<long> px(orders.size());
    for (size_t i = 0; i < orders.size(); ++i) {
      px[i] = x[i] * p % orders[i];
      killed = killed && px[i] == 0;
    }
    kernel += killed;
    image.insert(px);
  }
  return {Integer(total / static_cast<long>(image.size())), Integer(kernel)};
}

void group_lemmas(Tally& t) {
  long groups = 0;
  for (long p : {2L, 3L, 5L}) {
    for (const auto& G : abelian_p_groups(p, 4)) {
      std::vector<long> orders;
      for (const auto& m : G.cyclic_orders) orders.push_back(m.get_si());
      auto s = gamma_quotient_exact(G, p);
      auto e = gamma_quotient_enumerate(G, p);
      auto o = group_oracle(orders, p);
      long n = static_cast<long>(orders.size());
      std::string tag = " p=" + std::to_string(p) + " #factors=" + std::to_string(n);
      t.check(s == e, "structural vs enumeration" + tag);
      t.check(s == o, "structural vs oracle" + tag);
      t.check(s.first <= s.second && s.second <= ipow(p, n), "inequality chain" + tag);
      ++groups;
    }
  }
  t.info = std::to_string(groups) + " groups";
}

// ---------------------------------------------------------------------------
// 11. Stoll accounting.

void stoll_accounting(Tally& t) {
  long subspaces = 0;
  for (const auto& sc : stored_curves()) {
    auto C = make_curve(sc, 3);
    int g = C.genus();
    auto F = FiniteField::get(sc.p, 1);
    auto random_poly = [&] {
      while (true) {
        FqPoly h;
        for (int i = 0; i < g; ++i) h.push_back(uniform(0, sc.p - 1));
        fq_trim(h);
        if (!h.empty()) return h;
      }
    };
    std::vector<FqPoly> singles;
    for (int i = 0; i < g; ++i) {
      FqPoly h(i + 1, 0);
      h[i] = 1;
      singles.push_back(h);
    }
    for (int r = 0; r < 10; ++r) singles.push_back(random_poly());
    for (const auto& h : singles) {
      auto tab = stoll_vanishing_sum(C, {DifferentialModP{F, g, h}});
      t.check(tab.total == 2 * g - 2, "single differential total on " + sc.label);
    }
    int done = 0;
    while (done < 200) {
      int r = static_cast<int>(uniform(0, g - 1));
      std::vector<DifferentialModP> basis;
      for (int i = 0; i < g - r; ++i) basis.push_back(DifferentialModP{F, g, random_poly()});
      try {
        auto tab = stoll_vanishing_sum(C, basis);
        t.check(tab.total <= 2 * r, "total > 2r on " + sc.label);
        ++done;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotIndependent) {
          t.check(false, e.what());
          ++done;
        }
      }
    }
    subspaces += done;
  }
  t.info = std::to_string(subspaces) + " random subspaces";
}

// ---------------------------------------------------------------------------
// 12. CLI determinism.

void cli_determinism(Tally& t) {
  fs::path root = BCML_TEST_DIR;
  std::ifstream list(root / "golden" / "commands.txt");
  t.check(static_cast<bool>(list), "cannot read golden command list");
  auto dir = scratch_dir();
  std::string line;
  int commands = 0;
  while (std::getline(list, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '|')) fields.push_back(field);
    if (fields.size() != 4) {
      t.check(false, "malformed line: " + line);
      continue;
    }
    const std::string& name = fields[0];
    int code = std::stoi(fields[1]);
    std::string args = fields[3];
    for (size_t pos; (pos = args.find("@DATA@")) != std::string::npos;) {
      args.replace(pos, 6, (root / "data").string());
    }
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      fs::path out = dir / (name + "." + std::to_string(run) + ".out");
      fs::path man = dir / (name + "." + std::to_string(run) + ".manifest.json");
      fs::remove(out);
      fs::remove(man);
      int rc = run_cli(args, out, man);
      t.check(rc == code, name + ": exit " + std::to_string(rc));
      auto m = nlohmann::json::parse(slurp(man), nullptr, false);
      bool valid = !m.is_discarded() && m.is_object();
      for (const char* key : {"command", "inputs_sha256", "precision", "versions", "outputs",
                              "exit_code", "wall_time_seconds"}) {
        valid = valid && m.contains(key);
      }
      valid = valid && m["exit_code"] == code && m["inputs_sha256"].is_string() &&
              m["inputs_sha256"].get<std::string>().size() == 64;
      t.check(valid, name + ": invalid manifest");
      if (code == 0) outputs[run] = slurp(out);
    }
    if (code == 0) {
      t.check(!outputs[0].empty() && outputs[0] == outputs[1], name + ": runs differ");
      t.check(outputs[0] == slurp(root / "golden" / (name + ".out")), name + ": differs from golden");
    }
    ++commands;
  }
  fs::remove_all(dir);
  t.info = std::to_string(commands) + " commands";
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "formula exactness", 1, formula_exactness},
      {2, "p-derivation axioms", 5, derivation_axioms},
      {3, "Witt vectors and the delta section", 5, witt_correspondence},
      {4, "jet prolongation", 10, jet_prolongation},
      {5, "Newton polygons", 10, newton_polygons},
      {6, "Frobenius matrices", 120, frobenius_validity},
      {7, "Coleman sequence laws", 60, coleman_laws},
      {8, "unramified test", 300, unramified_theorem},
      {9, "disc expansion", 120, disc_expansions},
      {10, "group lemmas", 30, group_lemmas},
      {11, "Stoll accounting", 60, stoll_accounting},
      {12, "CLI determinism", 60, cli_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Tally t;
    auto start = std::chrono::steady_clock::now();
    try {
      c.body(t);
    } catch (const std::exception& e) {
      t.check(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) t.check(false, "runtime over " + std::to_string(c.limit_seconds) + " s");
    bool pass = t.failures == 0;
    failed += !pass;
    std::printf("%s %2d %-36s %8.2fs  %ld checks  %s%s\n", pass ? "PASS" : "FAIL", c.id,
                c.title.c_str(), secs, t.checks, t.info.c_str(),
                pass ? "" : ("  first failure: " + t.first + " (" + std::to_string(t.failures) +
                             " total)").c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
