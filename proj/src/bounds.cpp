#include "bcml/bounds.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <thread>

#include "bcml/error.hpp"

namespace bcml {

namespace {

void check_common(int g, long p) {
  if (g < 2) fail(ErrorKind::InvalidInput, "genus must be at least 2");
  if (!is_prime(p)) fail(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
}

Integer factorial(long n) {
  Integer r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

// 3^g [p(2g-2)+6g] g!
Integer common_factor(int g, long p) {
  return power(3, g) * (Integer(p) * (2 * g - 2) + 6 * g) * factorial(g);
}

}  // namespace

Integer buium_mm_bound(int g, long p) {
  check_common(g, p);
  return power(p, 2 * g) * common_factor(g, p);
}

Integer mordell_lang_reduction_bound(int g, long r, long p) {
  check_common(g, p);
  if (r < 0) fail(ErrorKind::InvalidInput, "rank must be non-negative");
  return power(p, 3 * g + r) * common_factor(g, p);
}

Integer mordell_lang_point_bound(int g, long r, long p) {
  check_common(g, p);
  if (r < 0) fail(ErrorKind::InvalidInput, "rank must be non-negative");
  if (r >= g) {
    fail(ErrorKind::HypothesisViolated,
         "r < g required (r = " + std::to_string(r) + ", g = " + std::to_string(g) + ")");
  }
  if (p < 2 * g) {
    fail(ErrorKind::HypothesisViolated,
         "p >= 2g required (p = " + std::to_string(p) + ", g = " + std::to_string(g) + ")");
  }
  return mordell_lang_reduction_bound(g, r, p) + 2 * r;
}

Integer coleman_chabauty_bound(const Integer& residue_points, int g) {
  if (residue_points < 0 || g < 0) fail(ErrorKind::InvalidInput, "inputs must be non-negative");
  return residue_points + 2 * g - 2;
}

BoundReport buium_mm_report(int g, long p) {
  BoundReport r;
  r.formula = "p^(2g) * 3^g * (p(2g-2) + 6g) * g!";
  r.inputs = {{"g", g}, {"p", p}};
  r.value = buium_mm_bound(g, p);
  r.flags = {{"p_at_least_2g", p >= 2 * g}};
  r.notes = {"Manin-Mumford count of torsion points in the first jet fibre"};
  return r;
}

BoundReport mordell_lang_reduction_report(int g, long r, long p) {
  BoundReport b;
  b.formula = "p^(3g+r) * 3^g * (p(2g-2) + 6g) * g!";
  b.inputs = {{"g", g}, {"r", r}, {"p", p}};
  b.value = mordell_lang_reduction_bound(g, r, p);
  b.flags = {{"p_at_least_2g", p >= 2 * g},
             {"r_less_than_g", r < g},
             {"assumes_basis_over_Qp_nr", true}};
  b.notes = {"bounds the number of residue discs met by X(Q_p^nr) intersected with Gamma",
             "hypothesis: the divisible hull of Gamma has a basis defined over Q_p^nr"};
  return b;
}

BoundReport mordell_lang_point_report(int g, long r, long p) {
  BoundReport b;
  b.formula = "p^(3g+r) * 3^g * (p(2g-2) + 6g) * g! + 2r";
  b.inputs = {{"g", g}, {"r", r}, {"p", p}};
  b.value = mordell_lang_point_bound(g, r, p);
  b.flags = {{"p_at_least_2g", true}, {"r_less_than_g", true}, {"assumes_basis_over_Qp_nr", true}};
  b.notes = {"reduction bound plus the vanishing-order sum 2r over occupied discs"};
  return b;
}

BoundReport coleman_chabauty_report(const Integer& residue_points, int g) {
  BoundReport b;
  b.formula = "#X(k) + 2g - 2";
  b.inputs = {{"residue_points", residue_points}, {"g", g}};
  b.value = coleman_chabauty_bound(residue_points, g);
  return b;
}

void FinAbGroup::validate() const {
  for (const auto& m : cyclic_orders) {
    if (m < 2) fail(ErrorKind::InvalidInput, "cyclic orders must be at least 2");
  }
  if (divisible_rank < 0) fail(ErrorKind::InvalidInput, "negative divisible rank");
  if (divisible_rank > 0 && !is_prime(divisible_prime)) {
    fail(ErrorKind::NonPrime, "divisible summand needs a prime");
  }
}

Integer FinAbGroup::order() const {
  validate();
  if (divisible()) fail(ErrorKind::InvalidInput, "group with a divisible summand is infinite");
  Integer r = 1;
  for (const auto& m : cyclic_orders) r *= m;
  return r;
}

std::vector<FinAbGroup> abelian_p_groups(long p, int max_exponent) {
  if (!is_prime(p)) fail(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
  std::vector<FinAbGroup> out;
  std::vector<int> parts;
  std::function<void(int, int)> rec = [&](int remaining, int largest) {
    if (remaining == 0) {
      FinAbGroup G;
      for (int e : parts) G.cyclic_orders.push_back(power(p, e));
      out.push_back(std::move(G));
      return;
    }
    for (int e = std::min(remaining, largest); e >= 1; --e) {
      parts.push_back(e);
      rec(remaining - e, e);
      parts.pop_back();
    }
  };
  for (int k = 0; k <= max_exponent; ++k) rec(k, k);
  return out;
}

std::pair<Integer, Integer> gamma_quotient_exact(const FinAbGroup& G, long p) {
  G.validate();
  if (!is_prime(p)) fail(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
  Integer quotient = 1, kernel = 1;
  for (const auto& m : G.cyclic_orders) {
    Integer d = gcd(m, Integer(p));
    quotient *= d;
    kernel *= d;
  }
  if (G.divisible() && G.divisible_prime == p) kernel *= power(p, G.divisible_rank);
  return {quotient, kernel};
}

std::pair<Integer, Integer> gamma_quotient_enumerate(const FinAbGroup& G, long p, int jobs) {
  Integer order = G.order();
  if (order > 10'000'000) fail(ErrorKind::InvalidInput, "group too large to enumerate");
  std::vector<long> m;
  for (const auto& c : G.cyclic_orders) m.push_back(c.get_si());
  long total = order.get_si();
  jobs = std::max(1, jobs);

  // Element t has coordinates given by the mixed radix digits of t.
  auto times_p = [&](long t) {
    long out = 0, scale = 1;
    for (long mi : m) {
      long x = t % mi;
      t /= mi;
      out += ((x * p) % mi) * scale;
      scale *= mi;
    }
    return out;
  };

  std::vector<long> kernel(jobs, 0);
  std::vector<std::set<long>> images(jobs);
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      for (long t = w; t < total; t += jobs) {
        long y = times_p(t);
        if (y == 0) ++kernel[w];
        images[w].insert(y);
      }
    });
  }
  for (auto& th : pool) th.join();
  std::set<long> image;
  long ker = 0;
  for (int w = 0; w < jobs; ++w) {
    ker += kernel[w];
    image.insert(images[w].begin(), images[w].end());
  }
  return {order / static_cast<long>(image.size()), Integer(ker)};
}

GammaModPBound gamma_mod_p_bound(int g, long r, long p) {
  if (g < 0 || r < 0) fail(ErrorKind::InvalidInput, "g and r must be non-negative");
  if (!is_prime(p)) fail(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
  GammaModPBound b;
  b.value = power(p, g + r);
  b.torsion_rank_assumed = true;
  b.assumption = "#Gamma_tor[p] <= p^g is assumed; only p^{2g} follows from Gamma[p] in J[p]";
  return b;
}

TorsionCheck check_torsion_part(const FinAbGroup& G, long p, int g) {
  G.validate();
  long factors = static_cast<long>(G.cyclic_orders.size()) + G.divisible_rank;
  if (factors > 2 * g) {
    fail(ErrorKind::InvalidInput, "torsion part has " + std::to_string(factors) +
                                      " invariant factors, more than 2g = " + std::to_string(2 * g));
  }
  TorsionCheck c;
  c.kernel_order = gamma_quotient_exact(G, p).second;
  c.within_2g = c.kernel_order <= power(p, 2 * g);
  c.within_g = c.kernel_order <= power(p, g);
  return c;
}

namespace {

using Elem = FiniteField::Elem;

std::string describe(const FiniteField& K, Elem x) {
  auto c = K.coeffs(x);
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  if (c.size() == 1) return std::to_string(c[0]);
  std::string s = "[";
  for (size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + "]";
}

std::string field_name(const FiniteField& K) {
  return "F_" + std::to_string(K.p()) + (K.degree() > 1 ? "^" + std::to_string(K.degree()) : "");
}

// Rank of the rows over K.
int rank_of(const FiniteField& K, std::vector<FqPoly> rows, int width) {
  for (auto& r : rows) r.resize(width, 0);
  int rank = 0;
  for (int col = 0; col < width && rank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int i = rank; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][col] != 0) piv = i;
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    Elem inv = K.inv(rows[rank][col]);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == rank || rows[i][col] == 0) continue;
      Elem c = K.mul(rows[i][col], inv);
      for (int j = 0; j < width; ++j) rows[i][j] = K.sub(rows[i][j], K.mul(c, rows[rank][j]));
    }
    ++rank;
  }
  return rank;
}

}  // namespace

StollTable stoll_vanishing_sum(const HyperellipticCurve& curve,
                               const std::vector<DifferentialModP>& basis) {
  int g = curve.genus();
  long p = curve.p();
  if (basis.empty() || static_cast<int>(basis.size()) > g) {
    fail(ErrorKind::InvalidInput, "subspace dimension must be between 1 and g");
  }
  int e = 1;
  for (const auto& w : basis) {
    if (w.field->p() != p) fail(ErrorKind::ContextMismatch, "differential over the wrong prime");
    if (w.genus != g) fail(ErrorKind::ContextMismatch, "differential of the wrong genus");
    e = std::lcm(e, w.field->degree());
  }
  auto E = FiniteField::get(p, e);
  std::vector<FqPoly> polys;
  for (const auto& w : basis) {
    FqPoly h = fq_embed(*E, *w.field, w.h);
    fq_trim(h);
    if (fq_degree(h) > g - 1) fail(ErrorKind::InvalidInput, "differential is not holomorphic");
    polys.push_back(h);
  }
  if (rank_of(*E, polys, g) != static_cast<int>(polys.size())) {
    fail(ErrorKind::NotIndependent, "basis differentials are linearly dependent");
  }

  StollTable table;
  table.dimension = static_cast<int>(polys.size());
  table.r = g - table.dimension;

  FqPoly G = polys.front();
  int maxdeg = fq_degree(G);
  for (size_t i = 1; i < polys.size(); ++i) {
    G = fq_gcd(*E, G, polys[i]);
    maxdeg = std::max(maxdeg, fq_degree(polys[i]));
  }
  G = fq_monic(*E, G);

  int degG = fq_degree(G);
  for (int d = 1; d <= degG; ++d) {
    auto K = FiniteField::get(p, e * d);
    FqPoly GK = fq_embed(*K, *E, G);
    FqPoly fK = curve.reduction(*K);
    for (auto [a, mult] : fq_roots(*K, GK)) {
      int delta = K->degree_of(a);
      bool seen = false;
      for (int dd = 1; dd < d; ++dd)
        if ((e * dd) % delta == 0) seen = true;
      if (seen) continue;
      Elem fa = fq_eval(*K, fK, a);
      if (fa == 0) {
        table.entries.push_back({CurvePointBar::weierstrass(curve, K, a), 2 * mult,
                                 "x=" + describe(*K, a) + " y=0 over " + field_name(*K)});
        continue;
      }
      FieldPtr L = K;
      Elem x = a;
      auto b = K->sqrt(fa);
      if (!b) {
        L = FiniteField::get(p, 2 * K->degree());
        x = L->embed_from(*K, a);
        b = L->sqrt(L->embed_from(*K, fa));
      }
      Elem y1 = std::min(*b, L->neg(*b));
      Elem y2 = std::max(*b, L->neg(*b));
      for (Elem y : {y1, y2}) {
        table.entries.push_back({CurvePointBar::finite(curve, L, x, y), mult,
                                 "x=" + describe(*L, x) + " y=" + describe(*L, y) + " over " +
                                     field_name(*L)});
      }
    }
  }
  int n_inf = 2 * g - 2 - 2 * maxdeg;
  if (n_inf > 0) table.entries.push_back({CurvePointBar::infinity(curve), n_inf, "infinity"});

  for (const auto& s : table.entries) table.total += s.n;
  return table;
}

BoundReport chabauty_disc_assembly(const Integer& red_bound, long stoll_total) {
  if (red_bound < 0 || stoll_total < 0) fail(ErrorKind::InvalidInput, "inputs must be non-negative");
  BoundReport b;
  b.formula = "red_bound + stoll_total";
  b.inputs = {{"red_bound", red_bound}, {"stoll_total", stoll_total}};
  b.value = red_bound + stoll_total;
  b.notes = {"red_bound: number of occupied residue discs (reduction bound)",
             "stoll_total: sum over discs of (points in the disc - 1), bounded by sum n(s)"};
  return b;
}

DeterminantalCondition determinantal_condition(long n, long m, long g, long d) {
  if (n < 1 || m < 1 || g < 1 || d < 0) fail(ErrorKind::InvalidInput, "n, m, g must be positive and d >= 0");
  if (d >= std::min(n * g, m)) {
    fail(ErrorKind::DegenerateRankLocus,
         "rank bound d = " + std::to_string(d) + " is not below min(ng, m) = " +
             std::to_string(std::min(n * g, m)));
  }
  DeterminantalCondition c;
  Integer A = Integer(n) * g - d;
  c.codim = A * (m - d);
  c.satisfied = Integer(m) * n >= c.codim;
  // m n >= A (m - d)  <=>  m (A - n) <= A d, over m > d.
  Integer slack = A - n;
  if (slack <= 0) {
    c.min_m = d + 1;
  } else {
    Integer top = A * d / slack;
    if (top >= d + 1) {
      c.min_m = d + 1;
      c.max_m = top.get_si();
    }
  }
  return c;
}

}  // namespace bcml
