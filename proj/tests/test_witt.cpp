#include "doctest.h"

#include "bcml/witt.hpp"
#include "support.hpp"

using namespace bcml;
using bcml::testing::random_element;
using bcml::testing::uniform;

namespace {

std::vector<std::string> xy() { return {"x", "y"}; }

IntPolynomial random_poly(const std::vector<std::string>& vars, int degree, int terms) {
  IntPolynomial f(vars);
  for (int t = 0; t < terms; ++t) {
    IntPolynomial::Exponents e(vars.size(), 0);
    int budget = static_cast<int>(uniform(0, degree));
    for (int k = 0; k < budget; ++k) e[uniform(0, static_cast<long>(vars.size()) - 1)]++;
    f.add_term(e, Integer(uniform(-9, 9)));
  }
  return f;
}

}  // namespace

TEST_CASE("C_p polynomial") {
  IntPolynomial x = IntPolynomial::variable({"X", "Y"}, 0);
  IntPolynomial y = IntPolynomial::variable({"X", "Y"}, 1);
  CHECK(cp_polynomial(2) == -(x * y));
  CHECK(cp_polynomial(3) == -(x * x * y) - x * y * y);
  CHECK(cp_polynomial(2).to_string() == "-X*Y");
  for (long p : {2L, 3L, 5L, 7L, 11L}) {
    IntPolynomial direct =
        (x.pow(p) + y.pow(p) - (x + y).pow(static_cast<unsigned>(p))).divide_exact(Integer(p));
    CHECK(cp_polynomial(p) == direct);
    IntPolynomial cp = cp_polynomial(p);
    for (const auto& [e, c] : cp.terms()) {
      CHECK(e[0] > 0);
      CHECK(e[1] > 0);
    }
  }
  CHECK_THROWS_AS(cp_polynomial(4), Error);
}

TEST_CASE("delta on small integers") {
  CHECK(delta_std(2, Integer(3)) == -3);
  auto ctx = PadicContext::create(2, 1, 10);
  PadicNumber three(ctx, Integer(3));
  CHECK(delta_std(three) == PadicNumber(ctx, Integer(-3)));
  CHECK(delta_std(three).precision() == 9);
  CHECK(delta_std(PadicNumber::one(ctx)).is_zero());
  CHECK_THROWS_AS(delta_std(PadicNumber::one(PadicContext::create(2, 1, 1))), Error);
}

TEST_CASE("Witt vector examples") {
  WittPair<Integer> u{3, 1}, v{5, 2};
  auto s = witt_add(2, u, v);
  auto gs = ghost(2, s);
  auto gu = ghost(2, u), gv = ghost(2, v);
  CHECK(gs.a0 == 8);
  CHECK(gs.a1 == 40);
  CHECK(gs.a0 == gu.a0 + gv.a0);
  CHECK(gs.a1 == gu.a1 + gv.a1);
  auto m = witt_mul(2, WittPair<Integer>{1, 0}, v);
  CHECK(m.a0 == v.a0);
  CHECK(m.a1 == v.a1);
  auto z = witt_add(2, u, WittPair<Integer>{0, 0});
  CHECK(z.a0 == u.a0);
  CHECK(z.a1 == u.a1);
}

TEST_CASE("delta axioms and Frobenius lift on unramified rings") {
  for (long p : {2L, 3L, 5L}) {
    for (int f : {1, 2, 3}) {
      auto ctx = PadicContext::create(p, f, 9);
      for (int t = 0; t < 25; ++t) {
        auto x = random_element(ctx), y = random_element(ctx);
        CHECK(delta_std(x + y) == delta_std(x) + delta_std(y) + cp_evaluate(x, y));
        unsigned long up = static_cast<unsigned long>(p);
        CHECK(delta_std(x * y) == x.pow(up) * delta_std(y) + y.pow(up) * delta_std(x) +
                                      delta_std(x) * delta_std(y) * Integer(p));
        CHECK(frobenius_lift(x) == frobenius_auto(x));
        CHECK(frobenius_lift(x).precision() == 9);
        CHECK(frobenius_lift(x * y) == frobenius_lift(x) * frobenius_lift(y));
        CHECK((frobenius_lift(x) - x.pow(up)).truncate(1).is_zero());
      }
      auto F = FiniteField::get(p, f);
      for (long a = 0; a < std::min<long>(F->size(), 12); ++a) {
        auto w = teichmuller(ctx, F->coeffs(a));
        CHECK(delta_std(w).is_zero());
        CHECK(frobenius_lift(w) == w.pow(static_cast<unsigned long>(p)));
      }
    }
  }
  auto c1 = PadicContext::create(7, 1, 6);
  auto x = random_element(c1);
  CHECK(frobenius_lift(x) == x);
}

TEST_CASE("witt section is a ring homomorphism") {
  for (long p : {2L, 3L, 7L}) {
    auto ctx = PadicContext::create(p, 2, 8);
    for (int t = 0; t < 25; ++t) {
      auto x = random_element(ctx), y = random_element(ctx);
      auto sum = witt_add(witt_section(x), witt_section(y));
      CHECK(sum.a0 == x + y);
      CHECK(sum.a1 == delta_std(x + y));
      auto prod = witt_mul(witt_section(x), witt_section(y));
      CHECK(prod.a0 == x * y);
      CHECK(prod.a1 == delta_std(x * y));
      WittPair<PadicNumber> u{x, y}, v{y, x};
      auto gu = ghost(u), gv = ghost(v);
      CHECK(ghost(witt_add(u, v)).a1 == gu.a1 + gv.a1);
      CHECK(ghost(witt_mul(u, v)).a1 == gu.a1 * gv.a1);
    }
  }
}

TEST_CASE("prolongation examples") {
  std::vector<std::string> one = {"x"};
  IntPolynomial x = IntPolynomial::variable(one, 0);
  auto jet1 = jet_variables(one);
  IntPolynomial X = IntPolynomial::variable(jet1, 0), Xd = IntPolynomial::variable(jet1, 1);
  CHECK(prolong(x, 5) == Xd);
  CHECK(prolong(x * x, 2) == X * X * Xd * Integer(2) + Xd * Xd * Integer(2));

  auto jet2 = jet_variables(xy());
  IntPolynomial a = IntPolynomial::variable(xy(), 0), b = IntPolynomial::variable(xy(), 1);
  for (long p : {2L, 3L, 5L}) {
    IntPolynomial A = IntPolynomial::variable(jet2, 0), B = IntPolynomial::variable(jet2, 1);
    IntPolynomial Ad = IntPolynomial::variable(jet2, 2), Bd = IntPolynomial::variable(jet2, 3);
    IntPolynomial cp = cp_polynomial(p).substitute({A, B});
    CHECK(prolong(a + b, p) == Ad + Bd + cp);
  }
}

TEST_CASE("prolongation is additive up to C_p") {
  for (long p : {2L, 3L}) {
    for (int t = 0; t < 10; ++t) {
      IntPolynomial f = random_poly(xy(), 3, 4), g = random_poly(xy(), 3, 4);
      auto jet = jet_variables(xy());
      IntPolynomial cp =
          cp_polynomial(p).substitute({f.extend(jet), g.extend(jet)});
      CHECK(prolong(f + g, p) == prolong(f, p) + prolong(g, p) + cp);
    }
  }
}

TEST_CASE("nabla") {
  auto ctx = PadicContext::create(2, 1, 10);
  auto jet = nabla({PadicNumber(ctx, Integer(3))}, {});
  CHECK(jet.base == std::vector<long>{1});
  CHECK(jet.derivative == std::vector<long>{1});

  auto c5 = PadicContext::create(5, 2, 8);
  auto w = teichmuller(c5, std::vector<long>{2, 3});
  CHECK(nabla({w}, {}).derivative == std::vector<long>{0});

  // x*y - 1 at a unit point.
  IntPolynomial a = IntPolynomial::variable(xy(), 0), b = IntPolynomial::variable(xy(), 1);
  IntPolynomial hyperbola = a * b - IntPolynomial::constant(xy(), 1);
  auto u = bcml::testing::random_unit(c5);
  auto j = nabla({u, invert(u)}, {hyperbola});
  CHECK(j.base[0] == j.field->from_coeffs(u.residue()));

  CHECK_THROWS_AS(nabla({u, u}, {hyperbola}), Error);
  // Exact vanishing of the prolonged equation, not only mod p.
  auto full = std::vector<PadicNumber>{u, invert(u), delta_std(u), delta_std(invert(u))};
  CHECK(prolong(hyperbola, 5).evaluate(full, PadicNumber(c5)).is_zero());
}
