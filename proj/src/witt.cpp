#include "bcml/witt.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace bcml {

PadicNumber operator+(const PadicNumber& a, const Integer& c) {
  return a + PadicNumber(a.context(), c);
}

IntPolynomial::IntPolynomial(std::vector<std::string> variables) : vars_(std::move(variables)) {}

IntPolynomial IntPolynomial::constant(std::vector<std::string> variables, const Integer& c) {
  IntPolynomial r(std::move(variables));
  r.add_term(Exponents(r.vars_.size(), 0), c);
  return r;
}

IntPolynomial IntPolynomial::variable(std::vector<std::string> variables, size_t index) {
  IntPolynomial r(std::move(variables));
  Exponents e(r.vars_.size(), 0);
  e.at(index) = 1;
  r.add_term(e, 1);
  return r;
}

int IntPolynomial::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

Integer IntPolynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Integer(0) : it->second;
}

void IntPolynomial::add_term(const Exponents& e, const Integer& c) {
  if (e.size() != vars_.size()) fail(ErrorKind::InvalidInput, "exponent vector has wrong length");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void IntPolynomial::check_vars(const IntPolynomial& o) const {
  if (vars_ != o.vars_) fail(ErrorKind::ContextMismatch, "polynomials over different variables");
}

IntPolynomial IntPolynomial::operator-() const {
  IntPolynomial r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

IntPolynomial& IntPolynomial::operator+=(const IntPolynomial& o) {
  check_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

IntPolynomial& IntPolynomial::operator-=(const IntPolynomial& o) {
  check_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  a.check_vars(b);
  IntPolynomial r(a.vars_);
  IntPolynomial::Exponents e(a.vars_.size());
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

IntPolynomial IntPolynomial::operator*(const Integer& c) const {
  IntPolynomial r(vars_);
  for (const auto& [e, x] : terms_) r.add_term(e, x * c);
  return r;
}

IntPolynomial IntPolynomial::pow(unsigned int e) const {
  IntPolynomial r = constant(vars_, 1);
  IntPolynomial b = *this;
  while (e > 0) {
    if (e & 1u) r = r * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return r;
}

IntPolynomial IntPolynomial::divide_exact(const Integer& d) const {
  IntPolynomial r(vars_);
  for (const auto& [e, c] : terms_) {
    if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t())) {
      fail(ErrorKind::DivisionNotExact,
           "coefficient " + c.get_str() + " is not divisible by " + d.get_str());
    }
    r.terms_.emplace(e, c / d);
  }
  return r;
}

IntPolynomial IntPolynomial::substitute(const std::vector<IntPolynomial>& images) const {
  if (images.size() != vars_.size()) {
    fail(ErrorKind::InvalidInput, "substitution needs one image per variable");
  }
  const auto& target = images.empty() ? vars_ : images.front().vars_;
  // Powers of each image, built lazily up to the largest exponent used.
  std::vector<std::vector<IntPolynomial>> powers(images.size());
  auto image_power = [&](size_t i, int k) -> const IntPolynomial& {
    auto& pw = powers[i];
    if (pw.empty()) pw.push_back(constant(target, 1));
    while (static_cast<int>(pw.size()) <= k) pw.push_back(pw.back() * images[i]);
    return pw[k];
  };
  IntPolynomial r(target);
  for (const auto& [e, c] : terms_) {
    IntPolynomial term = constant(target, c);
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] > 0) term = term * image_power(i, e[i]);
    }
    r += term;
  }
  return r;
}

IntPolynomial IntPolynomial::extend(const std::vector<std::string>& variables) const {
  if (variables.size() < vars_.size() ||
      !std::equal(vars_.begin(), vars_.end(), variables.begin())) {
    fail(ErrorKind::InvalidInput, "variable list does not extend the polynomial's variables");
  }
  IntPolynomial r(variables);
  for (const auto& [e, c] : terms_) {
    Exponents f(variables.size(), 0);
    std::copy(e.begin(), e.end(), f.begin());
    r.terms_.emplace(f, c);
  }
  return r;
}

std::string IntPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Highest total degree first, then reverse lexicographic exponent order.
  std::vector<std::pair<Exponents, Integer>> sorted(terms_.rbegin(), terms_.rend());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::accumulate(a.first.begin(), a.first.end(), 0) >
           std::accumulate(b.first.begin(), b.first.end(), 0);
  });
  for (const auto& [e, c] : sorted) {
    bool monomial = std::any_of(e.begin(), e.end(), [](int k) { return k > 0; });
    Integer mag = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (!monomial || mag != 1) out << mag.get_str();
    bool need_star = !monomial ? false : mag != 1;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (need_star) out << "*";
      out << vars_[i];
      if (e[i] > 1) out << "^" << e[i];
      need_star = true;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------

IntPolynomial cp_polynomial(long p) {
  if (!is_prime(p)) fail(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
  std::vector<std::string> vars = {"X", "Y"};
  IntPolynomial r(vars);
  for (long k = 1; k < p; ++k) {
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    r.add_term({static_cast<int>(k), static_cast<int>(p - k)}, -b / p);
  }
  return r;
}

PadicNumber cp_evaluate(const PadicNumber& x, const PadicNumber& y) {
  long p = x.prime();
  PadicNumber acc(x.context());
  PadicNumber xk = x;
  for (long k = 1; k < p; ++k) {
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    acc -= xk * y.pow(static_cast<unsigned long>(p - k)) * Integer(b / p);
    xk *= x;
  }
  return acc;
}

Integer cp_evaluate(long p, const Integer& x, const Integer& y) {
  Integer num = power(x, p) + power(y, p) - power(Integer(x + y), p);
  return num / p;
}

WittPair<PadicNumber> witt_add(const WittPair<PadicNumber>& u, const WittPair<PadicNumber>& v) {
  return {u.a0 + v.a0, u.a1 + v.a1 + cp_evaluate(u.a0, v.a0)};
}

WittPair<PadicNumber> witt_mul(const WittPair<PadicNumber>& u, const WittPair<PadicNumber>& v) {
  unsigned long p = static_cast<unsigned long>(u.a0.prime());
  return {u.a0 * v.a0,
          u.a0.pow(p) * v.a1 + v.a0.pow(p) * u.a1 + (u.a1 * v.a1) * Integer(static_cast<long>(p))};
}

WittPair<PadicNumber> ghost(const WittPair<PadicNumber>& u) {
  unsigned long p = static_cast<unsigned long>(u.a0.prime());
  return {u.a0, u.a0.pow(p) + u.a1 * Integer(static_cast<long>(p))};
}

WittPair<Integer> witt_add(long p, const WittPair<Integer>& u, const WittPair<Integer>& v) {
  return {u.a0 + v.a0, u.a1 + v.a1 + cp_evaluate(p, u.a0, v.a0)};
}

WittPair<Integer> witt_mul(long p, const WittPair<Integer>& u, const WittPair<Integer>& v) {
  return {u.a0 * v.a0, power(u.a0, p) * v.a1 + power(v.a0, p) * u.a1 + p * u.a1 * v.a1};
}

WittPair<Integer> ghost(long p, const WittPair<Integer>& u) {
  return {u.a0, power(u.a0, p) + p * u.a1};
}

PadicNumber delta_std(const PadicNumber& x) {
  if (x.precision() < 2) {
    fail(ErrorKind::InsufficientPrecision, "delta needs precision at least 2");
  }
  PadicNumber num = frobenius_auto(x) - x.pow(static_cast<unsigned long>(x.prime()));
  return num.divide_by_p_power(1);
}

Integer delta_std(long p, const Integer& n) { return (n - power(n, p)) / p; }

PadicNumber frobenius_lift(const PadicNumber& x) {
  if (x.precision() < 2) {
    fail(ErrorKind::InsufficientPrecision, "the Frobenius lift needs precision at least 2");
  }
  PadicNumber d = delta_std(x);
  // p * delta(x) is known modulo p^N even though delta(x) is only known modulo p^{N-1}.
  std::vector<Integer> scaled = d.coeffs();
  for (auto& c : scaled) c *= x.prime();
  return x.pow(static_cast<unsigned long>(x.prime())) + PadicNumber(x.context(), scaled);
}

WittPair<PadicNumber> witt_section(const PadicNumber& x) { return {x, delta_std(x)}; }

std::vector<std::string> jet_variables(const std::vector<std::string>& base) {
  std::vector<std::string> all = base;
  for (const auto& v : base) all.push_back(v + "'");
  return all;
}

IntPolynomial prolong(const IntPolynomial& f, long p) {
  if (!is_prime(p)) fail(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
  auto vars = jet_variables(f.variables());
  size_t n = f.arity();
  std::vector<IntPolynomial> images;
  for (size_t i = 0; i < n; ++i) {
    IntPolynomial x = IntPolynomial::variable(vars, i);
    IntPolynomial xd = IntPolynomial::variable(vars, n + i);
    images.push_back(x.pow(static_cast<unsigned int>(p)) + xd * Integer(p));
  }
  IntPolynomial lifted = f.substitute(images);
  IntPolynomial powered = f.extend(vars).pow(static_cast<unsigned int>(p));
  return (lifted - powered).divide_exact(Integer(p));
}

JetPoint nabla(const std::vector<PadicNumber>& point, const std::vector<IntPolynomial>& system,
               bool verify) {
  if (point.empty()) fail(ErrorKind::InvalidInput, "empty point");
  const auto& ctx = point.front().context();
  PadicNumber zero(ctx);
  for (const auto& f : system) {
    PadicNumber value = f.evaluate(point, zero);
    if (!value.is_zero()) {
      fail(ErrorKind::NotOnVariety, "equation " + f.to_string() + " does not vanish at the point");
    }
  }
  auto F = FiniteField::get(ctx->p(), ctx->f());
  JetPoint jet{F, {}, {}};
  std::vector<PadicNumber> full = point;
  for (const auto& x : point) {
    PadicNumber d = delta_std(x);
    jet.base.push_back(F->from_coeffs(x.residue()));
    jet.derivative.push_back(F->from_coeffs(d.residue()));
    full.push_back(d);
  }
  if (verify) {
    for (const auto& f : system) {
      PadicNumber value = prolong(f, ctx->p()).evaluate(full, zero);
      if (!value.truncate(1).is_zero()) {
        fail(ErrorKind::DivisionNotExact, "prolonged equation fails at the jet of the point");
      }
    }
  }
  return jet;
}

}  // namespace bcml
