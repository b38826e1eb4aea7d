#include "bcml/padic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "bcml/error.hpp"

namespace bcml {

namespace {

struct ConwayEntry {
  long p;
  int f;
  std::vector<int> coeffs;
};

const ConwayEntry kConway[] = {
    {2, 2, {1, 1, 1}},       {2, 3, {1, 1, 0, 1}},       {2, 4, {1, 1, 0, 0, 1}},
    {3, 2, {2, 2, 1}},       {3, 3, {1, 2, 0, 1}},       {3, 4, {2, 0, 0, 2, 1}},
    {5, 2, {2, 4, 1}},       {5, 3, {3, 3, 0, 1}},       {5, 4, {2, 4, 4, 0, 1}},
    {7, 2, {3, 6, 1}},       {7, 3, {4, 0, 6, 1}},       {7, 4, {3, 4, 5, 0, 1}},
    {11, 2, {2, 7, 1}},      {11, 3, {9, 2, 0, 1}},      {11, 4, {2, 10, 8, 0, 1}},
};

long primitive_root(long p) {
  if (p == 2) return 1;
  std::vector<long> factors;
  long m = p - 1;
  for (long d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) factors.push_back(m);
  for (long g = 2; g < p; ++g) {
    bool ok = true;
    for (long q : factors) {
      Integer r;
      Integer gg = g, pp = p;
      mpz_powm_ui(r.get_mpz_t(), gg.get_mpz_t(), static_cast<unsigned long>((p - 1) / q),
                  pp.get_mpz_t());
      if (r == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 1;
}

// P of degree f is irreducible over F_p iff gcd(x^{p^k} - x, P) = 1 for k <= f/2.
bool irreducible_mod_p(long p, const std::vector<Integer>& poly) {
  int f = static_cast<int>(poly.size()) - 1;
  if (f == 1) return true;
  Integer P = p;
  auto reduce = [&](std::vector<Integer> a) {
    for (int d = static_cast<int>(a.size()) - 1; d >= f; --d) {
      Integer c = mod(a[d], P);
      if (c != 0) {
        for (int j = 0; j <= f; ++j) a[d - f + j] -= c * poly[j];
      }
    }
    a.resize(f);
    for (auto& c : a) c = mod(c, P);
    return a;
  };
  auto mul = [&](const std::vector<Integer>& a, const std::vector<Integer>& b) {
    std::vector<Integer> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return reduce(r);
  };
  auto gcd_degree = [&](std::vector<Integer> a, std::vector<Integer> b) {
    auto trim = [&](std::vector<Integer>& v) {
      for (auto& c : v) c = mod(c, P);
      while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
      Integer inv = inverse_mod(b.back(), P);
      while (a.size() >= b.size()) {
        Integer c = mod(a.back() * inv, P);
        size_t off = a.size() - b.size();
        for (size_t j = 0; j < b.size(); ++j) a[off + j] -= c * b[j];
        trim(a);
        if (a.empty()) break;
      }
      std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
  };
  std::vector<Integer> x(f, 0);
  x[1] = 1;
  std::vector<Integer> xp = x;
  for (int k = 1; k <= f / 2; ++k) {
    // xp <- xp^p
    std::vector<Integer> r(f, 0);
    r[0] = 1;
    for (long e = 0; e < p; ++e) r = mul(r, xp);
    xp = r;
    std::vector<Integer> diff = xp;
    diff[1] -= 1;
    if (gcd_degree(poly, diff) > 0) return false;
  }
  return true;
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::tuple<long, std::vector<std::string>, int>, ContextPtr>& cache() {
  static std::map<std::tuple<long, std::vector<std::string>, int>, ContextPtr> c;
  return c;
}

}  // namespace

std::vector<Integer> conway_polynomial(long p, int f) {
  if (!is_prime(p)) fail(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
  if (f == 1) return {Integer(p - primitive_root(p)), Integer(1)};
  for (const auto& e : kConway) {
    if (e.p == p && e.f == f) return std::vector<Integer>(e.coeffs.begin(), e.coeffs.end());
  }
  fail(ErrorKind::InvalidInput, "no shipped defining polynomial for p=" + std::to_string(p) +
                                    ", f=" + std::to_string(f));
}

ContextPtr PadicContext::create(long p, int f, int N) {
  if (f < 1) fail(ErrorKind::InvalidInput, "residue degree must be at least 1");
  return create(p, conway_polynomial(p, f), N);
}

ContextPtr PadicContext::create(long p, std::vector<Integer> defining_poly, int N) {
  if (!is_prime(p)) fail(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
  if (N < 1) fail(ErrorKind::InvalidInput, "precision must be at least 1");
  if (defining_poly.size() < 2 || defining_poly.back() != 1) {
    fail(ErrorKind::InvalidInput, "defining polynomial must be monic of degree >= 1");
  }
  std::vector<std::string> key_poly;
  for (const auto& c : defining_poly) key_poly.push_back(c.get_str());
  auto key = std::make_tuple(p, key_poly, N);
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache().find(key);
    if (it != cache().end()) return it->second;
  }
  if (!irreducible_mod_p(p, defining_poly)) {
    fail(ErrorKind::InvalidInput, "defining polynomial is reducible mod " + std::to_string(p));
  }
  std::shared_ptr<PadicContext> fresh(new PadicContext(p, std::move(defining_poly), N));
  fresh->lift_sigma();
  ContextPtr ctx = fresh;
  std::lock_guard<std::mutex> lock(cache_mutex());
  return cache().emplace(key, ctx).first->second;
}

PadicContext::PadicContext(long p, std::vector<Integer> poly, int N)
    : p_(p), f_(static_cast<int>(poly.size()) - 1), N_(N), modulus_(power(p, N)),
      q_(power(p, static_cast<unsigned long>(poly.size() - 1))), poly_(std::move(poly)) {}

bool PadicContext::compatible(const PadicContext& other) const {
  return p_ == other.p_ && poly_ == other.poly_;
}

ContextPtr PadicContext::with_precision(int N) const {
  if (N == N_) return shared_from_this();
  return create(p_, poly_, N);
}

std::vector<Integer> PadicContext::reduce(std::vector<Integer> a, const Integer& m) const {
  for (int d = static_cast<int>(a.size()) - 1; d >= f_; --d) {
    if (a[d] == 0) continue;
    Integer c = a[d];
    for (int j = 0; j < f_; ++j) a[d - f_ + j] -= c * poly_[j];
  }
  a.resize(f_);
  for (auto& c : a) c = mod(c, m);
  return a;
}

std::vector<Integer> PadicContext::multiply(const std::vector<Integer>& a,
                                            const std::vector<Integer>& b,
                                            const Integer& m) const {
  if (f_ == 1) return {mod(a[0] * b[0], m)};
  std::vector<Integer> r(2 * f_ - 1, 0);
  for (int i = 0; i < f_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < f_; ++j) r[i + j] += a[i] * b[j];
  }
  return reduce(std::move(r), m);
}

std::vector<Integer> PadicContext::apply_sigma(const std::vector<Integer>& a,
                                               const Integer& m) const {
  if (f_ == 1) return {mod(a[0], m)};
  std::vector<Integer> r(f_, 0);
  for (int j = 0; j < f_; ++j) {
    if (a[j] == 0) continue;
    for (int i = 0; i < f_; ++i) r[i] += a[j] * sigma_[j][i];
  }
  for (auto& c : r) c = mod(c, m);
  return r;
}

void PadicContext::lift_sigma() {
  sigma_.assign(f_, std::vector<Integer>(f_, 0));
  sigma_[0][0] = 1;
  if (f_ == 1) return;
  auto pw = [&](std::vector<Integer> base, Integer e, const Integer& m) {
    std::vector<Integer> r(f_, 0);
    r[0] = 1;
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = multiply(r, base, m);
      base = multiply(base, base, m);
      e /= 2;
    }
    return r;
  };
  auto eval = [&](const std::vector<Integer>& coeffs, const std::vector<Integer>& at) {
    std::vector<Integer> acc(f_, 0);
    for (int d = static_cast<int>(coeffs.size()) - 1; d >= 0; --d) {
      acc = multiply(acc, at, modulus_);
      acc[0] = mod(acc[0] + coeffs[d], modulus_);
    }
    return acc;
  };
  std::vector<Integer> deriv;
  for (size_t i = 1; i < poly_.size(); ++i) deriv.push_back(poly_[i] * static_cast<long>(i));

  Integer P = p_;
  std::vector<Integer> theta(f_, 0);
  theta[1] = 1;
  std::vector<Integer> r = pw(theta, P, P);
  // Newton iteration r <- r - P(r)/P'(r); each step doubles the precision.
  for (int prec = 1; prec < N_; prec *= 2) {
    std::vector<Integer> value = eval(poly_, r);
    std::vector<Integer> dv = eval(deriv, r);
    PadicNumber d(shared_from_this(), dv);
    PadicNumber step = PadicNumber(shared_from_this(), value) * invert(d);
    for (int i = 0; i < f_; ++i) r[i] = mod(r[i] - step.coeffs()[i], modulus_);
  }
  std::vector<Integer> acc(f_, 0);
  acc[0] = 1;
  for (int j = 0; j < f_; ++j) {
    sigma_[j] = acc;
    acc = multiply(acc, r, modulus_);
  }
}

PadicNumber::PadicNumber(ContextPtr ctx) : ctx_(std::move(ctx)), coeffs_(ctx_->f(), 0) {}

PadicNumber::PadicNumber(ContextPtr ctx, const Integer& n)
    : ctx_(std::move(ctx)), coeffs_(ctx_->f(), 0) {
  coeffs_[0] = mod(n, ctx_->modulus());
}

PadicNumber::PadicNumber(ContextPtr ctx, std::vector<Integer> coeffs)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) > ctx_->f()) {
    coeffs_ = ctx_->reduce(std::move(coeffs_), ctx_->modulus());
  } else {
    coeffs_.resize(ctx_->f(), 0);
    for (auto& c : coeffs_) c = mod(c, ctx_->modulus());
  }
}

bool PadicNumber::in_prime_subring() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Integer& c) { return c == 0; });
}

bool PadicNumber::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Integer& c) { return c == 0; });
}

bool PadicNumber::is_one() const { return coeffs_[0] == 1 && in_prime_subring(); }

void PadicNumber::mix(const PadicNumber& o) {
  if (ctx_.get() == o.ctx_.get()) return;
  if (!ctx_->compatible(*o.ctx_)) {
    fail(ErrorKind::ContextMismatch, "p-adic elements from incompatible rings");
  }
  if (o.ctx_->N() < ctx_->N()) *this = truncate(o.ctx_->N());
}

PadicNumber PadicNumber::operator-() const {
  PadicNumber r(*this);
  for (auto& c : r.coeffs_) c = mod(-c, ctx_->modulus());
  return r;
}

PadicNumber& PadicNumber::operator+=(const PadicNumber& o) {
  mix(o);
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    coeffs_[i] += o.coeffs_[i];
    if (coeffs_[i] >= ctx_->modulus()) coeffs_[i] -= ctx_->modulus();
    if (coeffs_[i] >= ctx_->modulus()) coeffs_[i] = mod(coeffs_[i], ctx_->modulus());
  }
  return *this;
}

PadicNumber& PadicNumber::operator-=(const PadicNumber& o) {
  mix(o);
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = mod(coeffs_[i] - o.coeffs_[i], ctx_->modulus());
  return *this;
}

PadicNumber& PadicNumber::operator*=(const PadicNumber& o) {
  mix(o);
  coeffs_ = ctx_->multiply(coeffs_, o.coeffs_, ctx_->modulus());
  return *this;
}

PadicNumber PadicNumber::operator*(const Integer& c) const {
  PadicNumber r(*this);
  for (auto& x : r.coeffs_) x = mod(x * c, ctx_->modulus());
  return r;
}

bool operator==(const PadicNumber& a, const PadicNumber& b) {
  if (!a.ctx_->compatible(*b.ctx_)) return false;
  int M = std::min(a.precision(), b.precision());
  Integer m = power(a.prime(), static_cast<unsigned long>(M));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (mod(a.coeffs_[i] - b.coeffs_[i], m) != 0) return false;
  }
  return true;
}

PadicNumber PadicNumber::pow(const Integer& e) const {
  if (e < 0) return invert(*this).pow(Integer(-e));
  PadicNumber r = one(ctx_);
  PadicNumber b = *this;
  Integer k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) r *= b;
    k /= 2;
    if (k > 0) b *= b;
  }
  return r;
}

PadicNumber PadicNumber::truncate(int M) const {
  if (M > precision()) {
    fail(ErrorKind::InsufficientPrecision, "cannot raise precision from " +
                                               std::to_string(precision()) + " to " +
                                               std::to_string(M));
  }
  return PadicNumber(ctx_->with_precision(M), coeffs_);
}

PadicNumber PadicNumber::divide_by_p_power(int k) const {
  if (k == 0) return *this;
  if (k >= precision()) {
    fail(ErrorKind::InsufficientPrecision,
         "dividing by p^" + std::to_string(k) + " exhausts precision " + std::to_string(precision()));
  }
  Integer pk = power(prime(), static_cast<unsigned long>(k));
  std::vector<Integer> out(coeffs_.size());
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (!mpz_divisible_p(coeffs_[i].get_mpz_t(), pk.get_mpz_t())) {
      fail(ErrorKind::DivisionNotExact, "element is not divisible by p^" + std::to_string(k));
    }
    out[i] = coeffs_[i] / pk;
  }
  return PadicNumber(ctx_->with_precision(precision() - k), std::move(out));
}

PadicNumber PadicNumber::times_p_power(int k) const {
  return *this * power(prime(), static_cast<unsigned long>(k));
}

std::vector<long> PadicNumber::residue() const {
  std::vector<long> r(coeffs_.size());
  Integer P = prime();
  for (size_t i = 0; i < coeffs_.size(); ++i) r[i] = mod(coeffs_[i], P).get_si();
  return r;
}

std::optional<int> valuation(const PadicNumber& x) {
  std::optional<int> best;
  for (const auto& c : x.coeffs()) {
    if (c == 0) continue;
    int v = valuation(c, x.prime());
    if (!best || v < *best) best = v;
  }
  return best;
}

int valuation_or_throw(const PadicNumber& x) {
  auto v = valuation(x);
  if (!v) {
    fail(ErrorKind::AtPrecisionZero,
         "element is zero modulo p^" + std::to_string(x.precision()));
  }
  return *v;
}

PadicNumber invert(const PadicNumber& x) {
  const auto& ctx = x.context();
  auto v = valuation(x);
  if (!v || *v > 0) fail(ErrorKind::NonUnit, "inverting a non-unit");
  if (ctx->f() == 1) {
    return PadicNumber(ctx, inverse_mod(x.coeffs()[0], ctx->modulus()));
  }
  // Inverse in F_q as x^{q-2}, then Newton y <- y(2 - xy).
  Integer P = ctx->p();
  std::vector<Integer> base;
  for (long c : x.residue()) base.emplace_back(c);
  std::vector<Integer> y(ctx->f(), 0);
  y[0] = 1;
  Integer e = ctx->q() - 2;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) y = ctx->multiply(y, base, P);
    base = ctx->multiply(base, base, P);
    e /= 2;
  }
  PadicNumber r(ctx, y);
  PadicNumber two(ctx, Integer(2));
  for (int prec = 1; prec < ctx->N(); prec *= 2) r = r * (two - x * r);
  return r;
}

PadicNumber teichmuller(const ContextPtr& ctx, const std::vector<long>& t) {
  std::vector<Integer> c(t.begin(), t.end());
  PadicNumber w(ctx, c);
  if (w.is_zero()) return w;
  for (int k = 1; k < ctx->N(); ++k) w = w.pow(ctx->q());
  return w;
}

PadicNumber teichmuller(const ContextPtr& ctx, long t) {
  std::vector<long> v(ctx->f(), 0);
  v[0] = t;
  return teichmuller(ctx, v);
}

PadicNumber frobenius_auto(const PadicNumber& x) {
  const auto& ctx = x.context();
  return PadicNumber(ctx, ctx->apply_sigma(x.coeffs(), ctx->modulus()));
}

PadicNumber frobenius_auto(const PadicNumber& x, long k) {
  long f = x.context()->f();
  long e = ((k % f) + f) % f;
  PadicNumber r = x;
  for (long i = 0; i < e; ++i) r = frobenius_auto(r);
  return r;
}

// ---------------------------------------------------------------------------

PadicValue::PadicValue(ContextPtr ctx) : ctx_(ctx), shift_(kExact), unit_(ctx), is_zero_(true) {}

PadicValue::PadicValue(ContextPtr ctx, int shift, PadicNumber unit, bool zero)
    : ctx_(std::move(ctx)), shift_(shift), unit_(std::move(unit)), is_zero_(zero) {}

PadicValue PadicValue::zero(ContextPtr ctx, int abs_prec) {
  PadicNumber u(ctx);
  return PadicValue(std::move(ctx), abs_prec, std::move(u), true);
}

PadicValue PadicValue::normalize(int shift, const PadicNumber& x) {
  auto v = bcml::valuation(x);
  if (!v) return zero(x.context(), shift + x.precision());
  if (*v == 0) return PadicValue(x.context(), shift, x, false);
  return PadicValue(x.context(), shift + *v, x.divide_by_p_power(*v), false);
}

PadicValue::PadicValue(int shift, const PadicNumber& x) : PadicValue(normalize(shift, x)) {}

PadicValue PadicValue::from_rational(ContextPtr ctx, const Rational& q, int rel_prec) {
  if (q == 0) return PadicValue(ctx);
  long p = ctx->p();
  int v = bcml::valuation(q, p);
  Integer num = q.get_num(), den = q.get_den();
  Integer pv = power(p, static_cast<unsigned long>(std::abs(v)));
  if (v > 0) num /= pv;
  if (v < 0) den /= pv;
  auto c = ctx->with_precision(rel_prec);
  PadicNumber u = PadicNumber(c, num) * invert(PadicNumber(c, den));
  return PadicValue(c, v, u, false);
}

int PadicValue::absolute_precision() const {
  if (is_zero_) return shift_;
  return shift_ + unit_.precision();
}

PadicValue PadicValue::operator-() const {
  if (is_zero_) return *this;
  return PadicValue(ctx_, shift_, -unit_, false);
}

PadicValue PadicValue::operator+(const PadicValue& o) const {
  if (!ctx_->compatible(*o.ctx_)) fail(ErrorKind::ContextMismatch, "incompatible p-adic values");
  int abs_prec = std::min(absolute_precision(), o.absolute_precision());
  if (is_zero_) return o.cap(abs_prec);
  if (o.is_zero_) return cap(abs_prec);
  int base = std::min(shift_, o.shift_);
  if (abs_prec >= kExact) fail(ErrorKind::InvalidInput, "unbounded precision in sum");
  int rel = abs_prec - base;
  if (rel <= 0) return zero(ctx_, abs_prec);
  auto c = ctx_->with_precision(rel);
  // Lift both units into the common context before shifting.
  auto lift = [&](const PadicValue& a) {
    Integer scale = power(ctx_->p(), static_cast<unsigned long>(a.shift_ - base));
    std::vector<Integer> coeffs = a.unit_.coeffs();
    for (auto& x : coeffs) x *= scale;
    return PadicNumber(c, coeffs);
  };
  return PadicValue(base, lift(*this) + lift(o));
}

PadicValue PadicValue::operator*(const PadicValue& o) const {
  if (!ctx_->compatible(*o.ctx_)) fail(ErrorKind::ContextMismatch, "incompatible p-adic values");
  if (is_zero_ && o.is_zero_) return zero(ctx_, std::min(kExact, shift_ + o.shift_));
  if (is_zero_) return zero(ctx_, shift_ >= kExact ? kExact : shift_ + o.shift_);
  if (o.is_zero_) return zero(ctx_, o.shift_ >= kExact ? kExact : o.shift_ + shift_);
  return PadicValue(ctx_, shift_ + o.shift_, unit_ * o.unit_, false);
}

PadicValue PadicValue::operator/(const PadicValue& o) const {
  if (o.is_zero_) fail(ErrorKind::NonUnit, "division by a p-adic zero");
  if (is_zero_) return shift_ >= kExact ? *this : zero(ctx_, shift_ - o.shift_);
  return PadicValue(ctx_, shift_ - o.shift_, unit_ * invert(o.unit_), false);
}

PadicValue PadicValue::scale(const Rational& c) const {
  if (c == 0) return PadicValue(ctx_);
  int rel = is_zero_ ? 1 : unit_.precision();
  return *this * from_rational(ctx_, c, rel);
}

PadicValue PadicValue::times_p_power(int k) const {
  if (is_zero_) return shift_ >= kExact ? *this : zero(ctx_, shift_ + k);
  return PadicValue(ctx_, shift_ + k, unit_, false);
}

PadicValue PadicValue::frobenius(long k) const {
  if (is_zero_) return *this;
  return PadicValue(ctx_, shift_, frobenius_auto(unit_, k), false);
}

PadicNumber PadicValue::to_integral(int M) const {
  auto c = ctx_->with_precision(M);
  if (is_zero_) {
    if (shift_ < M) {
      fail(ErrorKind::InsufficientPrecision, "value known only modulo p^" + std::to_string(shift_));
    }
    return PadicNumber(c);
  }
  if (shift_ < 0) fail(ErrorKind::InvalidInput, "value is not integral");
  if (absolute_precision() < M) {
    fail(ErrorKind::InsufficientPrecision, "value known only modulo p^" +
                                               std::to_string(absolute_precision()));
  }
  if (shift_ >= M) return PadicNumber(c);
  std::vector<Integer> coeffs = unit_.coeffs();
  Integer scale = power(ctx_->p(), static_cast<unsigned long>(shift_));
  for (auto& x : coeffs) x *= scale;
  return PadicNumber(c, coeffs);
}

PadicValue PadicValue::cap(int abs_prec) const {
  if (abs_prec >= absolute_precision()) return *this;
  if (is_zero_ || abs_prec <= shift_) return zero(ctx_, abs_prec);
  return PadicValue(ctx_, shift_, unit_.truncate(abs_prec - shift_), false);
}

bool PadicValue::agrees_with(const PadicValue& o, int M) const {
  PadicValue d = cap(M) - o.cap(M);
  return d.is_zero();
}

}  // namespace bcml
