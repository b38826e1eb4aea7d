#include "bcml/residue_field.hpp"

#include <map>
#include <mutex>
#include <numeric>

#include "bcml/error.hpp"
#include "bcml/padic.hpp"

namespace bcml {

FieldPtr FiniteField::get(long p, int k) {
  static std::mutex m;
  static std::map<std::pair<long, int>, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(m);
  auto key = std::make_pair(p, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  FieldPtr F(new FiniteField(p, k));
  cache.emplace(key, F);
  return F;
}

FiniteField::FiniteField(long p, int k) : p_(p), k_(k), q_(1) {
  for (int i = 0; i < k; ++i) q_ *= p;
  if (q_ > 4'000'000) {
    fail(ErrorKind::InvalidInput, "finite field of size " + std::to_string(q_) + " is too large");
  }
  for (const auto& c : conway_polynomial(p, k)) poly_.push_back(c.get_si());
  exp_.assign(q_ - 1 ? q_ - 1 : 1, 0);
  log_.assign(q_, -1);
  // Walk the powers of theta; the Conway root generates F_q^*.
  std::vector<long> cur(k, 0);
  cur[0] = 1;
  for (long e = 0; e < q_ - 1; ++e) {
    Elem x = from_coeffs(cur);
    exp_[e] = x;
    log_[x] = e;
    // cur <- theta * cur, reducing the overflow with the defining polynomial
    long top = cur[k - 1];
    for (int i = k - 1; i >= 0; --i) {
      long below = i > 0 ? cur[i - 1] : 0;
      cur[i] = ((below - top * poly_[i]) % p + p) % p;
    }
  }
}

FiniteField::Elem FiniteField::from_int(long n) const { return ((n % p_) + p_) % p_; }

FiniteField::Elem FiniteField::from_coeffs(const std::vector<long>& c) const {
  Elem x = 0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) x = x * p_ + (((c[i] % p_) + p_) % p_);
  return x;
}

std::vector<long> FiniteField::coeffs(Elem x) const {
  std::vector<long> c(k_, 0);
  for (int i = 0; i < k_; ++i) {
    c[i] = x % p_;
    x /= p_;
  }
  return c;
}

FiniteField::Elem FiniteField::add(Elem a, Elem b) const {
  if (k_ == 1) return (a + b) % p_;
  Elem r = 0, place = 1;
  for (int i = 0; i < k_; ++i) {
    r += ((a % p_ + b % p_) % p_) * place;
    a /= p_;
    b /= p_;
    place *= p_;
  }
  return r;
}

FiniteField::Elem FiniteField::neg(Elem a) const {
  if (k_ == 1) return (p_ - a) % p_;
  Elem r = 0, place = 1;
  for (int i = 0; i < k_; ++i) {
    r += ((p_ - a % p_) % p_) * place;
    a /= p_;
    place *= p_;
  }
  return r;
}

FiniteField::Elem FiniteField::sub(Elem a, Elem b) const { return add(a, neg(b)); }

FiniteField::Elem FiniteField::mul(Elem a, Elem b) const {
  if (a == 0 || b == 0) return 0;
  if (k_ == 1) return (a * b) % p_;
  return exp_[(log_[a] + log_[b]) % (q_ - 1)];
}

FiniteField::Elem FiniteField::inv(Elem a) const {
  if (a == 0) fail(ErrorKind::NonUnit, "inverse of zero in a finite field");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

FiniteField::Elem FiniteField::pow(Elem a, long e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  long n = q_ - 1;
  long r = ((log_[a] * (e % n)) % n + n) % n;
  return exp_[r];
}

bool FiniteField::is_square(Elem a) const {
  if (a == 0 || p_ == 2) return true;
  return log_[a] % 2 == 0;
}

std::optional<FiniteField::Elem> FiniteField::sqrt(Elem a) const {
  if (a == 0) return Elem(0);
  if (p_ == 2) return pow(a, q_ / 2);
  if (log_[a] % 2 != 0) return std::nullopt;
  return exp_[log_[a] / 2];
}

int FiniteField::degree_of(Elem a) const {
  for (int d = 1; d < k_; ++d) {
    if (k_ % d != 0) continue;
    Elem x = a;
    for (int i = 0; i < d; ++i) x = frobenius(x);
    if (x == a) return d;
  }
  return k_;
}

FiniteField::Elem FiniteField::embed_from(const FiniteField& sub, Elem x) const {
  if (sub.p_ != p_ || k_ % sub.k_ != 0) {
    fail(ErrorKind::ContextMismatch, "no embedding between the given finite fields");
  }
  if (sub.k_ == k_ || x == 0) return x;
  long step = (q_ - 1) / (sub.q_ - 1);
  return exp_[(sub.log_[x] * step) % (q_ - 1)];
}

// ---------------------------------------------------------------------------

void fq_trim(FqPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int fq_degree(const FqPoly& a) { return static_cast<int>(a.size()) - 1; }

FqPoly fq_add(const FiniteField& F, const FqPoly& a, const FqPoly& b) {
  FqPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    r[i] = F.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  }
  fq_trim(r);
  return r;
}

FqPoly fq_sub(const FiniteField& F, const FqPoly& a, const FqPoly& b) {
  FqPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    r[i] = F.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  }
  fq_trim(r);
  return r;
}

FqPoly fq_mul(const FiniteField& F, const FqPoly& a, const FqPoly& b) {
  if (a.empty() || b.empty()) return {};
  FqPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  fq_trim(r);
  return r;
}

FqPoly fq_scale(const FiniteField& F, const FqPoly& a, FiniteField::Elem c) {
  FqPoly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
  fq_trim(r);
  return r;
}

std::pair<FqPoly, FqPoly> fq_divmod(const FiniteField& F, const FqPoly& a, const FqPoly& b) {
  if (b.empty()) fail(ErrorKind::InvalidInput, "polynomial division by zero");
  FqPoly rem = a;
  fq_trim(rem);
  if (rem.size() < b.size()) return {{}, rem};
  FqPoly quo(rem.size() - b.size() + 1, 0);
  auto lead_inv = F.inv(b.back());
  while (rem.size() >= b.size()) {
    size_t shift = rem.size() - b.size();
    auto c = F.mul(rem.back(), lead_inv);
    quo[shift] = c;
    for (size_t j = 0; j < b.size(); ++j) rem[shift + j] = F.sub(rem[shift + j], F.mul(c, b[j]));
    fq_trim(rem);
  }
  fq_trim(quo);
  return {quo, rem};
}

FqPoly fq_monic(const FiniteField& F, const FqPoly& a) {
  if (a.empty()) return a;
  return fq_scale(F, a, F.inv(a.back()));
}

FqPoly fq_gcd(const FiniteField& F, FqPoly a, FqPoly b) {
  fq_trim(a);
  fq_trim(b);
  while (!b.empty()) {
    auto r = fq_divmod(F, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return fq_monic(F, a);
}

FqPoly fq_derivative(const FiniteField& F, const FqPoly& a) {
  FqPoly r;
  for (size_t i = 1; i < a.size(); ++i) r.push_back(F.mul(F.from_int(static_cast<long>(i)), a[i]));
  fq_trim(r);
  return r;
}

FiniteField::Elem fq_eval(const FiniteField& F, const FqPoly& a, FiniteField::Elem x) {
  FiniteField::Elem acc = 0;
  for (size_t i = a.size(); i-- > 0;) acc = F.add(F.mul(acc, x), a[i]);
  return acc;
}

int fq_root_multiplicity(const FiniteField& F, const FqPoly& a, FiniteField::Elem x) {
  if (a.empty()) fail(ErrorKind::InvalidInput, "multiplicity of a root of the zero polynomial");
  FqPoly cur = a;
  FqPoly lin = {F.neg(x), 1};
  int m = 0;
  while (true) {
    auto [q, r] = fq_divmod(F, cur, lin);
    if (!r.empty()) return m;
    ++m;
    cur = q;
  }
}

std::vector<std::pair<FiniteField::Elem, int>> fq_roots(const FiniteField& F, const FqPoly& a) {
  std::vector<std::pair<FiniteField::Elem, int>> out;
  if (a.size() <= 1) return out;
  for (long x = 0; x < F.size(); ++x) {
    if (fq_eval(F, a, x) == 0) out.emplace_back(x, fq_root_multiplicity(F, a, x));
  }
  return out;
}

FqPoly fq_embed(const FiniteField& to, const FiniteField& from, const FqPoly& a) {
  FqPoly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = to.embed_from(from, a[i]);
  return r;
}

}  // namespace bcml
