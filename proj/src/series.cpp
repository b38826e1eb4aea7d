#include "bcml/series.hpp"

#include <algorithm>

#include "bcml/error.hpp"

namespace bcml {

namespace {

Rational cross(const PolygonVertex& o, const PolygonVertex& a, const PolygonVertex& b) {
  return Rational(a.n - o.n) * (b.m - o.m) - (a.m - o.m) * Rational(b.n - o.n);
}

std::vector<PolygonVertex> lower_hull(std::vector<PolygonVertex> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.n < b.n || (a.n == b.n && a.m < b.m);
  });
  std::vector<PolygonVertex> hull;
  for (const auto& pt : pts) {
    if (!hull.empty() && hull.back().n == pt.n) continue;  // keep the lowest per abscissa
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0) hull.pop_back();
    hull.push_back(pt);
  }
  return hull;
}

}  // namespace

Rational TailBound::at(long p, long n) const {
  Rational v = intercept + slope * Rational(n);
  if (log_term && n >= 1) v -= floor_log(p, Integer(n));
  return v;
}

PadicSeries::PadicSeries(long p, std::vector<SeriesCoefficient> coeffs, std::optional<TailBound> tail)
    : p_(p), coeffs_(std::move(coeffs)), tail_(std::move(tail)) {
  if (!is_prime(p)) fail(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
}

PadicSeries PadicSeries::from_rationals(long p, const std::vector<Rational>& coeffs) {
  std::vector<SeriesCoefficient> c;
  for (const auto& q : coeffs) {
    c.push_back(q == 0 ? SeriesCoefficient::zero() : SeriesCoefficient::known(valuation(q, p)));
  }
  return PadicSeries(p, std::move(c));
}

PadicSeries PadicSeries::from_integers(long p, const std::vector<Integer>& coeffs) {
  std::vector<Rational> q(coeffs.begin(), coeffs.end());
  return from_rationals(p, q);
}

PadicSeries PadicSeries::from_values(const std::vector<PadicValue>& coeffs,
                                     std::optional<TailBound> tail) {
  if (coeffs.empty()) fail(ErrorKind::InvalidInput, "empty series");
  std::vector<SeriesCoefficient> c;
  for (const auto& v : coeffs) {
    if (!v.is_zero()) {
      c.push_back(SeriesCoefficient::known(v.valuation()));
    } else if (v.absolute_precision() >= PadicValue::kExact) {
      c.push_back(SeriesCoefficient::zero());
    } else {
      c.push_back(SeriesCoefficient::at_least(v.absolute_precision()));
    }
  }
  return PadicSeries(coeffs.front().context()->p(), std::move(c), std::move(tail));
}

PadicSeries PadicSeries::from_numbers(const std::vector<PadicNumber>& coeffs,
                                      std::optional<TailBound> tail) {
  if (coeffs.empty()) fail(ErrorKind::InvalidInput, "empty series");
  std::vector<SeriesCoefficient> c;
  for (const auto& x : coeffs) {
    auto v = valuation(x);
    c.push_back(v ? SeriesCoefficient::known(*v) : SeriesCoefficient::at_least(x.precision()));
  }
  return PadicSeries(coeffs.front().prime(), std::move(c), std::move(tail));
}

std::vector<std::pair<Rational, long>> NewtonPolygon::segments() const {
  std::vector<std::pair<Rational, long>> out;
  for (size_t i = 0; i + 1 < vertices_.size(); ++i) {
    long len = vertices_[i + 1].n - vertices_[i].n;
    out.emplace_back((vertices_[i + 1].m - vertices_[i].m) / Rational(len), len);
  }
  return out;
}

std::optional<Rational> NewtonPolygon::uncertain_minimum(const Rational& lambda, long after) const {
  std::optional<Rational> best;
  auto consider = [&](const Rational& v) {
    if (!best || v < *best) best = v;
  };
  for (const auto& u : uncertain_) {
    if (u.n > after) consider(lambda * Rational(u.n) + u.m);
  }
  if (tail_) {
    Rational rate = lambda + tail_->slope;
    if (rate < 0 || (rate == 0 && tail_->log_term)) {
      fail(ErrorKind::UncertifiedRegion, "tail bound is unbounded below along this slope");
    }
    long n0 = std::max(tail_start_, after + 1);
    Rational start = lambda * Rational(n0) + tail_->at(p_, n0);
    consider(start);
    if (tail_->log_term) {
      // Between powers of p the bound increases; only the jumps at p^k can lower it.
      Integer pk = p_;
      while (pk <= n0) pk *= p_;
      for (; pk.fits_slong_p(); pk *= p_) {
        long n = pk.get_si();
        Rational v = lambda * Rational(n) + tail_->at(p_, n);
        consider(v);
        if (v > start && rate * Rational(n) * Rational(p_ - 1) > 1) break;
      }
    }
  }
  return best;
}

NewtonPolygon newton_polygon(const PadicSeries& s) {
  NewtonPolygon P;
  P.p_ = s.prime();
  P.tail_ = s.tail();
  P.tail_start_ = s.truncation();
  std::vector<PolygonVertex> known;
  const auto& c = s.coefficients();
  for (long n = 0; n < static_cast<long>(c.size()); ++n) {
    if (c[n].kind == SeriesCoefficient::Kind::Known) known.push_back({n, c[n].value});
    if (c[n].kind == SeriesCoefficient::Kind::Unknown) P.uncertain_.push_back({n, c[n].value});
  }
  if (known.empty()) {
    fail(ErrorKind::AllCoefficientsIndistinguishableFromZero,
         "no coefficient has a known valuation");
  }
  P.vertices_ = lower_hull(known);
  if (P.uncertain_.empty() && !P.tail_) return P;

  // Pessimistic hull: unknown coefficients sit at their lower bounds, plus
  // samples of the tail bound at its jump points.
  std::vector<PolygonVertex> pessimistic = known;
  pessimistic.insert(pessimistic.end(), P.uncertain_.begin(), P.uncertain_.end());
  if (P.tail_) {
    long n0 = std::max<long>(P.tail_start_, 1);
    pessimistic.push_back({n0, P.tail_->at(P.p_, n0)});
    Integer pk = P.p_;
    for (int k = 1; k < 40 && pk.fits_slong_p() && pk <= Integer(n0) * power(P.p_, 8); ++k) {
      if (pk > n0) pessimistic.push_back({pk.get_si(), P.tail_->at(P.p_, pk.get_si())});
      pk *= P.p_;
    }
  }
  auto pes = lower_hull(pessimistic);
  size_t i = 0;
  while (i < P.vertices_.size() && i < pes.size() && P.vertices_[i] == pes[i]) ++i;
  P.horizon_ = i == 0 ? std::min(P.vertices_.front().n, pes.front().n) - 1 : P.vertices_[i - 1].n;
  return P;
}

std::vector<Slope> negative_slopes(const NewtonPolygon& P) {
  std::vector<Slope> out;
  const auto& v = P.vertices();
  long last_descent_end = v.front().n;
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    Rational grad = (v[i + 1].m - v[i].m) / Rational(v[i + 1].n - v[i].n);
    if (grad >= 0) break;
    out.push_back({-grad, v[i + 1].n - v[i].n});
    last_descent_end = v[i + 1].n;
  }
  if (P.horizon()) {
    long X = *P.horizon();
    if (last_descent_end > X) {
      fail(ErrorKind::UncertifiedRegion, "descending segments extend past the certified horizon");
    }
    // The lowest ordinate so far must not be undercut by anything to its right.
    Rational low;
    for (const auto& vert : v) {
      if (vert.n == last_descent_end) low = vert.m;
    }
    auto m = P.uncertain_minimum(Rational(0), last_descent_end);
    if (m && *m < low) {
      fail(ErrorKind::UncertifiedRegion,
           "an uncertain coefficient may create a further descending segment");
    }
  }
  std::sort(out.begin(), out.end(), [](const Slope& a, const Slope& b) { return a.lambda < b.lambda; });
  return out;
}

SlopeValuation value_valuation(const NewtonPolygon& P, const Rational& lambda) {
  if (lambda <= 0) fail(ErrorKind::InvalidInput, "lambda must be positive");
  const auto& v = P.vertices();
  size_t best = 0;
  int ties = 0;
  Rational best_value = lambda * Rational(v[0].n) + v[0].m;
  for (size_t i = 1; i < v.size(); ++i) {
    Rational val = lambda * Rational(v[i].n) + v[i].m;
    if (val < best_value) {
      best_value = val;
      best = i;
      ties = 0;
    } else if (val == best_value) {
      ++ties;
    }
  }
  auto m = P.uncertain_minimum(lambda, -1);
  if (m && *m <= best_value) {
    fail(ErrorKind::UncertifiedRegion, "uncertain coefficients may dominate at this valuation");
  }
  if (ties > 0) return {SlopeValuation::Kind::IsASlope, best_value, v[best]};
  return {SlopeValuation::Kind::Exact, best_value, v[best]};
}

void write_series_tsv(std::ostream& out, const PadicSeries& s, const NewtonPolygon& P) {
  out << "n\tval\ton_hull\n";
  const auto& c = s.coefficients();
  size_t vi = 0;
  const auto& verts = P.vertices();
  for (long n = 0; n < static_cast<long>(c.size()); ++n) {
    while (vi < verts.size() && verts[vi].n < n) ++vi;
    bool on_hull = vi < verts.size() && verts[vi].n == n;
    out << n << '\t';
    switch (c[n].kind) {
      case SeriesCoefficient::Kind::Known: out << to_string(c[n].value); break;
      case SeriesCoefficient::Kind::Zero: out << "inf"; break;
      case SeriesCoefficient::Kind::Unknown: out << ">=" << to_string(c[n].value); break;
    }
    out << '\t' << (on_hull ? 1 : 0) << '\n';
  }
}

}  // namespace bcml
