#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "bcml/integer.hpp"
#include "bcml/padic.hpp"

namespace bcml {

struct SeriesCoefficient {
  enum class Kind {
    Known,    // valuation is exactly `value`
    Zero,     // exactly zero
    Unknown,  // indistinguishable from zero; valuation >= `value`
  };
  Kind kind = Kind::Zero;
  Rational value;

  static SeriesCoefficient known(Rational v) { return {Kind::Known, std::move(v)}; }
  static SeriesCoefficient zero() { return {Kind::Zero, 0}; }
  static SeriesCoefficient at_least(Rational v) { return {Kind::Unknown, std::move(v)}; }
};

/// Lower bound val(a_n) >= intercept + slope*n - (log_term ? floor(log_p n) : 0)
/// for every n past the stored coefficients.
struct TailBound {
  Rational intercept;
  Rational slope;
  bool log_term = false;

  Rational at(long p, long n) const;
};

/// Coefficient-valuation profile of sum a_n T^n, n < M.
class PadicSeries {
 public:
  PadicSeries(long p, std::vector<SeriesCoefficient> coeffs, std::optional<TailBound> tail = {});

  static PadicSeries from_rationals(long p, const std::vector<Rational>& coeffs);
  static PadicSeries from_integers(long p, const std::vector<Integer>& coeffs);
  static PadicSeries from_values(const std::vector<PadicValue>& coeffs,
                                 std::optional<TailBound> tail = {});
  static PadicSeries from_numbers(const std::vector<PadicNumber>& coeffs,
                                  std::optional<TailBound> tail = {});

  long prime() const { return p_; }
  long truncation() const { return static_cast<long>(coeffs_.size()); }
  const std::vector<SeriesCoefficient>& coefficients() const { return coeffs_; }
  const std::optional<TailBound>& tail() const { return tail_; }

 private:
  long p_;
  std::vector<SeriesCoefficient> coeffs_;
  std::optional<TailBound> tail_;
};

struct PolygonVertex {
  long n;
  Rational m;
  friend bool operator==(const PolygonVertex&, const PolygonVertex&) = default;
};

struct Slope {
  Rational lambda;
  long multiplicity;
  friend bool operator==(const Slope&, const Slope&) = default;
};

class NewtonPolygon {
 public:
  /// Lower convex hull of the known points, strictly convex vertex list.
  const std::vector<PolygonVertex>& vertices() const { return vertices_; }
  /// Segments as (gradient, horizontal length), left to right.
  std::vector<std::pair<Rational, long>> segments() const;
  /// Largest abscissa up to which the polygon is certified.
  /// nullopt means certified everywhere.
  const std::optional<long>& horizon() const { return horizon_; }
  long prime() const { return p_; }

  /// Every point whose valuation is only bounded below, beyond the known ones.
  const std::vector<PolygonVertex>& uncertain_bounds() const { return uncertain_; }
  const std::optional<TailBound>& tail() const { return tail_; }
  long tail_start() const { return tail_start_; }

  /// Minimum over uncertain points and the tail of lambda*n + bound, for n > after.
  std::optional<Rational> uncertain_minimum(const Rational& lambda, long after) const;

 private:
  friend NewtonPolygon newton_polygon(const PadicSeries& s);

  long p_ = 0;
  std::vector<PolygonVertex> vertices_;
  std::optional<long> horizon_;
  std::vector<PolygonVertex> uncertain_;
  std::optional<TailBound> tail_;
  long tail_start_ = 0;
};

/// Lower convex hull of {(n, val a_n)} with a certification horizon.
NewtonPolygon newton_polygon(const PadicSeries& s);

/// Negated gradients of the descending segments with their horizontal lengths,
/// sorted by lambda. UncertifiedRegion if the certified part may miss one.
std::vector<Slope> negative_slopes(const NewtonPolygon& P);

struct SlopeValuation {
  enum class Kind { Exact, IsASlope };
  Kind kind;
  Rational value;  // meaningful for Exact
  /// Vertex (n, m) at which lambda*n + m is minimized.
  PolygonVertex vertex;

  bool is_slope() const { return kind == Kind::IsASlope; }
};

/// val F(z) for val z = lambda: lambda*n + m at the vertex bracketing -lambda.
SlopeValuation value_valuation(const NewtonPolygon& P, const Rational& lambda);

/// TSV rows "n<TAB>val<TAB>on_hull", with "?" / ">=v" markers for zero and
/// unknown coefficients.
void write_series_tsv(std::ostream& out, const PadicSeries& s, const NewtonPolygon& P);

}  // namespace bcml
