#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bcml/bounds.hpp"
#include "bcml/coleman.hpp"
#include "bcml/derham.hpp"

namespace bcml {

/// Insertion-ordered so that serialization is byte-stable.
using Json = nlohmann::ordered_json;

struct CurveSpec {
  long p = 0;
  int genus = 0;
  std::vector<Integer> f_coeffs;  // low to high
  std::optional<int> precision;
  std::string label;
};

/// Parses and checks the shape of a curve file. InvalidInput names the
/// offending field; parse errors carry the byte offset.
CurveSpec parse_curve_spec(std::string_view text);
CurveSpec read_curve_file(const std::string& path);

/// Builds the curve, checking primality, degree 2g+1 and good reduction.
HyperellipticCurve build_curve(const CurveSpec& spec, int precision);

/// A JSON number when |x| <= 2^53, otherwise its decimal string.
Json integer_json(const Integer& x);
/// Always a decimal string.
Json big_json(const Integer& x);

/// Entries of F reduced mod p^precision, written in base p.
Json frobenius_json(const FrobeniusStructure& S);

struct ZetaCheck {
  std::vector<Integer> charpoly;  // det(T - F) mod p^precision, low to high
  std::vector<Integer> numerator;  // L(T) from point counts, low to high
  int precision = 0;
  bool agrees = false;
  bool fv_identity = false;
};

ZetaCheck zeta_check(const HyperellipticCurve& curve, const FrobeniusStructure& S, int jobs = 1);
Json zeta_json(const ZetaCheck& z);

/// "1/(X_{i+1}-X_i)" for consecutive abscissas X_i = p^{n_i} k_i.
std::vector<std::string> slope_strings(const ColemanSequence& seq);

Json coleman_json(const ColemanSequence& seq, const std::optional<Rational>& lambda,
                  const std::optional<UnramifiedVerdict>& verdict, int precision);

Json bound_json(const BoundReport& r);

Json stoll_json(const StollTable& t);

/// Two-space indentation and a trailing newline.
std::string dump(const Json& j);

std::string bound_tsv(const BoundReport& r);
std::string frobenius_tsv(const FrobeniusStructure& S);
std::string coleman_tsv(const ColemanSequence& seq);
std::string stoll_tsv(const StollTable& t);

/// Comma-separated integers.
std::vector<Integer> parse_integer_list(std::string_view s);

}  // namespace bcml
