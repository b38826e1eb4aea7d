#include "bcml/json_io.hpp"

#include <fstream>
#include <sstream>

#include "bcml/error.hpp"

namespace bcml {

namespace {

const Integer kSafeInteger = power(2, 53);

std::string field_type(const Json& v) {
  return v.type_name();
}

Integer integer_field(const Json& v, const std::string& name) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return Integer(std::to_string(v.get<unsigned long long>()));
    return Integer(std::to_string(v.get<long long>()));
  }
  if (v.is_string()) {
    Integer out;
    const auto& s = v.get_ref<const std::string&>();
    if (!s.empty() && out.set_str(s, 10) == 0) return out;
    fail(ErrorKind::InvalidInput, "field '" + name + "': \"" + s + "\" is not a decimal integer");
  }
  fail(ErrorKind::InvalidInput, "field '" + name + "' must be an integer, got " + field_type(v));
}

long small_field(const Json& v, const std::string& name, long lo, long hi) {
  Integer x = integer_field(v, name);
  if (x < lo || x > hi) {
    fail(ErrorKind::InvalidInput, "field '" + name + "' = " + x.get_str() + " is outside [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return x.get_si();
}

}  // namespace

CurveSpec parse_curve_spec(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::InvalidInput, std::string("malformed curve JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::InvalidInput, "curve file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "p" && key != "genus" && key != "f_coeffs" && key != "precision" && key != "label") {
      fail(ErrorKind::InvalidInput, "unknown field '" + key + "'");
    }
  }
  for (const char* key : {"p", "genus", "f_coeffs"}) {
    if (!j.contains(key)) fail(ErrorKind::InvalidInput, std::string("missing field '") + key + "'");
  }

  CurveSpec spec;
  spec.p = small_field(j["p"], "p", 2, 1L << 30);
  spec.genus = static_cast<int>(small_field(j["genus"], "genus", 1, 64));
  const Json& f = j["f_coeffs"];
  if (!f.is_array()) {
    fail(ErrorKind::InvalidInput, "field 'f_coeffs' must be an array, got " + field_type(f));
  }
  for (size_t i = 0; i < f.size(); ++i) {
    spec.f_coeffs.push_back(integer_field(f[i], "f_coeffs[" + std::to_string(i) + "]"));
  }
  size_t expected = static_cast<size_t>(2 * spec.genus + 2);
  if (spec.f_coeffs.size() != expected) {
    fail(ErrorKind::InvalidInput,
         "degree: f_coeffs has " + std::to_string(spec.f_coeffs.size()) +
             " entries but genus " + std::to_string(spec.genus) + " needs degree 2g+1 = " +
             std::to_string(expected - 1));
  }
  if (spec.f_coeffs.back() != 1) {
    fail(ErrorKind::InvalidInput, "monic: leading coefficient is " +
                                      spec.f_coeffs.back().get_str() + ", expected 1");
  }
  if (j.contains("precision")) {
    spec.precision = static_cast<int>(small_field(j["precision"], "precision", 1, 1000));
  }
  if (j.contains("label")) {
    if (!j["label"].is_string()) fail(ErrorKind::InvalidInput, "field 'label' must be a string");
    spec.label = j["label"].get<std::string>();
  }
  return spec;
}

CurveSpec read_curve_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open curve file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_curve_spec(buf.str());
}

HyperellipticCurve build_curve(const CurveSpec& spec, int precision) {
  if (!is_prime(spec.p)) {
    fail(ErrorKind::NonPrime, "primality: p = " + std::to_string(spec.p) + " is not prime");
  }
  return HyperellipticCurve(spec.p, spec.f_coeffs, precision, spec.label);
}

Json integer_json(const Integer& x) {
  if (abs(x) <= kSafeInteger) return Json(x.get_si());
  return Json(x.get_str());
}

Json big_json(const Integer& x) { return Json(x.get_str()); }

Json frobenius_json(const FrobeniusStructure& S) {
  Json out;
  out["p"] = S.p;
  out["genus"] = S.genus;
  out["precision"] = S.precision;
  out["working_precision"] = S.working_precision;
  out["lost_digits"] = S.lost_digits;
  Integer m = power(S.p, static_cast<unsigned long>(S.precision));
  Json rows = Json::array();
  for (const auto& row : S.F) {
    Json r = Json::array();
    for (const auto& a : row) r.push_back(base_p_digits(mod(a, m), S.p, S.precision));
    rows.push_back(std::move(r));
  }
  out["matrix"] = std::move(rows);
  return out;
}

ZetaCheck zeta_check(const HyperellipticCurve& curve, const FrobeniusStructure& S, int jobs) {
  ZetaCheck z;
  z.precision = S.precision;
  Integer m = power(S.p, static_cast<unsigned long>(S.precision));
  z.charpoly = charpoly_mod(S.F, m);
  z.numerator = zeta_numerator_bruteforce(curve, jobs);
  size_t d = z.numerator.size() - 1;
  z.agrees = z.charpoly.size() == d + 1;
  for (size_t j = 0; z.agrees && j <= d; ++j) z.agrees = z.charpoly[d - j] == mod(z.numerator[j], m);
  z.fv_identity = fv_identity_holds(S);
  return z;
}

Json zeta_json(const ZetaCheck& z) {
  Json out;
  out["precision"] = z.precision;
  Json cp = Json::array();
  for (const auto& c : z.charpoly) cp.push_back(integer_json(c));
  Json L = Json::array();
  for (const auto& c : z.numerator) L.push_back(integer_json(c));
  out["charpoly"] = std::move(cp);
  out["zeta_numerator"] = std::move(L);
  out["agrees"] = z.agrees;
  out["fv_identity"] = z.fv_identity;
  return out;
}

std::vector<std::string> slope_strings(const ColemanSequence& seq) {
  auto X = seq.abscissas();
  std::vector<std::string> out;
  for (size_t i = 0; i + 1 < X.size(); ++i) {
    out.push_back("1/(" + X[i + 1].get_str() + "-" + X[i].get_str() + ")");
  }
  return out;
}

Json coleman_json(const ColemanSequence& seq, const std::optional<Rational>& lambda,
                  const std::optional<UnramifiedVerdict>& verdict, int precision) {
  Json out;
  out["n"] = seq.n;
  out["k"] = seq.k;
  out["slopes"] = slope_strings(seq);
  if (verdict) {
    out["verdict"] = verdict->excluded ? "Excluded" : "NotExcluded";
  } else {
    out["verdict"] = "none";
  }
  out["precision"] = precision;
  if (lambda) out["lambda"] = to_string(*lambda);
  if (verdict) {
    out["branch"] = verdict->branch;
    Json cert = Json::array();
    for (const auto& r : verdict->certificate) {
      Json c;
      c["source"] = r.source;
      c["n"] = r.n;
      c["k"] = r.k;
      c["valuation"] = r.valuation.kind == SlopeValuation::Kind::Exact
                           ? Json(to_string(r.valuation.value))
                           : Json("IsASlope");
      cert.push_back(std::move(c));
    }
    out["certificate"] = std::move(cert);
  }
  return out;
}

Json bound_json(const BoundReport& r) {
  Json out;
  out["formula"] = r.formula;
  Json inputs = Json::object();
  for (const auto& [name, v] : r.inputs) inputs[name] = big_json(v);
  out["inputs"] = std::move(inputs);
  out["value"] = big_json(r.value);
  Json flags = Json::object();
  for (const auto& [name, b] : r.flags) flags[name] = b;
  out["flags"] = std::move(flags);
  out["notes"] = r.notes;
  return out;
}

Json stoll_json(const StollTable& t) {
  Json out;
  out["dimension"] = t.dimension;
  out["r"] = t.r;
  Json rows = Json::array();
  for (const auto& e : t.entries) {
    Json row;
    row["point"] = e.where;
    row["n"] = e.n;
    rows.push_back(std::move(row));
  }
  out["entries"] = std::move(rows);
  out["total"] = t.total;
  out["bound"] = 2 * t.r;
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string bound_tsv(const BoundReport& r) {
  std::string out = "formula\tvalue\n";
  out += r.formula + "\t" + r.value.get_str() + "\n";
  return out;
}

std::string frobenius_tsv(const FrobeniusStructure& S) {
  Integer m = power(S.p, static_cast<unsigned long>(S.precision));
  std::string out = "row\tcol\tdigits\n";
  for (size_t i = 0; i < S.F.size(); ++i)
    for (size_t j = 0; j < S.F[i].size(); ++j) {
      out += std::to_string(i) + "\t" + std::to_string(j) + "\t" +
             base_p_digits(mod(S.F[i][j], m), S.p, S.precision) + "\n";
    }
  return out;
}

std::string coleman_tsv(const ColemanSequence& seq) {
  auto X = seq.abscissas();
  std::string out = "i\tn\tk\tabscissa\n";
  for (int i = 0; i < seq.length(); ++i) {
    out += std::to_string(i) + "\t" + std::to_string(seq.n[i]) + "\t" + std::to_string(seq.k[i]) +
           "\t" + X[i].get_str() + "\n";
  }
  return out;
}

std::string stoll_tsv(const StollTable& t) {
  std::string out = "point\tn\n";
  for (const auto& e : t.entries) out += e.where + "\t" + std::to_string(e.n) + "\n";
  out += "total\t" + std::to_string(t.total) + "\n";
  return out;
}

std::vector<Integer> parse_integer_list(std::string_view s) {
  std::vector<Integer> out;
  size_t pos = 0;
  while (true) {
    size_t comma = s.find(',', pos);
    std::string item(s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos));
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    Integer v;
    if (item.empty() || v.set_str(item, 10) != 0) {
      fail(ErrorKind::InvalidInput, "'" + std::string(s) + "' is not a comma-separated integer list");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace bcml
