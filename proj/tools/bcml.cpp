// bcml: command-line front end for the bounds, Frobenius, Coleman and Stoll
// pipelines. Every run writes a JSON manifest next to its output.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <openssl/crypto.h>
#include <openssl/evp.h>

#include "bcml/bounds.hpp"
#include "bcml/coleman.hpp"
#include "bcml/derham.hpp"
#include "bcml/error.hpp"
#include "bcml/json_io.hpp"

#ifndef BCML_VERSION
#define BCML_VERSION "0.0.0"
#endif

using namespace bcml;

namespace {

constexpr int kDefaultPrecision = 10;

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Run {
  std::vector<std::string> argv;
  std::string format = "json";
  std::string out_path;
  std::string manifest_path;
  int jobs = 1;
  std::optional<int> precision_flag;

  std::vector<std::pair<std::string, std::string>> input_files;  // path, sha256
  std::string input_bytes;
  Json precision = Json::object();
  std::string output;
};

// Precision order: --precision, the curve file, BCML_PRECISION, built-in default.
int resolve_precision(Run& run, const CurveSpec& spec) {
  int value = kDefaultPrecision;
  std::string source = "default";
  if (const char* env = std::getenv("BCML_PRECISION")) {
    try {
      value = std::stoi(env);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidInput, std::string("BCML_PRECISION='") + env + "' is not an integer");
    }
    if (value < 1) fail(ErrorKind::InvalidInput, "BCML_PRECISION must be positive");
    source = "environment";
  }
  if (spec.precision) {
    value = *spec.precision;
    source = "curve file";
  }
  if (run.precision_flag) {
    if (*run.precision_flag < 1) fail(ErrorKind::InvalidInput, "--precision must be positive");
    value = *run.precision_flag;
    source = "flag";
  }
  run.precision["target"] = value;
  run.precision["source"] = source;
  return value;
}

HyperellipticCurve load_curve(Run& run, const std::string& path, int& precision) {
  std::string text = slurp(path);
  run.input_files.emplace_back(path, sha256_hex(text));
  run.input_bytes += text;
  run.input_bytes.push_back('\0');
  CurveSpec spec = parse_curve_spec(text);
  precision = resolve_precision(run, spec);
  return build_curve(spec, precision);
}

CurvePointBar parse_point(const HyperellipticCurve& curve, const std::string& spec) {
  if (spec == "inf" || spec == "infinity") return CurvePointBar::infinity(curve);
  auto xy = parse_integer_list(spec);
  if (xy.size() != 2) fail(ErrorKind::InvalidInput, "--point expects x,y or infinity");
  long p = curve.p();
  auto F = FiniteField::get(p, 1);
  auto x = F->from_int(mod(xy[0], Integer(p)).get_si());
  auto y = F->from_int(mod(xy[1], Integer(p)).get_si());
  for (const auto& z : points_over(curve, 1)) {
    if (z.kind != CurvePointBar::Kind::Infinity && z.x == x && z.y == y) return z;
  }
  fail(ErrorKind::InvalidInput, "point (" + xy[0].get_str() + "," + xy[1].get_str() +
                                    ") is not on the curve mod " + std::to_string(p));
}

CurvePointBar default_point(const HyperellipticCurve& curve) {
  for (const auto& z : points_over(curve, 1)) {
    if (z.kind == CurvePointBar::Kind::FiniteNonWeierstrass) return z;
  }
  fail(ErrorKind::InvalidInput, "no finite non-Weierstrass F_p-point; pass --point");
}

CohomologyClass parse_omega(const HyperellipticCurve& curve, const FrobeniusStructure& S,
                            const std::string& spec) {
  int g = curve.genus();
  auto ctx = curve.context()->with_precision(S.v_precision);
  std::vector<PadicNumber> coords(2 * g, PadicNumber(ctx));
  if (spec.empty()) {
    coords[0] = PadicNumber(ctx, Integer(1));
  } else {
    auto c = parse_integer_list(spec);
    if (c.size() != static_cast<size_t>(g) && c.size() != static_cast<size_t>(2 * g)) {
      fail(ErrorKind::InvalidInput, "--omega needs " + std::to_string(g) + " or " +
                                        std::to_string(2 * g) + " coordinates");
    }
    for (size_t i = 0; i < c.size(); ++i) coords[i] = PadicNumber(ctx, c[i]);
  }
  return CohomologyClass(g, coords);
}

std::string cmd_bound(Run& run, const std::string& kind, std::optional<long> g,
                      std::optional<long> r, std::optional<long> p,
                      const std::string& residue_points) {
  auto need = [](const auto& v, const char* flag) {
    if (!v) fail(ErrorKind::InvalidInput, std::string("bound needs ") + flag);
    return *v;
  };
  auto genus = [&] {
    long v = need(g, "--g");
    if (v < 1 || v > 1000) fail(ErrorKind::InvalidInput, "--g must lie in [1, 1000]");
    return static_cast<int>(v);
  };
  run.input_bytes += kind;
  BoundReport rep;
  if (kind == "mm") {
    rep = buium_mm_report(genus(), need(p, "--p"));
  } else if (kind == "ml-red") {
    rep = mordell_lang_reduction_report(genus(), need(r, "--r"), need(p, "--p"));
  } else if (kind == "ml-points") {
    rep = mordell_lang_point_report(genus(), need(r, "--r"), need(p, "--p"));
  } else if (kind == "chabauty") {
    if (residue_points.empty()) fail(ErrorKind::InvalidInput, "bound chabauty needs --residue-points");
    Integer count;
    if (count.set_str(residue_points, 10) != 0) {
      fail(ErrorKind::InvalidInput, "--residue-points must be an integer");
    }
    rep = coleman_chabauty_report(count, genus());
  } else {
    fail(ErrorKind::InvalidInput, "unknown bound kind '" + kind + "'");
  }
  return run.format == "tsv" ? bound_tsv(rep) : dump(bound_json(rep));
}

std::string cmd_frobenius(Run& run, const std::string& path) {
  int N = 0;
  auto curve = load_curve(run, path, N);
  auto S = frobenius_matrix(curve);
  run.precision["output"] = S.precision;
  run.precision["working"] = S.working_precision;
  if (run.format == "tsv") return frobenius_tsv(S);
  Json out;
  if (!curve.label().empty()) out["label"] = curve.label();
  Json matrix = frobenius_json(S);
  for (const auto& [key, value] : matrix.items()) out[key] = value;
  out["zeta_check"] = zeta_json(zeta_check(curve, S, run.jobs));
  return dump(out);
}

std::string cmd_coleman(Run& run, const std::string& path, const std::string& omega_spec,
                        const std::string& point_spec, int length,
                        const std::string& lambda_spec) {
  int N = 0;
  auto curve = load_curve(run, path, N);
  if (length < 1) fail(ErrorKind::InvalidInput, "--length must be positive");
  std::optional<Rational> lambda;
  if (!lambda_spec.empty()) lambda = parse_rational(lambda_spec);
  auto S = frobenius_matrix(curve);
  auto z = point_spec.empty() ? default_point(curve) : parse_point(curve, point_spec);
  auto omega = parse_omega(curve, S, omega_spec);
  auto seq = coleman_sequence(S, omega, z, length);
  std::optional<UnramifiedVerdict> verdict;
  if (lambda) verdict = unramified_test(curve, S, z, *lambda, length);
  run.precision["output"] = seq.nseq.precision;
  run.precision["working"] = S.working_precision;
  if (run.format == "tsv") {
    std::string out = coleman_tsv(seq);
    if (verdict) out += std::string("# verdict\t") + (verdict->excluded ? "Excluded" : "NotExcluded") + "\n";
    return out;
  }
  return dump(coleman_json(seq, lambda, verdict, seq.nseq.precision));
}

std::string cmd_stoll(Run& run, const std::string& path, const std::vector<std::string>& basis) {
  int N = 0;
  auto curve = load_curve(run, path, N);
  if (basis.empty()) fail(ErrorKind::InvalidInput, "stoll needs at least one --basis polynomial");
  auto F = FiniteField::get(curve.p(), 1);
  std::vector<DifferentialModP> ws;
  for (const auto& spec : basis) {
    FqPoly h;
    for (const auto& c : parse_integer_list(spec)) h.push_back(F->from_int(mod(c, Integer(curve.p())).get_si()));
    fq_trim(h);
    if (fq_degree(h) > curve.genus() - 1) {
      fail(ErrorKind::InvalidInput, "basis polynomial '" + spec + "' has degree above g-1");
    }
    ws.push_back(DifferentialModP{F, curve.genus(), h});
  }
  auto table = stoll_vanishing_sum(curve, ws);
  return run.format == "tsv" ? stoll_tsv(table) : dump(stoll_json(table));
}

Json versions() {
  Json v;
  v["bcml"] = BCML_VERSION;
  v["gmp"] = gmp_version;
  v["nlohmann_json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_PATCH);
  v["cli11"] = CLI11_VERSION;
  v["openssl"] = OpenSSL_version(OPENSSL_VERSION);
  return v;
}

void write_manifest(const Run& run, int code, const std::string& error, double seconds) {
  std::string path = run.manifest_path;
  if (path.empty()) path = run.out_path.empty() ? "bcml.manifest.json" : run.out_path + ".manifest.json";
  std::string command;
  for (const auto& a : run.argv) command += (command.empty() ? "" : " ") + a;
  std::string hashed;
  for (size_t i = 1; i < run.argv.size(); ++i) hashed += run.argv[i] + '\0';
  hashed += run.input_bytes;

  Json m;
  m["command"] = command;
  m["inputs_sha256"] = sha256_hex(hashed);
  Json files = Json::array();
  for (const auto& [p, h] : run.input_files) files.push_back(Json{{"path", p}, {"sha256", h}});
  m["input_files"] = std::move(files);
  m["precision"] = run.precision;
  m["versions"] = versions();
  Json outputs = Json::array();
  if (code == 0) {
    outputs.push_back(run.out_path.empty() ? "<stdout>" : run.out_path);
  }
  m["outputs"] = std::move(outputs);
  m["output_sha256"] = code == 0 ? Json(sha256_hex(run.output)) : Json(nullptr);
  m["exit_code"] = code;
  if (!error.empty()) m["error"] = error;
  m["wall_time_seconds"] = seconds;

  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "bcml: cannot write manifest " << path << "\n";
    return;
  }
  f << dump(m);
}

}  // namespace

int main(int argc, char** argv) {
  auto start = std::chrono::steady_clock::now();
  Run run;
  run.argv.assign(argv, argv + argc);

  CLI::App app{"Exact bounds, Frobenius matrices and Coleman sequences for hyperelliptic curves"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", run.format, "Output format")->check(CLI::IsMember({"json", "tsv"}));
  app.add_option("--out", run.out_path, "Write the primary output here instead of stdout");
  app.add_option("--manifest", run.manifest_path, "Manifest path (default: <out>.manifest.json)");
  app.add_option("--jobs", run.jobs, "Worker threads for point enumeration")->check(CLI::Range(1, 256));
  app.add_option("--precision", run.precision_flag, "Target p-adic precision");

  std::string bound_kind;
  std::optional<long> g, r, p;
  std::string residue_points;
  auto* bound = app.add_subcommand("bound", "Evaluate a counting bound");
  bound->add_option("kind", bound_kind, "mm | ml-red | ml-points | chabauty")->required();
  bound->add_option("--g", g, "Genus");
  bound->add_option("--r", r, "Rank of Gamma");
  bound->add_option("--p", p, "Prime");
  bound->add_option("--residue-points", residue_points, "#X(k) for the Chabauty count");

  std::string curve_path;
  auto* frob = app.add_subcommand("frobenius", "Frobenius matrix with a zeta cross-check");
  frob->add_option("curve", curve_path, "Curve JSON file")->required();

  std::string omega, point, lambda;
  int length = 5;
  auto* coleman = app.add_subcommand("coleman", "Coleman sequences and the unramified test");
  coleman->add_option("curve", curve_path, "Curve JSON file")->required();
  coleman->add_option("--omega", omega, "Coordinates in the basis x^i dx/y (default dx/y)");
  coleman->add_option("--point", point, "x,y over F_p or 'infinity' (default: first finite point)");
  coleman->add_option("--length", length, "Number of terms");
  coleman->add_option("--lambda", lambda, "Valuation c/d of T to test");

  std::vector<std::string> basis;
  auto* stoll = app.add_subcommand("stoll", "Stoll vanishing sum of a subspace of differentials");
  stoll->add_option("curve", curve_path, "Curve JSON file")->required();
  stoll->add_option("--basis", basis, "Polynomial h of h(x)dx/y, coefficients low to high")
      ->take_all()
      ->allow_extra_args(false);

  int code = 0;
  std::string error;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    code = 1;
    error = e.what();
  }

  if (code == 0) {
    try {
      if (*bound) {
        run.output = cmd_bound(run, bound_kind, g, r, p, residue_points);
      } else if (*frob) {
        run.output = cmd_frobenius(run, curve_path);
      } else if (*coleman) {
        run.output = cmd_coleman(run, curve_path, omega, point, length, lambda);
      } else if (*stoll) {
        run.output = cmd_stoll(run, curve_path, basis);
      }
      if (run.out_path.empty()) {
        std::cout << run.output;
      } else {
        std::ofstream f(run.out_path, std::ios::binary);
        if (!f) fail(ErrorKind::InvalidInput, "cannot write " + run.out_path);
        f << run.output;
      }
    } catch (const Error& e) {
      code = exit_code(e.kind());
      error = e.what();
      std::cerr << "bcml: " << error << "\n";
    } catch (const std::exception& e) {
      code = 4;
      error = e.what();
      std::cerr << "bcml: internal error: " << error << "\n";
    }
  }

  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(run, code, error, seconds);
  return code;
}
