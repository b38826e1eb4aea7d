#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bcml/bounds.hpp"
#include "bcml/coleman.hpp"
#include "bcml/derham.hpp"
#include "bcml/error.hpp"
#include "bcml/json_io.hpp"
#include "bcml/witt.hpp"

namespace py = pybind11;

// Python int <-> mpz_class through the decimal representation.
namespace pybind11::detail {
template <>
struct type_caster<bcml::Integer> {
  PYBIND11_TYPE_CASTER(bcml::Integer, const_name("int"));

  bool load(handle src, bool) {
    if (!PyLong_Check(src.ptr())) return false;
    std::string s = py::str(src);
    return value.set_str(s, 10) == 0;
  }

  static handle cast(const bcml::Integer& v, return_value_policy, handle) {
    return PyLong_FromString(v.get_str().c_str(), nullptr, 10);
  }
};
}  // namespace pybind11::detail

namespace {

using namespace bcml;

using IntPair = std::pair<Integer, Integer>;

PyObject* g_error_type = nullptr;

HyperellipticCurve curve_from(const std::string& text, std::optional<int> precision) {
  auto spec = parse_curve_spec(text);
  int N = precision ? *precision : spec.precision.value_or(10);
  if (N < 1 || N > 1000) fail(ErrorKind::InvalidInput, "precision must lie in [1, 1000]");
  return build_curve(spec, N);
}

CurvePointBar pick_point(const HyperellipticCurve& curve, const std::optional<IntPair>& xy,
                         bool at_infinity) {
  if (at_infinity) return CurvePointBar::infinity(curve);
  long p = curve.p();
  auto F = FiniteField::get(p, 1);
  for (const auto& z : points_over(curve, 1)) {
    if (!xy) {
      if (z.kind == CurvePointBar::Kind::FiniteNonWeierstrass) return z;
      continue;
    }
    if (z.kind != CurvePointBar::Kind::Infinity &&
        z.x == F->from_int(mod(xy->first, Integer(p)).get_si()) &&
        z.y == F->from_int(mod(xy->second, Integer(p)).get_si())) {
      return z;
    }
  }
  if (!xy) fail(ErrorKind::InvalidInput, "no finite non-Weierstrass F_p-point; pass point");
  fail(ErrorKind::InvalidInput, "point (" + xy->first.get_str() + "," + xy->second.get_str() +
                                    ") is not on the curve mod " + std::to_string(p));
}

std::string frobenius(const std::string& curve_text, std::optional<int> precision, int jobs) {
  auto curve = curve_from(curve_text, precision);
  auto S = frobenius_matrix(curve);
  Json out;
  if (!curve.label().empty()) out["label"] = curve.label();
  Json matrix = frobenius_json(S);
  for (const auto& [key, value] : matrix.items()) out[key] = value;
  out["zeta_check"] = zeta_json(zeta_check(curve, S, jobs));
  return dump(out);
}

std::string coleman(const std::string& curve_text, std::optional<int> precision,
                    const std::vector<Integer>& omega, const std::optional<IntPair>& point,
                    bool at_infinity, int length, const std::optional<std::string>& lambda_text) {
  auto curve = curve_from(curve_text, precision);
  if (length < 1) fail(ErrorKind::InvalidInput, "length must be positive");
  std::optional<Rational> lambda;
  if (lambda_text) lambda = parse_rational(*lambda_text);
  auto S = frobenius_matrix(curve);
  auto z = pick_point(curve, point, at_infinity);

  int g = curve.genus();
  auto ctx = curve.context()->with_precision(S.v_precision);
  std::vector<PadicNumber> coords(2 * g, PadicNumber(ctx));
  if (omega.empty()) {
    coords[0] = PadicNumber(ctx, Integer(1));
  } else {
    if (omega.size() != static_cast<size_t>(g) && omega.size() != static_cast<size_t>(2 * g)) {
      fail(ErrorKind::InvalidInput, "omega needs " + std::to_string(g) + " or " +
                                        std::to_string(2 * g) + " coordinates");
    }
    for (size_t i = 0; i < omega.size(); ++i) coords[i] = PadicNumber(ctx, omega[i]);
  }

  auto seq = coleman_sequence(S, CohomologyClass(g, coords), z, length);
  std::optional<UnramifiedVerdict> verdict;
  if (lambda) verdict = unramified_test(curve, S, z, *lambda, length);
  return dump(coleman_json(seq, lambda, verdict, seq.nseq.precision));
}

std::string stoll(const std::string& curve_text, std::optional<int> precision,
                  const std::vector<std::vector<Integer>>& basis) {
  auto curve = curve_from(curve_text, precision);
  if (basis.empty()) fail(ErrorKind::InvalidInput, "stoll needs at least one basis polynomial");
  auto F = FiniteField::get(curve.p(), 1);
  std::vector<DifferentialModP> ws;
  for (const auto& coeffs : basis) {
    FqPoly h;
    for (const auto& c : coeffs) h.push_back(F->from_int(mod(c, Integer(curve.p())).get_si()));
    fq_trim(h);
    if (fq_degree(h) > curve.genus() - 1) {
      fail(ErrorKind::InvalidInput, "basis polynomial has degree above g-1");
    }
    ws.push_back(DifferentialModP{F, curve.genus(), h});
  }
  return dump(stoll_json(stoll_vanishing_sum(curve, ws)));
}

std::string bound_report(const std::string& kind, int g, long r, long p,
                         const Integer& residue_points) {
  BoundReport rep;
  if (kind == "mm") {
    rep = buium_mm_report(g, p);
  } else if (kind == "ml-red") {
    rep = mordell_lang_reduction_report(g, r, p);
  } else if (kind == "ml-points") {
    rep = mordell_lang_point_report(g, r, p);
  } else if (kind == "chabauty") {
    rep = coleman_chabauty_report(residue_points, g);
  } else {
    fail(ErrorKind::InvalidInput, "unknown bound kind '" + kind + "'");
  }
  return dump(bound_json(rep));
}

IntPair to_pair(const WittPair<Integer>& w) { return {w.a0, w.a1}; }
WittPair<Integer> from_pair(const IntPair& w) { return {w.first, w.second}; }

}  // namespace

PYBIND11_MODULE(_bcml, m) {
  m.doc() = "Native core of the bcml package";

  g_error_type = PyErr_NewException("_bcml.BcmlError", PyExc_Exception, nullptr);
  m.add_object("BcmlError", py::handle(g_error_type));
  py::register_exception_translator([](std::exception_ptr ep) {
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const bcml::Error& e) {
      py::tuple args = py::make_tuple(std::string(bcml::to_string(e.kind())), e.what(),
                                      bcml::exit_code(e.kind()));
      PyErr_SetObject(g_error_type, args.ptr());
    }
  });

  m.attr("__version__") = "0.1.0";

  m.def("delta", [](long p, const Integer& n) { return delta_std(p, n); }, py::arg("p"),
        py::arg("n"), "(n - n^p) / p");
  m.def("cp", [](long p, const Integer& x, const Integer& y) { return cp_evaluate(p, x, y); },
        py::arg("p"), py::arg("x"), py::arg("y"), "(x^p + y^p - (x + y)^p) / p");
  m.def("witt_add",
        [](long p, const IntPair& u, const IntPair& v) {
          return to_pair(witt_add(p, from_pair(u), from_pair(v)));
        },
        py::arg("p"), py::arg("u"), py::arg("v"));
  m.def("witt_mul",
        [](long p, const IntPair& u, const IntPair& v) {
          return to_pair(witt_mul(p, from_pair(u), from_pair(v)));
        },
        py::arg("p"), py::arg("u"), py::arg("v"));
  m.def("ghost", [](long p, const IntPair& u) { return to_pair(ghost(p, from_pair(u))); },
        py::arg("p"), py::arg("u"));

  m.def("buium_mm_bound", &buium_mm_bound, py::arg("g"), py::arg("p"));
  m.def("mordell_lang_reduction_bound", &mordell_lang_reduction_bound, py::arg("g"),
        py::arg("r"), py::arg("p"));
  m.def("mordell_lang_point_bound", &mordell_lang_point_bound, py::arg("g"), py::arg("r"),
        py::arg("p"));
  m.def("coleman_chabauty_bound", &coleman_chabauty_bound, py::arg("residue_points"),
        py::arg("g"));
  m.def("bound_report", &bound_report, py::arg("kind"), py::arg("g"), py::arg("r") = 0,
        py::arg("p") = 0, py::arg("residue_points") = Integer(0));

  m.def("frobenius", &frobenius, py::arg("curve"), py::arg("precision") = std::nullopt,
        py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("coleman", &coleman, py::arg("curve"), py::arg("precision") = std::nullopt,
        py::arg("omega") = std::vector<Integer>{}, py::arg("point") = std::nullopt,
        py::arg("at_infinity") = false, py::arg("length") = 5,
        py::arg("lam") = std::nullopt, py::call_guard<py::gil_scoped_release>());
  m.def("stoll", &stoll, py::arg("curve"), py::arg("precision") = std::nullopt,
        py::arg("basis"), py::call_guard<py::gil_scoped_release>());
}
