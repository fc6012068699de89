#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "ggexp/cli.hpp"
#include "ggexp/errors.hpp"
#include "ggexp/expansion.hpp"
#include "ggexp/inequalities.hpp"
#include "ggexp/io.hpp"
#include "ggexp/quadrature.hpp"
#include "ggexp/special_poly.hpp"
#include "ggexp/verify.hpp"

namespace py = pybind11;
using namespace ggexp;

namespace {

// Library loops may call the function from worker threads, so the GIL is
// taken per call and the Python object is released under the GIL.
std::function<double(double)> wrap_callable(const py::function& f) {
  std::shared_ptr<py::function> held(new py::function(f), [](py::function* p) {
    py::gil_scoped_acquire gil;
    delete p;
  });
  return [held](double t) {
    py::gil_scoped_acquire gil;
    try {
      return (*held)(t).cast<double>();
    } catch (py::error_already_set& e) {
      throw EvaluationError(std::string("python callable raised: ") + e.what(), t);
    } catch (const py::cast_error&) {
      throw EvaluationError("python callable must return a float", t);
    }
  };
}

TestFunction make_function(const BasisParams& bp, const py::object& f, std::optional<int> degree_bound) {
  if (py::isinstance<CoefficientVector>(f)) return TestFunction::polynomial(f.cast<CoefficientVector>());
  if (py::isinstance<py::function>(f)) return TestFunction::callable(wrap_callable(f.cast<py::function>()), degree_bound);
  return TestFunction::polynomial(CoefficientVector(bp, f.cast<std::vector<double>>()));
}

py::object json_to_py(const Json& j) { return py::module_::import("json").attr("loads")(dump_json(j)); }

Exponents exponents(double primary, std::optional<double> secondary) { return {primary, secondary}; }

}  // namespace

PYBIND11_MODULE(_ggexp, m) {
  m.doc() = "Generalized Gegenbauer expansions and coefficient inequality checks";

  auto base = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);
  (void)base;

  py::class_<BasisParams>(m, "BasisParams")
      .def(py::init<double, double>(), py::arg("lam"), py::arg("mu"))
      .def_property_readonly("lam", &BasisParams::lambda)
      .def_property_readonly("mu", &BasisParams::mu)
      .def_property_readonly("sigma", &BasisParams::sigma)
      .def("__eq__", [](const BasisParams& a, const BasisParams& b) { return a == b; })
      .def("__repr__", [](const BasisParams& bp) {
        return "BasisParams(lam=" + format_number(bp.lambda()) + ", mu=" + format_number(bp.mu()) + ")";
      });

  py::class_<CoefficientVector>(m, "CoefficientVector")
      .def(py::init<const BasisParams&, std::vector<double>>(), py::arg("params"), py::arg("coeffs"))
      .def_readonly("params", &CoefficientVector::params)
      .def_readonly("coeffs", &CoefficientVector::coeffs)
      .def_property_readonly("degree", &CoefficientVector::degree)
      .def("__len__", &CoefficientVector::size)
      .def("to_json", [](const CoefficientVector& cv) { return json_to_py(to_json(cv)); });

  m.def("gen_gegenbauer_eval", &gen_gegenbauer_eval, py::arg("params"), py::arg("n"), py::arg("t"));
  m.def("orthonormal_gg_eval", &orthonormal_gg_eval, py::arg("params"), py::arg("n"), py::arg("t"));
  m.def("orthonormal_coefficient", &orthonormal_coefficient, py::arg("params"), py::arg("n"));
  m.def("weight_total_mass", &weight_total_mass, py::arg("params"));

  m.def(
      "gen_gegenbauer_rule",
      [](const BasisParams& bp, int n) {
        const auto rule = gen_gegenbauer_rule(bp, n);
        return py::make_tuple(rule->nodes, rule->weights, rule->exactness_degree);
      },
      py::arg("params"), py::arg("points"), "Returns (nodes, weights, exactness_degree).");
  m.def(
      "certify_rule", [](const BasisParams& bp, int n) { return certify_exactness(*gen_gegenbauer_rule(bp, n)); },
      py::arg("params"), py::arg("points"));

  m.def(
      "forward_transform",
      [](const BasisParams& bp, const py::object& f, int degree, std::optional<int> degree_bound) {
        const TestFunction fn = make_function(bp, f, degree_bound);
        py::gil_scoped_release release;
        return forward_transform(bp, fn, degree);
      },
      py::arg("params"), py::arg("f"), py::arg("degree"), py::arg("degree_bound") = py::none(),
      "f is a CoefficientVector, a coefficient list or a float -> float callable.");
  m.def("partial_sum_eval", &partial_sum_eval, py::arg("cv"), py::arg("t"));
  m.def(
      "lp_norm",
      [](const BasisParams& bp, const py::object& f, double p, std::optional<int> degree_bound) {
        const TestFunction fn = make_function(bp, f, degree_bound);
        py::gil_scoped_release release;
        return lp_norm(bp, fn, p);
      },
      py::arg("params"), py::arg("f"), py::arg("p"), py::arg("degree_bound") = py::none());
  m.def("sup_norm_estimate", &sup_norm_estimate, py::arg("params"), py::arg("n"));
  m.def("real_zeros", &real_zeros, py::arg("cv"));

  m.def("conjugate_exponent", &conjugate_exponent, py::arg("p"));
  m.def("hl_functional", &hl_functional, py::arg("params"), py::arg("p"), py::arg("cv"));
  m.def("hy_functional", &hy_functional, py::arg("params"), py::arg("p"), py::arg("cv"));
  m.def("unified_functional", &unified_functional, py::arg("params"), py::arg("p"), py::arg("s"), py::arg("cv"));

  m.def(
      "forward_inequality_scan",
      [](const std::string& theorem, const BasisParams& bp, double p, std::optional<double> s,
         const std::string& family, int degree_cap, int trials, std::uint64_t seed) {
        const TheoremId id = theorem == "HL" ? TheoremId::kHardyLittlewood
                             : theorem == "HY" ? TheoremId::kHausdorffYoung
                             : theorem == "UNIFIED" ? TheoremId::kUnified
                                                    : throw ArgumentError("theorem must be HL, HY or UNIFIED");
        ScanOptions o;
        o.family = parse_family(family);
        o.degree_cap = degree_cap;
        o.trials = trials;
        o.seed = seed;
        InequalityReport r;
        {
          py::gil_scoped_release release;
          r = forward_inequality_scan(id, bp, exponents(p, s), o);
        }
        return json_to_py(to_json(r));
      },
      py::arg("theorem"), py::arg("params"), py::arg("p"), py::arg("s") = py::none(), py::arg("family") = "mixed",
      py::arg("degree_cap") = 64, py::arg("trials") = 100, py::arg("seed") = 0,
      "Returns the InequalityReport as a dict.");

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "ggexp");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int status = 0;
        {
          py::gil_scoped_release release;
          status = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line in-process; returns (status, stdout, stderr).");
}
