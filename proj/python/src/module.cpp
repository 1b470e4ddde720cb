// Python bindings: a thin layer over the core library. Structured inputs are passed as JSON
// text (the same documents the command-line tool reads), results come back as dicts.
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "gnat/config.hpp"
#include "gnat/errors.hpp"
#include "gnat/flat_oracle.hpp"
#include "gnat/frame_models.hpp"
#include "gnat/gnatural.hpp"
#include "gnat/t1m_biharmonic.hpp"
#include "gnat/tm_biharmonic.hpp"

namespace py = pybind11;
using namespace gnat;

namespace {

GNaturalMetric metric_of(const std::string& text) {
  return metric_from_json(parse_json_text(text, "metric")).metric;
}

ParallelFieldSpec field_spec(double rho, int m) {
  ParallelFieldSpec s;
  s.rho = rho;
  s.m = m;
  validate(s);
  return s;
}

py::dict bitension_dict(const BitensionResult& b) {
  py::dict d;
  d["tau_h_factor"] = b.c_h;
  d["tau_v_factor"] = b.c_v;
  d["tau2h_factor"] = b.tau2h_factor;
  d["tau2v_factor"] = b.tau2v_factor;
  d["classification"] = std::string(to_string(b.classification));
  return d;
}

std::tuple<int, std::string, std::string> run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"gnat"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  }
  return {code, out.str(), err.str()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Harmonicity and biharmonicity of vector fields for g-natural metrics";
  m.attr("__version__") = GNAT_VERSION;

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  m.def("run", &run, py::arg("args"),
        "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");

  m.def(
      "connection_coeffs",
      [](const std::string& metric, double rho) {
        py::dict d;
        for (const auto& [name, value] : named_coeffs(connection_coeffs(metric_of(metric), rho)))
          d[py::str(name)] = value;
        return d;
      },
      py::arg("metric_json"), py::arg("rho"), "The 29 connection scalars A1..F3 at t = rho.");

  m.def(
      "bitension_parallel",
      [](const std::string& metric, double rho, int dim) {
        return bitension_dict(bitension_parallel(metric_of(metric), field_spec(rho, dim)));
      },
      py::arg("metric_json"), py::arg("rho"), py::arg("dim") = 2,
      "Tension and bitension factors of a parallel field with |V|^2 = rho.");

  m.def(
      "fd_compare",
      [](const std::string& metric, double rho, int dim) {
        FlatChart chart;
        chart.m = dim;
        chart.G = metric_of(metric);
        const CompareReport r = compare(chart, field_spec(rho, dim));
        py::dict d;
        d["pass"] = r.pass;
        d["tau2h_closed"] = r.tau2_h.closed_factor;
        d["tau2h_fd"] = r.tau2_h.fd_factor;
        d["tau2v_closed"] = r.tau2_v.closed_factor;
        d["tau2v_fd"] = r.tau2_v.fd_factor;
        return d;
      },
      py::arg("metric_json"), py::arg("rho"), py::arg("dim") = 2,
      "Closed-form bitension against finite differences on the flat chart.");

  m.def(
      "classify_unit",
      [](const std::string& model, const std::string& field, const std::string& params) {
        const ModelSpec spec = model_spec_from_json(parse_json_text(model, "model"));
        const FrameModel<Rational> M = build_from_spec<Rational>(spec);
        const FVec<Rational> U = field_as<Rational>(field_from_string(field, M.m));
        const UnitBundleParams<Rational> p = params_as<Rational>(params_from_json(parse_json_text(params, "params")));
        return to_string(classify_unit(M, U, p).classification);
      },
      py::arg("model_json"), py::arg("field"), py::arg("params_json") = "{}",
      "Classification of a unit field as a map into the unit tangent bundle (exact arithmetic).");
}
