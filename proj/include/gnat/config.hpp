#pragma once
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnat/frame_models.hpp"
#include "gnat/gnatural.hpp"
#include "gnat/scalar.hpp"
#include "gnat/t1m_biharmonic.hpp"
#include "gnat/tm_biharmonic.hpp"

namespace gnat {

using json = nlohmann::json;

// Reads and parses a JSON file; syntax errors become ParameterError with line and column.
json load_json_file(const std::string& path);
json parse_json_text(const std::string& text, const std::string& origin = "<input>");

// ---- metrics on TM ---------------------------------------------------------------------------

struct MetricConfig {
  std::string name;
  GNaturalMetric metric;
  std::optional<LambdaFamily> lambda;  // set for {"family": "lambda", ...}
};

// {"family":"sasaki"} | {"family":"kaluza_klein","alpha1":E,"alpha3":E,"beta1":E}
// | {"family":"kaluza_klein_type","alpha1":E,"alpha3":E,"beta1":E,"beta3":E}
// | {"family":"lambda","lambda":E,"K":k,"eta":h,"m":m}
// | {"alpha1":E,...,"beta3":E} (missing functions are 0; optional "family" tag is checked).
MetricConfig metric_from_json(const json& j);

// A list of named metrics: {"corpus":[{"name":..,"metric":{..}}, ...]} or a single metric.
std::vector<MetricConfig> metric_corpus_from_json(const json& j);

// ---- exact numbers ----------------------------------------------------------------------------

// A number read from JSON, kept both as a double and as an exact rational. JSON numbers are read
// through their shortest decimal representation (0.1 -> 1/10); strings "p/q" are exact.
struct ExactNumber {
  double value = 0.0;
  Rational exact{0};
};
ExactNumber number_from_json(const json& j);
ExactNumber number_from_string(const std::string& s);

template <class T>
T as_scalar(const ExactNumber& x);
template <>
inline double as_scalar<double>(const ExactNumber& x) {
  return x.value;
}
template <>
inline Rational as_scalar<Rational>(const ExactNumber& x) {
  return x.exact;
}

// ---- frame models -----------------------------------------------------------------------------

struct ModelSpec {
  std::string builtin;  // sol3 | hyperbolic | su2 | custom
  int n = 3;
  ExactNumber k{1.0, Rational(1)};
  std::vector<ExactNumber> lambdas;  // su2
  int dim = 0;                       // custom
  struct Bracket {
    int i = 0, j = 0;  // 0-based
    std::vector<ExactNumber> coeffs;
  };
  std::vector<Bracket> brackets;
};

// {"builtin":"sol3"} | {"builtin":"hyperbolic","n":3,"k":1.0} | {"builtin":"su2","lambdas":[l1,l2,l3]}
// | {"custom":{"dim":m,"brackets":[[i,j,[c_1..c_m]], ...]}} with 1-based i, j.
ModelSpec model_spec_from_json(const json& j);
json model_spec_to_json(const ModelSpec& s);

template <class T>
FrameModel<T> build_from_spec(const ModelSpec& s) {
  if (s.builtin == "sol3") return sol3<T>();
  if (s.builtin == "hyperbolic") return hyperbolic<T>(s.n, as_scalar<T>(s.k));
  if (s.builtin == "su2") {
    if (s.lambdas.size() != 3) throw ModelError("su2 model needs three lambdas");
    return su2<T>(as_scalar<T>(s.lambdas[0]), as_scalar<T>(s.lambdas[1]), as_scalar<T>(s.lambdas[2]));
  }
  if (s.builtin == "custom") {
    const int m = s.dim;
    std::vector<T> c(static_cast<std::size_t>(m) * m * m, T(0));
    for (const auto& br : s.brackets) {
      FVec<T> v;
      for (const auto& x : br.coeffs) v.push_back(as_scalar<T>(x));
      set_bracket<T>(c, m, br.i, br.j, v);
    }
    return build_model<T>(m, std::move(c), "custom");
  }
  throw ModelError("unknown model '" + s.builtin + "'");
}

// ---- unit bundle parameters and fields ---------------------------------------------------------

struct ParamsSpec {
  ExactNumber a{1.0, Rational(1)}, b, c, d;
};
ParamsSpec params_from_json(const json& j);  // {"a":..,"b":..,"c":..,"d":..}, missing entries: a=1, else 0
json params_to_json(const ParamsSpec& p);

template <class T>
UnitBundleParams<T> params_as(const ParamsSpec& p) {
  return {as_scalar<T>(p.a), as_scalar<T>(p.b), as_scalar<T>(p.c), as_scalar<T>(p.d)};
}

// {"coeffs":[..]} or a bare array.
std::vector<ExactNumber> field_from_json(const json& j);
// "0,0,1" or "e3" (basis vector of a model of dimension m).
std::vector<ExactNumber> field_from_string(const std::string& s, int m);

template <class T>
FVec<T> field_as(const std::vector<ExactNumber>& f) {
  FVec<T> v;
  for (const auto& x : f) v.push_back(as_scalar<T>(x));
  return v;
}

// ---- closed-form criteria ---------------------------------------------------------------------

// {"model":"sol3","field":"e2","params":{..}, "n":3, "k":1, "sigma":2, "lambda3":1, "evaluate":true}
CriteriaInput criteria_input_from_json(const json& j);

}  // namespace gnat
