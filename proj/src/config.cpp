#include "gnat/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gnat/errors.hpp"

namespace gnat {

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double get_double(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ParameterError(std::string("\"") + key + "\" must be a number");
  return j.at(key).get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ParameterError(std::string("\"") + key + "\" must be an integer");
  return j.at(key).get<int>();
}

SmoothFn get_fn(const json& j, const char* key, bool required) {
  if (!j.contains(key)) {
    if (required) throw ParameterError(std::string("metric: missing function \"") + key + "\"");
    return SmoothFn::constant(0.0);
  }
  return SmoothFn::from_json(j.at(key));
}

Rational rational_from_decimal(const std::string& text) {
  // [sign] digits [. digits] [e|E [sign] digits]
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
  std::string digits;
  long exp10 = 0;
  bool any = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    digits += text[i++];
    any = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      digits += text[i++];
      --exp10;
      any = true;
    }
  }
  if (!any) throw ParameterError("not a number: '" + text + "'");
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(text.substr(i), &used);
    } catch (const std::exception&) {
      throw ParameterError("not a number: '" + text + "'");
    }
    i += used;
    exp10 += e;
  }
  if (i != text.size()) throw ParameterError("not a number: '" + text + "'");
  if (std::labs(exp10) > 400) throw ParameterError("number out of range: '" + text + "'");
  // cpp_int reads a leading zero as an octal prefix
  const auto nz = digits.find_first_not_of('0');
  boost::multiprecision::cpp_int mant(nz == std::string::npos ? std::string("0") : digits.substr(nz));
  boost::multiprecision::cpp_int p10 = 1;
  for (long k = 0; k < std::labs(exp10); ++k) p10 *= 10;
  Rational r = exp10 >= 0 ? Rational(mant * p10) : Rational(mant, p10);
  return neg ? Rational(-r) : r;
}

}  // namespace

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(origin + ": malformed JSON at " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                         e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

// ---- metrics ----------------------------------------------------------------------------------

MetricConfig metric_from_json(const json& j) {
  if (!j.is_object()) throw ParameterError("metric must be a JSON object");
  if (j.contains("corpus")) throw ParameterError("expected a single metric, got a corpus");
  MetricConfig cfg;
  cfg.name = j.value("name", std::string());
  const std::string fam = j.value("family", std::string());
  std::vector<std::string> allowed{"name", "family"};
  if (fam == "kaluza_klein")
    allowed.insert(allowed.end(), {"alpha1", "alpha3", "beta1"});
  else if (fam == "kaluza_klein_type")
    allowed.insert(allowed.end(), {"alpha1", "alpha3", "beta1", "beta3"});
  else if (fam == "lambda")
    allowed.insert(allowed.end(), {"lambda", "K", "eta", "m"});
  else if (fam != "sasaki")
    allowed.insert(allowed.end(), {"alpha1", "alpha2", "alpha3", "beta1", "beta2", "beta3"});
  for (const auto& item : j.items())
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      throw ParameterError("unknown metric key \"" + item.key() + "\"" +
                           (fam.empty() ? std::string() : " for family '" + fam + "'"));
  if (fam == "sasaki") {
    cfg.metric = GNaturalMetric::sasaki();
  } else if (fam == "kaluza_klein") {
    cfg.metric =
        GNaturalMetric::kaluza_klein(get_fn(j, "alpha1", true), get_fn(j, "alpha3", true), get_fn(j, "beta1", true));
  } else if (fam == "kaluza_klein_type") {
    cfg.metric = GNaturalMetric::kaluza_klein_type(get_fn(j, "alpha1", true), get_fn(j, "alpha3", true),
                                                   get_fn(j, "beta1", true), get_fn(j, "beta3", true));
  } else if (fam == "lambda") {
    if (!j.contains("lambda")) throw ParameterError("lambda family: missing \"lambda\"");
    LambdaFamily lf = lambda_family_build(SmoothFn::from_json(j.at("lambda")), get_double(j, "K", 1.0),
                                          get_double(j, "eta", 1.0), get_int(j, "m", 2));
    cfg.metric = lf.metric;
    cfg.lambda = lf;
  } else {
    FamilyTag tag = FamilyTag::generic;
    if (!fam.empty()) {
      if (fam == "lambda_family")
        tag = FamilyTag::lambda_family;
      else if (fam == "generic")
        tag = FamilyTag::generic;
      else
        throw ParameterError("unknown metric family '" + fam + "'");
    }
    cfg.metric = GNaturalMetric::make(get_fn(j, "alpha1", false), get_fn(j, "alpha2", false),
                                      get_fn(j, "alpha3", false), get_fn(j, "beta1", false),
                                      get_fn(j, "beta2", false), get_fn(j, "beta3", false), tag);
  }
  return cfg;
}

std::vector<MetricConfig> metric_corpus_from_json(const json& j) {
  std::vector<MetricConfig> out;
  if (j.is_object() && j.contains("corpus")) {
    for (const auto& e : j.at("corpus")) {
      MetricConfig c = metric_from_json(e.contains("metric") ? e.at("metric") : e);
      if (e.contains("name")) c.name = e.at("name").get<std::string>();
      out.push_back(std::move(c));
    }
    if (out.empty()) throw ParameterError("metric corpus is empty");
  } else {
    out.push_back(metric_from_json(j));
  }
  return out;
}

// ---- exact numbers ----------------------------------------------------------------------------

ExactNumber number_from_string(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  ExactNumber x;
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const Rational num = rational_from_decimal(s.substr(0, slash));
    const Rational den = rational_from_decimal(s.substr(slash + 1));
    if (den == 0) throw ParameterError("zero denominator in '" + raw + "'");
    x.exact = num / den;
  } else {
    x.exact = rational_from_decimal(s);
  }
  x.value = to_double(x.exact);
  return x;
}

ExactNumber number_from_json(const json& j) {
  if (j.is_string()) return number_from_string(j.get<std::string>());
  if (j.is_number_integer()) {
    ExactNumber x;
    x.exact = Rational(j.get<long long>());
    x.value = to_double(x.exact);
    return x;
  }
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParameterError("number must be finite");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
    ExactNumber x;
    x.exact = rational_from_decimal(std::string(buf, res.ptr));
    x.value = v;
    return x;
  }
  throw ParameterError("expected a number or a \"p/q\" string");
}

// ---- models -----------------------------------------------------------------------------------

ModelSpec model_spec_from_json(const json& j) {
  if (!j.is_object()) throw ModelError("model must be a JSON object");
  ModelSpec s;
  if (j.contains("custom")) {
    const json& c = j.at("custom");
    s.builtin = "custom";
    s.dim = get_int(c, "dim", 0);
    if (s.dim < 1) throw ModelError("custom model: \"dim\" must be a positive integer");
    if (!c.contains("brackets") || !c.at("brackets").is_array())
      throw ModelError("custom model: \"brackets\" must be an array of [i, j, [coeffs]]");
    for (const auto& b : c.at("brackets")) {
      if (!b.is_array() || b.size() != 3 || !b[0].is_number_integer() || !b[1].is_number_integer() ||
          !b[2].is_array())
        throw ModelError("custom model: each bracket must be [i, j, [c_1, ..., c_m]] with 1-based i, j");
      ModelSpec::Bracket br;
      br.i = b[0].get<int>() - 1;
      br.j = b[1].get<int>() - 1;
      if (br.i < 0 || br.j < 0 || br.i >= s.dim || br.j >= s.dim || br.i == br.j)
        throw ModelError("custom model: bracket indices must be distinct and in 1..dim");
      if (static_cast<int>(b[2].size()) != s.dim)
        throw ModelError("custom model: bracket coefficient vectors must have length dim");
      for (const auto& x : b[2]) br.coeffs.push_back(number_from_json(x));
      s.brackets.push_back(std::move(br));
    }
    return s;
  }
  if (!j.contains("builtin")) throw ModelError("model needs \"builtin\" or \"custom\"");
  s.builtin = j.at("builtin").get<std::string>();
  if (s.builtin == "sol3") {
    s.dim = 3;
  } else if (s.builtin == "hyperbolic") {
    s.n = get_int(j, "n", 3);
    if (s.n < 2) throw ModelError("hyperbolic model: n must be >= 2");
    s.k = j.contains("k") ? number_from_json(j.at("k")) : number_from_string("1");
    s.dim = s.n;
  } else if (s.builtin == "su2") {
    if (!j.contains("lambdas") || !j.at("lambdas").is_array() || j.at("lambdas").size() != 3)
      throw ModelError("su2 model needs \"lambdas\": [l1, l2, l3]");
    for (const auto& x : j.at("lambdas")) s.lambdas.push_back(number_from_json(x));
    s.dim = 3;
  } else {
    throw ModelError("unknown builtin model '" + s.builtin + "' (expected sol3, hyperbolic, su2)");
  }
  return s;
}

json model_spec_to_json(const ModelSpec& s) {
  if (s.builtin == "sol3") return json{{"builtin", "sol3"}};
  if (s.builtin == "hyperbolic") return json{{"builtin", "hyperbolic"}, {"n", s.n}, {"k", s.k.exact.str()}};
  if (s.builtin == "su2") {
    json l = json::array();
    for (const auto& x : s.lambdas) l.push_back(x.exact.str());
    return json{{"builtin", "su2"}, {"lambdas", l}};
  }
  json br = json::array();
  for (const auto& b : s.brackets) {
    json c = json::array();
    for (const auto& x : b.coeffs) c.push_back(x.exact.str());
    br.push_back(json::array({b.i + 1, b.j + 1, c}));
  }
  return json{{"custom", {{"dim", s.dim}, {"brackets", br}}}};
}

// ---- params and fields ------------------------------------------------------------------------

ParamsSpec params_from_json(const json& j) {
  if (!j.is_object()) throw ParameterError("params must be an object {\"a\",\"b\",\"c\",\"d\"}");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "a" && it.key() != "b" && it.key() != "c" && it.key() != "d")
      throw ParameterError("params: unknown key '" + it.key() + "'");
  ParamsSpec p;
  if (j.contains("a")) p.a = number_from_json(j.at("a"));
  if (j.contains("b")) p.b = number_from_json(j.at("b"));
  if (j.contains("c")) p.c = number_from_json(j.at("c"));
  if (j.contains("d")) p.d = number_from_json(j.at("d"));
  return p;
}

json params_to_json(const ParamsSpec& p) {
  return json{{"a", p.a.exact.str()}, {"b", p.b.exact.str()}, {"c", p.c.exact.str()}, {"d", p.d.exact.str()}};
}

std::vector<ExactNumber> field_from_json(const json& j) {
  const json& arr = j.is_object() ? j.at("coeffs") : j;
  if (!arr.is_array() || arr.empty()) throw ParameterError("field must be {\"coeffs\": [..]}");
  std::vector<ExactNumber> out;
  for (const auto& x : arr) out.push_back(number_from_json(x));
  return out;
}

std::vector<ExactNumber> field_from_string(const std::string& s, int m) {
  if (s.size() >= 2 && s[0] == 'e' && std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(c); })) {
    const int i = std::stoi(s.substr(1));
    if (i < 1 || i > m) throw DimensionError("field " + s + " does not exist in dimension " + std::to_string(m));
    std::vector<ExactNumber> out(static_cast<std::size_t>(m), number_from_string("0"));
    out[i - 1] = number_from_string("1");
    return out;
  }
  std::vector<ExactNumber> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number_from_string(item));
  if (out.empty()) throw ParameterError("empty field");
  return out;
}

CriteriaInput criteria_input_from_json(const json& j) {
  CriteriaInput in;
  if (!j.contains("model")) throw ParameterError("criteria config needs \"model\"");
  in.model = j.at("model").get<std::string>();
  in.field = j.value("field", std::string(in.model == "hyperbolic" ? "V" : "e1"));
  if (j.contains("params")) {
    const ParamsSpec p = params_from_json(j.at("params"));
    in.params = params_as<double>(p);
  }
  in.n = get_int(j, "n", 3);
  in.k = get_double(j, "k", 1.0);
  in.sigma = get_double(j, "sigma", 2.0);
  in.lambda3 = get_double(j, "lambda3", 1.0);
  in.evaluate = j.value("evaluate", true);
  return in;
}

}  // namespace gnat
