#include "cli.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gnat/config.hpp"
#include "gnat/discrepancy_reports.hpp"
#include "gnat/errors.hpp"
#include "gnat/flat_oracle.hpp"
#include "gnat/parallel.hpp"
#include "gnat/report.hpp"
#include "gnat/t1m_biharmonic.hpp"
#include "gnat/tm_biharmonic.hpp"

#ifndef GNAT_VERSION
#define GNAT_VERSION "0.0.0"
#endif

namespace gnat {

namespace {

struct Globals {
  std::string format = "json";
  double tolerance = kDefaultTolerance;
  unsigned jobs = 0;
  std::uint64_t seed = 0;
};

// Everything a command needs to emit its report.
struct Outcome {
  json inputs = json::object();
  json results = json::object();
  json classification;  // null when not applicable
  json residuals;       // null when not applicable
  json warnings = json::array();
};

// ---- JSON helpers ------------------------------------------------------------------------------

template <class T>
json fvec_json(const FVec<T>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(jnum(to_double(x)));
  return a;
}

template <class T>
json fvec_exact_json(const FVec<T>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(scalar_to_string(x));
  return a;
}

// Adds key (floats) and, in exact arithmetic, key_exact (rational strings).
template <class T>
void put_vec(json& o, const std::string& key, const FVec<T>& v) {
  o[key] = fvec_json(v);
  if constexpr (std::is_same_v<T, Rational>) o[key + "_exact"] = fvec_exact_json(v);
}
template <class T>
void put_scalar(json& o, const std::string& key, const T& x) {
  o[key] = jnum(to_double(x));
  if constexpr (std::is_same_v<T, Rational>) o[key + "_exact"] = scalar_to_string(x);
}

json coeffs_json(const ConnectionCoeffs& c) {
  json o = json::object();
  for (const auto& [name, value] : named_coeffs(c)) o[name] = jnum(value);
  return o;
}

json bitension_json(const BitensionResult& b) {
  return json{{"c_h", jnum(b.c_h)},
              {"c_v", jnum(b.c_v)},
              {"tau2h_factor", jnum(b.tau2h_factor)},
              {"tau2v_factor", jnum(b.tau2v_factor)},
              {"scale_h", jnum(b.scale_h)},
              {"scale_v", jnum(b.scale_v)},
              {"classification", to_string(b.classification)}};
}

json input_file(const std::string& path) {
  json j = load_json_file(path);
  return j;
}

// ---- table rendering ---------------------------------------------------------------------------

std::string scalar_text(const json& v) {
  if (v.is_number_float()) return format_float(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + scalar_text(j[i]);
    out.push_back({prefix, s + "]"});
  } else {
    out.push_back({prefix, scalar_text(j)});
  }
}

// Arrays of flat objects (rows) are rendered as columns; everything else as key/value lines.
std::string render_table(const json& report) {
  std::ostringstream os;
  std::vector<std::pair<std::string, std::string>> kv;
  json rest = report;
  std::vector<std::pair<std::string, json>> tables;
  if (rest.contains("results") && rest["results"].is_object()) {
    for (auto it = rest["results"].begin(); it != rest["results"].end(); ++it) {
      const json& v = it.value();
      if (v.is_array() && !v.empty() && v.front().is_object()) tables.push_back({it.key(), v});
    }
    for (const auto& t : tables) rest["results"].erase(t.first);
  }
  flatten(rest, "", kv);
  std::size_t w = 0;
  for (const auto& p : kv) w = std::max(w, p.first.size());
  for (const auto& p : kv) os << std::left << std::setw(static_cast<int>(w)) << p.first << "  " << p.second << "\n";
  for (const auto& [name, rows] : tables) {
    os << "\n" << name << ":\n";
    std::vector<std::string> cols;
    std::vector<std::vector<std::pair<std::string, std::string>>> flat;
    for (const auto& r : rows) {
      std::vector<std::pair<std::string, std::string>> f;
      flatten(r, "", f);
      for (const auto& p : f)
        if (std::find(cols.begin(), cols.end(), p.first) == cols.end()) cols.push_back(p.first);
      flat.push_back(f);
    }
    std::vector<std::size_t> widths;
    for (const auto& c : cols) widths.push_back(c.size());
    std::vector<std::vector<std::string>> cells;
    for (const auto& f : flat) {
      std::vector<std::string> row(cols.size());
      for (const auto& p : f) {
        const auto k = static_cast<std::size_t>(std::find(cols.begin(), cols.end(), p.first) - cols.begin());
        row[k] = p.second;
        widths[k] = std::max(widths[k], p.second.size());
      }
      cells.push_back(row);
    }
    for (std::size_t k = 0; k < cols.size(); ++k)
      os << (k ? "  " : "") << std::left << std::setw(static_cast<int>(widths[k])) << cols[k];
    os << "\n";
    for (const auto& row : cells) {
      for (std::size_t k = 0; k < row.size(); ++k)
        os << (k ? "  " : "") << std::left << std::setw(static_cast<int>(widths[k])) << row[k];
      os << "\n";
    }
  }
  return os.str();
}

// ---- command implementations -------------------------------------------------------------------

struct MetricOpts {
  std::string metric;
  double rho = 1.0;
  int dim = 2;
};

Outcome cmd_classify(const Globals&, const std::string& metric_path, double t0, double t1, int samples) {
  Outcome o;
  const json mj = input_file(metric_path);
  o.inputs = json{{"metric", mj}, {"interval", json::array({jnum(t0), jnum(t1)})}, {"samples", samples}};
  if (!(t0 >= 0.0 && t0 < t1)) throw ParameterError("interval must satisfy 0 <= t_min < t_max");
  if (samples < 2) throw ParameterError("samples must be >= 2");
  const std::vector<MetricConfig> metrics = metric_corpus_from_json(mj);
  json entries = json::array();
  bool nondegenerate = true, riemannian = true;
  for (const MetricConfig& mc : metrics) {
    const MetricClassification c = classify(mc.metric, t0, t1, samples);
    json viol = json::array();
    for (const auto& v : c.violations)
      viol.push_back(json{{"t", jnum(v.t)}, {"quantity", v.quantity}, {"value", jnum(v.value)}});
    nondegenerate = nondegenerate && c.nondegenerate_on_grid == CertStatus::verified;
    riemannian = riemannian && c.riemannian_on_grid == CertStatus::verified;
    entries.push_back(json{{"name", mc.name},
                           {"family", to_string(infer_family(mc.metric))},
                           {"nondegenerate", to_string(c.nondegenerate_on_grid)},
                           {"riemannian", to_string(c.riemannian_on_grid)},
                           {"violations", viol}});
  }
  const auto status = [](bool ok) { return to_string(ok ? CertStatus::verified : CertStatus::violated); };
  if (mj.contains("corpus")) {
    o.results = json{{"metrics", entries}};
  } else {
    o.results = entries[0];
    o.results.erase("name");
  }
  o.classification = json{{"nondegenerate", status(nondegenerate)}, {"riemannian", status(riemannian)}};
  return o;
}

Outcome cmd_tm_bitension(const Globals& g, const MetricOpts& mo, bool with_coeffs) {
  Outcome o;
  const json mj = input_file(mo.metric);
  o.inputs = json{{"metric", mj}, {"rho", jnum(mo.rho)}, {"dim", mo.dim}};
  const MetricConfig mc = metric_from_json(mj);
  const ParallelFieldSpec spec{mo.dim, mo.rho};
  const BitensionResult b = bitension_parallel(mc.metric, spec, g.tolerance);
  o.results = bitension_json(b);
  if (with_coeffs) o.results["coefficients"] = coeffs_json(connection_coeffs(mc.metric, mo.rho));
  o.classification = to_string(b.classification);
  o.residuals = json{{"tau2h_factor", jnum(b.tau2h_factor)}, {"tau2v_factor", jnum(b.tau2v_factor)}};
  return o;
}

Outcome cmd_tm_classify_parallel(const Globals& g, const MetricOpts& mo) {
  Outcome o;
  const json mj = input_file(mo.metric);
  o.inputs = json{{"metric", mj}, {"rho", jnum(mo.rho)}, {"dim", mo.dim}};
  const MetricConfig mc = metric_from_json(mj);
  const ParallelClassReport r = classify_parallel(mc.metric, {mo.dim, mo.rho}, g.tolerance);
  o.results = json{{"bitension", bitension_json(r.bitension)}, {"kk_type_applicable", r.kk_type_applicable}};
  if (r.kk_type_applicable) {
    o.results["stated_criterion"] = json{{"s_prime", jnum(r.s_prime)},
                                         {"lhs", jnum(r.stated_lhs)},
                                         {"classification", to_string(r.stated_classification)},
                                         {"agrees_with_bitension", r.stated_criterion_agrees}};
    if (!r.stated_criterion_agrees)
      o.warnings.push_back("the stated Kaluza-Klein-type criterion disagrees with the full bitension");
  }
  o.results["classification"] = to_string(r.bitension.classification);
  o.classification = to_string(r.bitension.classification);
  return o;
}

Outcome cmd_tm_scan(const Globals& g, const std::string& metric, int dim, double lo, double hi, int steps,
                    bool with_coeffs) {
  Outcome o;
  const json mj = input_file(metric);
  o.inputs = json{{"metric", mj}, {"dim", dim}, {"rho_min", jnum(lo)}, {"rho_max", jnum(hi)}, {"steps", steps}};
  if (!(lo < hi)) throw ParameterError("scan requires rho_min < rho_max");
  if (steps < 1) throw ParameterError("scan requires steps >= 1");
  const MetricConfig mc = metric_from_json(mj);
  const ScanResult s = scan_parallel(mc.metric, dim, lo, hi, steps, g.jobs, g.tolerance);
  json rows = json::array();
  for (const auto& r : s.rows) {
    json row{{"rho", jnum(r.rho)}, {"ok", r.ok}};
    if (r.ok) {
      row["c_h"] = jnum(r.bitension.c_h);
      row["c_v"] = jnum(r.bitension.c_v);
      row["tau2h_factor"] = jnum(r.bitension.tau2h_factor);
      row["tau2v_factor"] = jnum(r.bitension.tau2v_factor);
      row["classification"] = to_string(r.bitension.classification);
      row["g_residual"] = jnum(r.g_residual.residual);
      row["is_g_biharmonic"] = r.g_residual.is_g_biharmonic;
      if (r.kk_lhs) row["kk_type_lhs"] = jnum(*r.kk_lhs);
      if (with_coeffs) row["coefficients"] = coeffs_json(connection_coeffs(mc.metric, r.rho));
    } else {
      row["warning"] = r.warning;
      o.warnings.push_back("rho=" + format_float(r.rho) + ": " + r.warning);
    }
    rows.push_back(row);
  }
  json roots = json::array();
  for (const auto& r : s.roots)
    roots.push_back(json{{"rho", jnum(r.rho)}, {"lo", jnum(r.lo)}, {"hi", jnum(r.hi)}, {"value", jnum(r.value)}});
  o.results = json{{"rows", rows}, {"roots", roots}, {"root_function", s.root_function},
                   {"root_function_identically_zero", s.lhs_identically_zero}};
  return o;
}

Outcome cmd_tm_oracle(const Globals& g, const std::string& metric, const std::vector<int>& dims,
                      const std::vector<double>& rhos, double h, int richardson, double rel_tol) {
  Outcome o;
  const json mj = input_file(metric);
  json dj = dims, rj = json::array();
  for (double r : rhos) rj.push_back(jnum(r));
  o.inputs = json{{"metric", mj},    {"dims", dj},       {"rhos", rj}, {"h", jnum(h)}, {"richardson", richardson},
                  {"rel_tol", jnum(rel_tol)}};
  const std::vector<MetricConfig> corpus = metric_corpus_from_json(mj);
  struct Job {
    std::size_t metric;
    int m;
    double rho;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (int m : dims)
      for (double r : rhos) jobs.push_back({i, m, r});
  std::vector<json> slots(jobs.size());
  parallel_for(jobs.size(), g.jobs, [&](std::size_t k) {
    const Job& jb = jobs[k];
    const MetricConfig& mc = corpus[jb.metric];
    const ParallelFieldSpec spec{jb.m, jb.rho};
    json row{{"metric", mc.name.empty() ? std::to_string(jb.metric) : mc.name}, {"m", jb.m}, {"rho", jnum(jb.rho)}};
    try {
      FDConfig cfg;
      cfg.h = h;
      cfg.richardson_levels = richardson;
      const CompareReport cr = compare(FlatChart{jb.m, mc.metric}, spec, cfg, rel_tol);
      auto comp = [](const ComponentComparison& c) {
        return json{{"closed", jnum(c.closed_factor)},
                    {"fd", jnum(c.fd_factor)},
                    {"abs_error", jnum(c.abs_error)},
                    {"rel_error", jnum(c.rel_error)},
                    {"absolute_mode", c.absolute_mode},
                    {"pass", c.pass}};
      };
      row["fd_tension_h"] = comp(cr.tension_h);
      row["fd_tension_v"] = comp(cr.tension_v);
      row["fd_tau2h"] = comp(cr.tau2_h);
      row["fd_tau2v"] = comp(cr.tau2_v);
      row["fd_pass"] = cr.pass;
      json w = json::array();
      for (const auto& s : cr.warnings) w.push_back(s);
      row["warnings"] = w;
      const BitensionResult b = bitension_parallel(mc.metric, spec, g.tolerance);
      const ProofPathResult pp = proof_path_bitension(mc.metric, spec);
      auto rel = [](double x, double y) {
        const double s = std::max(std::abs(x), std::abs(y));
        return s == 0.0 ? 0.0 : std::abs(x - y) / s;
      };
      const double ph = rel(pp.tau2h_factor, b.tau2h_factor), pv = rel(pp.tau2v_factor, b.tau2v_factor);
      row["proof_path"] = json{{"tau2h_factor", jnum(pp.tau2h_factor)},
                               {"tau2v_factor", jnum(pp.tau2v_factor)},
                               {"rel_error_h", jnum(ph)},
                               {"rel_error_v", jnum(pv)},
                               {"pass", ph <= 1e-10 && pv <= 1e-10}};
      row["ok"] = true;
    } catch (const PreconditionError& e) {
      row["ok"] = false;
      row["error"] = e.what();
    }
    slots[k] = row;
  });
  json rows = json::array();
  bool fd_all = true, pp_all = true;
  for (auto& r : slots) {
    if (r["ok"].get<bool>()) {
      fd_all = fd_all && r["fd_pass"].get<bool>();
      pp_all = pp_all && r["proof_path"]["pass"].get<bool>();
    } else {
      o.warnings.push_back(r["metric"].get<std::string>() + ": " + r["error"].get<std::string>());
    }
    rows.push_back(std::move(r));
  }
  o.results = json{{"rows", rows}, {"fd_all_pass", fd_all}, {"proof_path_all_pass", pp_all}};
  return o;
}

Outcome cmd_tm_g_residual(const Globals& g, const MetricOpts& mo) {
  Outcome o;
  const json mj = input_file(mo.metric);
  o.inputs = json{{"metric", mj}, {"rho", jnum(mo.rho)}, {"dim", mo.dim}};
  const MetricConfig mc = metric_from_json(mj);
  const GResidual r = g_biharmonic_residual(mc.metric, {mo.dim, mo.rho}, g.tolerance);
  o.results = json{{"residual", jnum(r.residual)}, {"scale", jnum(r.scale)}, {"is_g_biharmonic", r.is_g_biharmonic}};
  o.residuals = json{{"g_residual", jnum(r.residual)}};
  o.classification = r.is_g_biharmonic ? "g_biharmonic" : "not_g_biharmonic";
  return o;
}

struct LambdaOpts {
  std::string metric;  // lambda-family metric JSON, or empty
  std::string lambda;  // infix expression
  double K = 1.0, eta = 1.0;
  int m = 2;
};

std::pair<json, LambdaFamily> lambda_family_from(const LambdaOpts& lo) {
  json spec;
  if (!lo.metric.empty()) {
    spec = input_file(lo.metric);
  } else {
    if (lo.lambda.empty()) throw ParameterError("give --metric (lambda family JSON) or --lambda EXPR");
    spec = json{{"family", "lambda"}, {"lambda", lo.lambda}, {"K", jnum(lo.K)}, {"eta", jnum(lo.eta)}, {"m", lo.m}};
  }
  const MetricConfig mc = metric_from_json(spec);
  if (!mc.lambda) throw ParameterError("metric is not a lambda family (\"family\": \"lambda\")");
  return {spec, *mc.lambda};
}

Outcome cmd_gfamily_build(const Globals& g, const LambdaOpts& lo, int samples) {
  Outcome o;
  auto [spec, fam] = lambda_family_from(lo);
  o.inputs = json{{"family", spec}, {"samples", samples}};
  double worst = 0.0;
  json rows = json::array();
  for (int i = 0; i < samples; ++i) {
    const double t = fam.eta + 9.0 * fam.eta * i / std::max(1, samples - 1);
    const ScalarWithScale r = g3_residual(fam, t);
    const double rel = r.scale > 0 ? std::abs(r.value) / r.scale : std::abs(r.value);
    worst = std::max(worst, rel);
  }
  const MetricClassification c = classify(fam.metric, 0.0, 10.0 * fam.eta, std::max(samples, 2));
  o.results = json{{"alpha1_plus_alpha3", fam.alpha13.to_json()},
                   {"alpha2", fam.alpha2.to_json()},
                   {"alpha1_plus_alpha3_expr", fam.alpha13.to_string()},
                   {"alpha2_expr", fam.alpha2.to_string()},
                   {"alpha2_at_0", jnum(fam.alpha2(0.0))},
                   {"alpha1_plus_alpha3_at_0", jnum(fam.alpha13(0.0))},
                   {"g3_max_relative_residual", jnum(worst)},
                   {"g3_grid", json::array({jnum(fam.eta), jnum(10.0 * fam.eta)})},
                   {"nondegenerate", to_string(c.nondegenerate_on_grid)},
                   {"riemannian", to_string(c.riemannian_on_grid)}};
  o.residuals = json{{"g3_max_relative", jnum(worst)}};
  (void)g;
  (void)rows;
  return o;
}

Outcome cmd_gfamily_g9(const Globals& g, const LambdaOpts& lo, double rho) {
  Outcome o;
  auto [spec, fam] = lambda_family_from(lo);
  o.inputs = json{{"family", spec}, {"rho", jnum(rho)}};
  const G9Result r = lambda_family_g9(fam, rho, g.tolerance);
  const GResidual gr = g_biharmonic_residual(fam.metric, {fam.m, rho}, g.tolerance);
  o.results = json{{"g9_value", jnum(r.g9_value)},
                   {"g9_scale", jnum(r.g9_scale)},
                   {"is_proper_g_biharmonic_by_bracket", r.is_proper_g_biharmonic},
                   {"tau2h_stated", jnum(r.tau2h_stated)},
                   {"tau2v_stated", jnum(r.tau2v_stated)},
                   {"tau2v_stated_bracket", jnum(r.g4_bracket)},
                   {"tau2h_closed", jnum(r.tau2h_closed)},
                   {"tau2v_closed", jnum(r.tau2v_closed)},
                   {"g_residual", jnum(gr.residual)},
                   {"is_g_biharmonic", gr.is_g_biharmonic}};
  o.residuals = json{{"g_residual", jnum(gr.residual)}, {"g9_value", jnum(r.g9_value)}};
  if (!gr.is_g_biharmonic)
    o.warnings.push_back("the constructed field is not G-biharmonic under the closed-form bitension");
  return o;
}

Outcome cmd_gfamily_cubic(const Globals&, double a, double b, int m) {
  Outcome o;
  o.inputs = json{{"a", jnum(a)}, {"b", jnum(b)}, {"m", m}};
  const auto coeffs = exp_lambda_cubic_coefficients(b, m);
  const auto roots = exp_lambda_cubic(a, b, m);
  const SmoothFn t = SmoothFn::identity();
  const SmoothFn lambda = SmoothFn::product({SmoothFn::constant(a), t, SmoothFn::exp(SmoothFn::constant(b) * t)});
  json c = json::array(), rr = json::array();
  for (double x : coeffs) c.push_back(jnum(x));
  for (double r : roots) {
    const ScalarWithScale v = g9_bracket(lambda, m, r);
    rr.push_back(json{{"root", jnum(r)},
                      {"bracket_value", jnum(v.value)},
                      {"relative_residual", jnum(v.scale > 0 ? std::abs(v.value) / v.scale : 0.0)}});
  }
  o.results = json{{"coefficients", c}, {"roots", rr}};
  return o;
}

// ---- unit tangent bundle commands ------------------------------------------------------------

struct T1MOpts {
  std::string model, params, field, arith = "auto";
};

int model_dim(const ModelSpec& s) {
  if (s.builtin == "hyperbolic") return s.n;
  if (s.builtin == "custom") return s.dim;
  return 3;
}

struct T1MInputs {
  ModelSpec model;
  ParamsSpec params;
  std::vector<ExactNumber> field;
  json echo;
};

T1MInputs load_t1m(const T1MOpts& t) {
  T1MInputs in;
  const json mj = input_file(t.model);
  in.model = model_spec_from_json(mj);
  json pj = json::object();
  if (!t.params.empty()) {
    pj = input_file(t.params);
    in.params = params_from_json(pj);
  }
  if (t.field.empty()) throw ParameterError("--field is required");
  if (t.field.find(".json") != std::string::npos)
    in.field = field_from_json(input_file(t.field));
  else
    in.field = field_from_string(t.field, model_dim(in.model));
  json fj = json::array();
  for (const auto& x : in.field) fj.push_back(scalar_to_string(x.exact));
  in.echo = json{{"model", mj}, {"params", params_to_json(in.params)}, {"field", fj}};
  return in;
}

bool use_exact(const T1MOpts& t, const T1MInputs& in) {
  if (t.arith == "float") return false;
  Rational n2 = 0;
  for (const auto& x : in.field) n2 += x.exact * x.exact;
  const bool unit = n2 == 1;
  if (t.arith == "exact") {
    if (!unit) throw DomainError("field is not exactly a unit field; use --arith float");
    return true;
  }
  return unit;
}

template <class T>
json tension_json(const T1MTension<T>& tn) {
  json o = json::object();
  put_vec(o, "tau_h", tn.tau_h);
  put_vec(o, "tau_v", tn.tau_v);
  put_vec(o, "QU", tn.ops.QU);
  put_vec(o, "laplacian_U", tn.ops.laplacian_U);
  put_vec(o, "S_U", tn.ops.S_U);
  put_vec(o, "nabla_U_U", tn.ops.nabla_U_U);
  put_scalar(o, "div_U", tn.ops.div_U);
  put_scalar(o, "grad_norm_sq", tn.ops.grad_norm_sq);
  return o;
}

template <class T>
Outcome t1m_run(const std::string& what, const T1MInputs& in, double tol) {
  Outcome o;
  const FrameModel<T> M = build_from_spec<T>(in.model);
  const FVec<T> U = field_as<T>(in.field);
  const UnitBundleParams<T> p = params_as<T>(in.params);
  if (what == "tension") {
    const T1MTension<T> tn = t1m_tension(M, U, p);
    o.results = tension_json(tn);
    o.results["scale"] = jnum(tn.scale);
  } else if (what == "bitension") {
    const T1MBitension<T> b = t1m_bitension_tensor(M, U, p);
    o.results = json{{"tension", tension_json(b.tension)}, {"scale", jnum(b.scale)}};
    put_vec(o.results, "T_U", b.T_U);
    put_vec(o.results, "grad_term", b.grad_term);
    o.residuals = json{{"T_U_max_abs", jnum(max_abs(b.T_U))}};
  } else {
    const UnitFieldReport<T> r = classify_unit(M, U, p, tol);
    o.results = json{{"tension", tension_json(r.bitension.tension)},
                     {"scale", jnum(r.bitension.scale)},
                     {"tension_zero", r.tension_zero},
                     {"T_zero", r.T_zero},
                     {"harmonic_unit_field", r.harmonic_unit_field},
                     {"classification", to_string(r.classification)}};
    put_vec(o.results, "T_U", r.bitension.T_U);
    o.classification = to_string(r.classification);
    o.residuals = json{{"T_U_max_abs", jnum(max_abs(r.bitension.T_U))}};
  }
  o.results["arithmetic"] = std::is_same_v<T, Rational> ? "exact" : "float";
  return o;
}

Outcome cmd_t1m(const Globals& g, const std::string& what, const T1MOpts& t) {
  const T1MInputs in = load_t1m(t);
  const bool exact = use_exact(t, in);
  Outcome o = exact ? t1m_run<Rational>(what, in, g.tolerance) : t1m_run<double>(what, in, g.tolerance);
  o.inputs = in.echo;
  o.inputs["arith"] = t.arith;
  return o;
}

template <class T>
Outcome special_run(SpecialKind kind, const T1MInputs& in, bool enforce, double tol) {
  Outcome o;
  const FrameModel<T> M = build_from_spec<T>(in.model);
  const SpecialResidual<T> r =
      special_case_residual(kind, M, field_as<T>(in.field), params_as<T>(in.params), enforce, tol);
  json fp = json::array();
  for (const auto& s : r.failed_premises) fp.push_back(s);
  o.results = json{{"kind", to_string(kind)},  {"scale", jnum(r.scale)},
                   {"zero", r.zero},           {"failed_premises", fp},
                   {"premises_hold", fp.empty()}, {"arithmetic", std::is_same_v<T, Rational> ? "exact" : "float"}};
  if (kind == SpecialKind::GeodesicConstCurv) o.results["sectional_curvature"] = jnum(r.sectional_curvature);
  put_vec(o.results, "residual", r.residual);
  o.residuals = json{{"residual_max_abs", jnum(max_abs(r.residual))}};
  o.classification = r.zero ? "condition_holds" : "condition_fails";
  return o;
}

Outcome cmd_t1m_special(const Globals& g, const std::string& kind, const T1MOpts& t, bool no_enforce) {
  const T1MInputs in = load_t1m(t);
  const SpecialKind k = special_kind_from_string(kind);
  Outcome o = use_exact(t, in) ? special_run<Rational>(k, in, !no_enforce, g.tolerance)
                               : special_run<double>(k, in, !no_enforce, g.tolerance);
  o.inputs = in.echo;
  o.inputs["kind"] = kind;
  o.inputs["enforce_premises"] = !no_enforce;
  return o;
}

json branch_json(const CriterionBranch& b) {
  json mp = json::array();
  for (double x : b.model_params) mp.push_back(jnum(x));
  return json{{"field", b.field},
              {"name", b.name},
              {"expected", b.expected},
              {"condition", b.condition},
              {"admissible", b.admissible},
              {"note", b.note},
              {"params",
               {{"a", jnum(b.params.a)}, {"b", jnum(b.params.b)}, {"c", jnum(b.params.c)}, {"d", jnum(b.params.d)}}},
              {"model_params", mp},
              {"criterion_residual", jnum(b.criterion_residual)},
              {"T_norm", jnum(b.T_norm)},
              {"T_scale", jnum(b.T_scale)},
              {"engine_class", b.engine_class},
              {"engine_agrees", b.engine_agrees}};
}

json criteria_json(const CriteriaReport& r) {
  json br = json::array();
  for (const auto& b : r.branches) br.push_back(branch_json(b));
  json o{{"model", r.model}, {"field", r.field}, {"branches", br}};
  if (r.evaluated)
    o["evaluation"] = json{{"proposition_verdict", r.proposition_verdict},
                           {"matched_branch", r.matched_branch},
                           {"engine_class", r.engine_class},
                           {"agree", r.agree}};
  return o;
}

Outcome cmd_t1m_criteria(const Globals& g, const std::string& config, int draws) {
  Outcome o;
  const json cj = input_file(config);
  o.inputs = json{{"config", cj}, {"draws", draws}, {"seed", g.seed}};
  const CriteriaInput in = criteria_input_from_json(cj);
  const CriteriaReport r = closed_form_criteria(in, g.tolerance);
  o.results = criteria_json(r);
  int disagree = 0;
  for (const auto& b : r.branches)
    if (b.admissible && !b.engine_agrees) ++disagree;
  if (disagree > 0)
    o.warnings.push_back(std::to_string(disagree) + " admissible branch(es) disagree with the T(U) engine");
  if (draws > 0) {
    // Random admissible parameter draws, same model/field; summary of criterion residuals and
    // engine agreement of the constructed parameter sets.
    std::mt19937_64 rng(g.seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0), pos(0.25, 3.0);
    int constructed = 0, agree = 0;
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
      CriteriaInput d = in;
      d.evaluate = false;
      d.params = {u(rng), u(rng), u(rng), u(rng)};
      if (in.model == "hyperbolic") d.k = pos(rng);
      if (in.model == "su2") d.sigma = 1.0 + pos(rng);
      CriteriaReport dr;
      try {
        dr = closed_form_criteria(d, g.tolerance);
      } catch (const PreconditionError&) {
        continue;
      }
      for (const auto& b : dr.branches) {
        if (!b.admissible || b.expected != "proper_g_biharmonic") continue;
        ++constructed;
        agree += b.engine_agrees ? 1 : 0;
        worst = std::max(worst, std::abs(b.criterion_residual));
      }
    }
    o.results["draws"] = json{{"constructed_parameter_sets", constructed},
                              {"engine_agrees", agree},
                              {"max_relative_criterion_residual", jnum(worst)}};
  }
  if (r.evaluated) o.classification = json{{"proposition", r.proposition_verdict}, {"engine", r.engine_class}};
  return o;
}

template <class T>
json model_tables(const ModelSpec& spec, const std::string& field_arg) {
  const FrameModel<T> M = build_from_spec<T>(spec);
  const int m = M.m;
  json o = json::object();
  o["dim"] = m;
  o["name"] = M.name;
  json conn = json::object(), curv = json::object();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const std::string key = "nabla_e" + std::to_string(i + 1) + "_e" + std::to_string(j + 1);
      json e = json::object();
      put_vec(e, "v", nabla(M, basis<T>(m, i), basis<T>(m, j)));
      conn[key] = e;
    }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const FVec<T> r = curvature(M, basis<T>(m, i), basis<T>(m, j), basis<T>(m, k));
        json e = json::object();
        put_vec(e, "v", r);
        curv["R_e" + std::to_string(i + 1) + "_e" + std::to_string(j + 1) + "_e" + std::to_string(k + 1)] = e;
      }
  o["connection"] = conn;
  o["curvature"] = curv;
  json fields = json::object();
  auto field_entry = [&](const FVec<T>& U) {
    const DerivedOperators<T> d = derived_operators(M, U);
    json e = json::object();
    put_vec(e, "QU", d.QU);
    put_vec(e, "laplacian_U", d.laplacian_U);
    put_vec(e, "S_U", d.S_U);
    put_vec(e, "nabla_U_U", d.nabla_U_U);
    put_scalar(e, "div_U", d.div_U);
    put_scalar(e, "grad_norm_sq", d.grad_norm_sq);
    put_vec(e, "curvature_sum_U_U", curvature_sum(M, U, U));
    return e;
  };
  for (int i = 0; i < m; ++i) fields["e" + std::to_string(i + 1)] = field_entry(basis<T>(m, i));
  if (!field_arg.empty()) fields["field"] = field_entry(field_as<T>(field_from_string(field_arg, m)));
  o["fields"] = fields;
  json inv = json::array();
  for (const auto& s : model_invariant_failures(M)) inv.push_back(s);
  o["invariant_failures"] = inv;
  o["arithmetic"] = std::is_same_v<T, Rational> ? "exact" : "float";
  return o;
}

Outcome cmd_model_show(const Globals&, const std::string& model, const std::string& field, const std::string& arith) {
  Outcome o;
  const json mj = input_file(model);
  o.inputs = json{{"model", mj}, {"field", field}, {"arith", arith}};
  const ModelSpec spec = model_spec_from_json(mj);
  o.results = arith == "float" ? model_tables<double>(spec, field) : model_tables<Rational>(spec, field);
  if (!o.results["invariant_failures"].empty()) o.warnings.push_back("model invariants fail; see invariant_failures");
  return o;
}

Outcome cmd_report(const Globals&, const std::string& name) {
  Outcome o;
  o.inputs = json{{"report", name}};
  o.results = discrepancy_report(name);
  return o;
}

json assemble(const std::string& command, const Outcome& o) {
  json r{{"command", command},
         {"inputs", o.inputs},
         {"config_hash", config_hash(json{{"command", command}, {"inputs", o.inputs}})},
         {"results", o.results},
         {"warnings", o.warnings},
         {"tool_version", GNAT_VERSION}};
  if (!o.classification.is_null()) r["classification"] = o.classification;
  if (!o.residuals.is_null()) r["residuals"] = o.residuals;
  return r;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Globals g;
  CLI::App app{"gnat: g-natural metrics on tangent bundles, biharmonic maps and unit vector fields", "gnat"};
  app.set_version_flag("--version", std::string(GNAT_VERSION));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--tolerance", g.tolerance, "Zero tolerance (relative to term scales)")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", g.jobs, "Worker threads (0 = logical cores)");
  app.add_option("--seed", g.seed, "Seed for randomized sweeps");

  std::string command;
  std::function<Outcome()> action;
  auto on = [&](CLI::App* sub, const std::string& name, std::function<Outcome()> f) {
    sub->fallthrough();
    sub->callback([&command, &action, name, f] {
      command = name;
      action = f;
    });
  };

  // classify
  auto* c_classify = app.add_subcommand("classify", "Grid certificate of non-degeneracy / Riemannian conditions");
  std::string cl_metric;
  std::vector<double> cl_interval{0.0, 10.0};
  int cl_samples = 200;
  c_classify->add_option("--metric", cl_metric, "Metric JSON file")->required();
  c_classify->add_option("--interval", cl_interval, "t_min t_max")->expected(2);
  c_classify->add_option("--samples", cl_samples, "Number of grid samples");
  on(c_classify, "classify", [&] { return cmd_classify(g, cl_metric, cl_interval[0], cl_interval[1], cl_samples); });

  // tm
  auto* c_tm = app.add_subcommand("tm", "Parallel vector fields as maps into (TM, G)");
  c_tm->fallthrough();
  c_tm->require_subcommand(1);
  MetricOpts mo;
  bool with_coeffs = false;
  auto metric_opts = [&](CLI::App* s) {
    s->add_option("--metric", mo.metric, "Metric JSON file")->required();
    s->add_option("--rho", mo.rho, "Squared norm of the parallel field")->check(CLI::NonNegativeNumber);
    s->add_option("--dim", mo.dim, "Base dimension m")->check(CLI::PositiveNumber);
  };
  auto* c_bit = c_tm->add_subcommand("bitension", "Tension and bitension factors");
  metric_opts(c_bit);
  c_bit->add_flag("--coeffs", with_coeffs, "Include the 29 connection coefficients");
  on(c_bit, "tm bitension", [&] { return cmd_tm_bitension(g, mo, with_coeffs); });
  auto* c_cp = c_tm->add_subcommand("classify-parallel", "Classify a parallel field");
  metric_opts(c_cp);
  on(c_cp, "tm classify-parallel", [&] { return cmd_tm_classify_parallel(g, mo); });
  auto* c_gr = c_tm->add_subcommand("g-residual", "G-biharmonicity residual");
  metric_opts(c_gr);
  on(c_gr, "tm g-residual", [&] { return cmd_tm_g_residual(g, mo); });

  auto* c_scan = c_tm->add_subcommand("scan", "Scan rho over an interval");
  double s_lo = 0.5, s_hi = 2.0;
  int s_steps = 100;
  c_scan->add_option("--metric", mo.metric, "Metric JSON file")->required();
  c_scan->add_option("--dim", mo.dim, "Base dimension m")->check(CLI::PositiveNumber);
  c_scan->add_option("--rho-min", s_lo, "Lower end")->required();
  c_scan->add_option("--rho-max", s_hi, "Upper end")->required();
  c_scan->add_option("--steps", s_steps, "Number of intervals");
  c_scan->add_flag("--coeffs", with_coeffs, "Include connection coefficients per row");
  on(c_scan, "tm scan", [&] { return cmd_tm_scan(g, mo.metric, mo.dim, s_lo, s_hi, s_steps, with_coeffs); });

  auto* c_or = c_tm->add_subcommand("oracle", "Finite-difference and proof-path cross-checks");
  std::vector<int> o_dims{2, 3};
  std::vector<double> o_rhos{0.5, 1.0, 2.0};
  double o_h = 0.0, o_tol = 1e-4;
  int o_rich = 1;
  c_or->add_option("--metric", mo.metric, "Metric or corpus JSON file")->required();
  c_or->add_option("--dims", o_dims, "Base dimensions");
  c_or->add_option("--rhos", o_rhos, "Squared norms");
  c_or->add_option("--step", o_h, "Finite-difference step h (0 = automatic)");
  c_or->add_option("--richardson", o_rich, "Richardson levels")->check(CLI::Range(0, 4));
  c_or->add_option("--rel-tol", o_tol, "Relative tolerance of the comparison");
  on(c_or, "tm oracle", [&] { return cmd_tm_oracle(g, mo.metric, o_dims, o_rhos, o_h, o_rich, o_tol); });

  // gfamily
  auto* c_gf = app.add_subcommand("gfamily", "The lambda family of G-biharmonic parallel fields");
  c_gf->require_subcommand(1);
  c_gf->fallthrough();
  LambdaOpts lo;
  auto lambda_opts = [&](CLI::App* s) {
    s->add_option("--metric", lo.metric, "Lambda-family metric JSON file");
    s->add_option("--lambda", lo.lambda, "lambda(t) as an infix expression");
    s->add_option("--K", lo.K, "Nonzero constant K");
    s->add_option("--eta", lo.eta, "Cutoff parameter eta > 0");
    s->add_option("--m", lo.m, "Base dimension");
  };
  auto* c_build = c_gf->add_subcommand("build", "Construct the metric and check it");
  int b_samples = 100;
  lambda_opts(c_build);
  c_build->add_option("--samples", b_samples, "Grid points on [eta, 10 eta]");
  on(c_build, "gfamily build", [&] { return cmd_gfamily_build(g, lo, b_samples); });
  auto* c_g9 = c_gf->add_subcommand("g9", "Non-biharmonicity bracket and bitension at rho");
  double g9_rho = 1.0;
  lambda_opts(c_g9);
  c_g9->add_option("--rho", g9_rho, "rho >= eta")->required();
  on(c_g9, "gfamily g9", [&] { return cmd_gfamily_g9(g, lo, g9_rho); });
  auto* c_cub = c_gf->add_subcommand("cubic", "Positive roots of the cubic for lambda = a t e^{bt}");
  double cu_a = 1.0, cu_b = 0.0;
  int cu_m = 2;
  c_cub->add_option("--a", cu_a, "a > 0");
  c_cub->add_option("--b", cu_b, "b");
  c_cub->add_option("--m", cu_m, "Base dimension");
  on(c_cub, "gfamily cubic", [&] { return cmd_gfamily_cubic(g, cu_a, cu_b, cu_m); });

  // t1m
  auto* c_t1 = app.add_subcommand("t1m", "Unit vector fields as maps into (T1M, G~)");
  c_t1->require_subcommand(1);
  c_t1->fallthrough();
  T1MOpts to;
  auto t1m_opts = [&](CLI::App* s) {
    s->add_option("--model", to.model, "Frame model JSON file")->required();
    s->add_option("--params", to.params, "Params JSON file {a,b,c,d}");
    s->add_option("--field", to.field, "Field: e3, 0,0,1, or a JSON file")->required();
    s->add_option("--arith", to.arith, "Arithmetic")->check(CLI::IsMember({"auto", "exact", "float"}));
  };
  for (const char* w : {"tension", "bitension", "classify"}) {
    auto* s = c_t1->add_subcommand(w, std::string("Unit field ") + w);
    t1m_opts(s);
    const std::string what = w;
    on(s, std::string("t1m ") + w, [&, what] { return cmd_t1m(g, what, to); });
  }
  auto* c_crit = c_t1->add_subcommand("criteria", "Closed-form criteria of the model propositions");
  std::string cr_config;
  int cr_draws = 0;
  c_crit->add_option("--config", cr_config, "Criteria JSON file")->required();
  c_crit->add_option("--draws", cr_draws, "Additional random parameter draws");
  on(c_crit, "t1m criteria", [&] { return cmd_t1m_criteria(g, cr_config, cr_draws); });
  auto* c_sp = c_t1->add_subcommand("special", "Special-case residuals");
  std::string sp_kind;
  bool sp_no_enforce = false;
  t1m_opts(c_sp);
  c_sp->add_option("--kind", sp_kind, "kk_metric | geodesic_constcurv | killing | reeb")->required();
  c_sp->add_flag("--no-enforce", sp_no_enforce, "Report failed premises instead of refusing");
  on(c_sp, "t1m special", [&] { return cmd_t1m_special(g, sp_kind, to, sp_no_enforce); });

  // model
  auto* c_model = app.add_subcommand("model", "Frame models");
  c_model->require_subcommand(1);
  c_model->fallthrough();
  auto* c_show = c_model->add_subcommand("show", "Connection, curvature and operator tables");
  std::string m_model, m_field, m_arith = "exact";
  c_show->add_option("--model", m_model, "Frame model JSON file")->required();
  c_show->add_option("--field", m_field, "Extra field: e2 or 0.6,0.8,0");
  c_show->add_option("--arith", m_arith, "Arithmetic")->check(CLI::IsMember({"exact", "float"}));
  on(c_show, "model show", [&] { return cmd_model_show(g, m_model, m_field, m_arith); });

  // report
  auto* c_rep = app.add_subcommand("report", "Generated discrepancy reports");
  std::string r_name;
  c_rep->add_option("name", r_name, "kk-three-halves | lambda-exp-cubic")->required();
  on(c_rep, "report", [&] { return cmd_report(g, r_name); });

  auto fail = [&](int code, const std::string& type, const std::string& msg) {
    json r{{"command", command.empty() ? json(nullptr) : json(command)},
           {"error", {{"type", type}, {"message", msg}}},
           {"exit_code", code},
           {"tool_version", GNAT_VERSION}};
    err << canonical_dump(r) << "\n";
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << GNAT_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    // Name the (partially) selected subcommand path, e.g. "t1m criteria".
    for (const CLI::App* a = &app; !a->get_subcommands().empty();) {
      a = a->get_subcommands().front();
      command += (command.empty() ? "" : " ") + a->get_name();
    }
    return fail(2, "usage", e.what());
  }
  if (g.jobs == 0) g.jobs = default_jobs();

  try {
    const Outcome o = action();
    const json report = assemble(command, o);
    if (g.format == "table")
      out << render_table(report);
    else
      out << canonical_dump(report) << "\n";
    return 0;
  } catch (const PreconditionError& e) {
    return fail(2, "precondition", e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(2, "input", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
}

}  // namespace gnat
