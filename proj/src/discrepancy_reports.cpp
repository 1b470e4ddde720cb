#include "gnat/discrepancy_reports.hpp"

#include <cmath>

#include "gnat/errors.hpp"
#include "gnat/report.hpp"
#include "gnat/tm_biharmonic.hpp"

namespace gnat {

using json = nlohmann::json;

json kk_three_halves_report() {
  const SmoothFn t = SmoothFn::identity();
  json cases = json::array();
  bool all_match_closed_form = true;
  bool any_vanishing = false;
  for (double c : {0.0, 1.0}) {
    // alpha1 = 1, beta1 = beta3 = 0, alpha3 = (2/3) t^{3/2} + c - 1.
    const SmoothFn alpha3 = (2.0 / 3.0) * SmoothFn::pow(t, 3, 2) + SmoothFn::constant(c - 1.0);
    const GNaturalMetric g = GNaturalMetric::kaluza_klein_type(SmoothFn::constant(1.0), alpha3,
                                                               SmoothFn::constant(0.0), SmoothFn::constant(0.0));
    json rows = json::array();
    for (double rho : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const ScalarWithScale lhs = kk_type_lhs_scaled(g, rho);
      const double expected = -2.0 * std::sqrt(rho);
      const double rel = std::abs(lhs.value - expected) / std::abs(expected);
      all_match_closed_form = all_match_closed_form && rel <= 1e-12;
      const bool vanishes = is_zero(lhs.value, lhs.scale);
      any_vanishing = any_vanishing || vanishes;
      json row{{"rho", jnum(rho)},
               {"criterion_lhs", jnum(lhs.value)},
               {"criterion_scale", jnum(lhs.scale)},
               {"closed_form_minus_2_sqrt_rho", jnum(expected)},
               {"relative_difference", jnum(rel)},
               {"criterion_vanishes", vanishes}};
      json bit = json::object();
      for (int m : {2, 3}) {
        const ParallelClassReport rep = classify_parallel(g, {m, rho});
        bit["m" + std::to_string(m)] = json{{"tau2h_factor", jnum(rep.bitension.tau2h_factor)},
                                            {"tau2v_factor", jnum(rep.bitension.tau2v_factor)},
                                            {"classification", to_string(rep.bitension.classification)},
                                            {"stated_criterion_agrees", rep.stated_criterion_agrees}};
      }
      row["bitension"] = bit;
      rows.push_back(row);
    }
    cases.push_back(json{{"c", jnum(c)}, {"rows", rows}});
  }
  return json{{"name", "kk-three-halves"},
              {"metric", "alpha1 = 1, alpha2 = beta_i = 0, alpha1 + alpha3 = (2/3) t^(3/2) + c"},
              {"claim_under_test", "the parallel-field criterion is satisfied for every rho > 0"},
              {"cases", cases},
              {"criterion_equals_minus_2_sqrt_rho", all_match_closed_form},
              {"criterion_vanishes_somewhere", any_vanishing},
              {"verdict", any_vanishing ? "claim consistent on part of the grid" : "claim not reproduced"}};
}

namespace {

// Zeros of f on [lo, hi] from sign changes on a uniform grid, refined by bisection.
std::vector<double> grid_zeros(const std::function<double(double)>& f, double lo, double hi, int n) {
  std::vector<double> out;
  double x0 = lo, f0 = f(lo);
  for (int i = 1; i <= n; ++i) {
    const double x1 = lo + (hi - lo) * i / n;
    const double f1 = f(x1);
    if (f0 == 0.0) {
      out.push_back(x0);
    } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
      out.push_back(bisect_root(f, x0, x1, 1e-13).rho);
    }
    x0 = x1;
    f0 = f1;
  }
  if (f0 == 0.0) out.push_back(x0);
  return out;
}

}  // namespace

json lambda_exp_cubic_report() {
  const double a = 1.0;
  const double lo = 0.05, hi = 20.0;
  const int grid = 8000;
  const double match_tol = 1e-6;
  json entries = json::array();
  int agreeing = 0, total = 0;
  for (int m : {2, 3}) {
    for (double b : {0.0, 1.0}) {
      const SmoothFn t = SmoothFn::identity();
      const SmoothFn lambda =
          SmoothFn::product({SmoothFn::constant(a), t, SmoothFn::exp(SmoothFn::constant(b) * t)});
      auto g9 = [&](double x) { return g9_bracket(lambda, m, x).value; };
      const std::vector<double> coeffs = exp_lambda_cubic_coefficients(b, m);
      const std::vector<double> roots = exp_lambda_cubic(a, b, m);
      const std::vector<double> zeros = grid_zeros(g9, lo, hi, grid);

      json root_rows = json::array();
      bool roots_ok = true;
      for (double r : roots) {
        const ScalarWithScale v = g9_bracket(lambda, m, r);
        bool matched = false;
        for (double z : zeros) matched = matched || std::abs(z - r) <= match_tol * (1.0 + r);
        roots_ok = roots_ok && matched;
        root_rows.push_back(json{{"root", jnum(r)},
                                 {"bracket_value", jnum(v.value)},
                                 {"bracket_scale", jnum(v.scale)},
                                 {"relative_residual", jnum(v.scale > 0 ? std::abs(v.value) / v.scale : 0.0)},
                                 {"matches_bracket_zero", matched}});
      }
      json zero_rows = json::array();
      bool zeros_ok = true;
      for (double z : zeros) {
        bool matched = false;
        for (double r : roots) matched = matched || std::abs(z - r) <= match_tol * (1.0 + r);
        zeros_ok = zeros_ok && matched;
        zero_rows.push_back(json{{"zero", jnum(z)}, {"matches_cubic_root", matched}});
      }
      json c = json::array();
      for (double x : coeffs) c.push_back(jnum(x));
      const bool agree = roots_ok && zeros_ok;
      agreeing += agree ? 1 : 0;
      ++total;
      entries.push_back(json{{"m", m},
                             {"b", jnum(b)},
                             {"cubic_coefficients", c},
                             {"cubic_positive_roots", root_rows},
                             {"bracket_zeros", zero_rows},
                             {"sets_agree", agree}});
    }
  }
  return json{{"name", "lambda-exp-cubic"},
              {"lambda", "a t exp(b t)"},
              {"a", jnum(a)},
              {"search_interval", json::array({jnum(lo), jnum(hi)})},
              {"grid_intervals", grid},
              {"match_tolerance", jnum(match_tol)},
              {"matrix", entries},
              {"agreeing_cases", agreeing},
              {"total_cases", total}};
}

std::vector<std::string> discrepancy_report_names() { return {"kk-three-halves", "lambda-exp-cubic"}; }

json discrepancy_report(const std::string& name) {
  if (name == "kk-three-halves") return kk_three_halves_report();
  if (name == "lambda-exp-cubic") return lambda_exp_cubic_report();
  throw ParameterError("unknown report '" + name + "' (expected kk-three-halves or lambda-exp-cubic)");
}

}  // namespace gnat
