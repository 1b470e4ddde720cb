#include "gnat/t1m_biharmonic.hpp"

#include <cmath>
#include <functional>

namespace gnat {

std::string to_string(UnitClass c) {
  switch (c) {
    case UnitClass::HarmonicMap: return "harmonic_map";
    case UnitClass::HarmonicUnitFieldOnly: return "harmonic_unit_field_only";
    case UnitClass::ProperGBiharmonic: return "proper_g_biharmonic";
    case UnitClass::NotBiharmonic: return "not_biharmonic";
  }
  return "unknown";
}

std::string to_string(SpecialKind k) {
  switch (k) {
    case SpecialKind::KKMetric: return "kk_metric";
    case SpecialKind::GeodesicConstCurv: return "geodesic_constcurv";
    case SpecialKind::Killing: return "killing";
    case SpecialKind::Reeb: return "reeb";
  }
  return "unknown";
}

SpecialKind special_kind_from_string(const std::string& s) {
  if (s == "kk_metric") return SpecialKind::KKMetric;
  if (s == "geodesic_constcurv") return SpecialKind::GeodesicConstCurv;
  if (s == "killing") return SpecialKind::Killing;
  if (s == "reeb") return SpecialKind::Reeb;
  throw ParameterError("unknown special case '" + s + "' (expected kk_metric, geodesic_constcurv, killing, reeb)");
}

std::vector<double> hyperbolic_b_solutions(double a, double c, double d, double k) {
  // b = q (P - b^2) - a k with q = 2k/d - 1/(a k), P = a(a+c)  <=>  q b^2 + b + a k - q P = 0.
  std::vector<double> out;
  if (a == 0.0 || d == 0.0 || k == 0.0) return out;
  const double q = 2.0 * k / d - 1.0 / (a * k);
  const double P = a * (a + c);
  if (q == 0.0) {
    out.push_back(-a * k);
    return out;
  }
  const double disc = 1.0 - 4.0 * q * (a * k - q * P);
  if (disc < 0.0) return out;
  const double sq = std::sqrt(disc);
  // Numerically stable pair.
  const double qq = -0.5 * (1.0 + std::copysign(sq, 1.0));
  out.push_back(qq / q);
  if (qq != 0.0) out.push_back((a * k - q * P) / qq);
  if (out.size() == 2 && out[0] > out[1]) std::swap(out[0], out[1]);
  return out;
}

double hyperbolic_bracket(const UnitBundleParams<double>& p, double k) {
  const double al = p.alpha();
  return (-2.0 * p.a + p.a * p.a * p.d / al) * k * k + p.a * p.b * p.d / al * k + p.d;
}

double su2_quadratic(double sigma, double ad_over_alpha) {
  return sigma * sigma - (1.0 - ad_over_alpha) * sigma - (-1.0 + ad_over_alpha / 2.0);
}

double su2_ad_over_alpha(double sigma) { return 2.0 * (sigma * sigma - sigma + 1.0) / (1.0 - 2.0 * sigma); }

namespace {

bool near0(double x, double scale, double tol) { return std::abs(x) <= tol * (1.0 + std::abs(scale)); }

bool nondegenerate(const UnitBundleParams<double>& p) {
  const double s = p.a * p.a + p.b * p.b + std::abs(p.a * (p.c + p.d));
  return !near0(p.alpha(), s, 1e-12) && !near0(p.phi(), s, 1e-12) &&
         !near0(p.varphi(), std::abs(p.a) + std::abs(p.c) + std::abs(p.d), 1e-12);
}

// Parameter c realizing a prescribed alpha: alpha = a(a+c) - b^2.
double c_from_alpha(double a, double b, double alpha) { return (alpha + b * b) / a - a; }

int field_index(const std::string& f) {
  if (f == "e1") return 0;
  if (f == "e2") return 1;
  if (f == "e3") return 2;
  throw ParameterError("field must be one of e1, e2, e3 (got '" + f + "')");
}

void cross_check(CriterionBranch& br, const FrameModel<double>& M, int idx, double tol) {
  if (!br.admissible) return;
  if (!nondegenerate(br.params)) {
    br.admissible = false;
    br.note += (br.note.empty() ? "" : "; ") + std::string("parameters are degenerate");
    return;
  }
  const FVec<double> U = basis<double>(M.m, idx);
  const UnitFieldReport<double> rep = classify_unit(M, U, br.params, tol);
  br.T_norm = max_abs(rep.bitension.T_U);
  br.T_scale = rep.bitension.scale;
  br.engine_class = to_string(rep.classification);
  br.engine_agrees = br.engine_class == br.expected;
}

CriteriaReport hyperbolic_criteria(const CriteriaInput& in, double tol) {
  CriteriaReport rep;
  rep.model = "hyperbolic";
  rep.field = "V";
  const double k = in.k;
  const auto& p0 = in.params;
  const FrameModel<double> M = hyperbolic<double>(in.n, k);
  const int idx = in.n - 1;
  {
    CriterionBranch br;
    br.field = "V";
    br.name = "harmonic: d = a k^2";
    br.expected = "harmonic_map";
    br.condition = "d = a k^2";
    br.params = {p0.a, p0.b, p0.c, p0.a * k * k};
    br.model_params = {static_cast<double>(in.n), k};
    cross_check(br, M, idx, tol);
    rep.branches.push_back(br);
  }
  const auto bs = hyperbolic_b_solutions(p0.a, p0.c, p0.d, k);
  if (bs.empty()) {
    CriterionBranch br;
    br.field = "V";
    br.name = "proper: b from the closed formula";
    br.expected = "proper_g_biharmonic";
    br.condition = "a != 0, d != 0, d != a k^2, b = (2 alpha/d - a) k - alpha/(a k)";
    br.admissible = false;
    br.note = "no real b for the given (a, c, d, k)";
    br.params = p0;
    br.model_params = {static_cast<double>(in.n), k};
    rep.branches.push_back(br);
  }
  for (std::size_t i = 0; i < bs.size(); ++i) {
    CriterionBranch br;
    br.field = "V";
    br.name = "proper: b from the closed formula, root " + std::to_string(i + 1);
    br.expected = "proper_g_biharmonic";
    br.condition = "a != 0, d != 0, d != a k^2, b = (2 alpha/d - a) k - alpha/(a k)";
    br.params = {p0.a, bs[i], p0.c, p0.d};
    br.model_params = {static_cast<double>(in.n), k};
    br.admissible = p0.a != 0.0 && p0.d != 0.0 && !near0(p0.d - p0.a * k * k, p0.d, 1e-12);
    if (br.admissible && nondegenerate(br.params)) {
      const auto& p = br.params;
      const double al = p.alpha();
      const double sc = std::abs(2.0 * p.a * k * k) + std::abs(p.a * p.a * p.d / al * k * k) +
                        std::abs(p.a * p.b * p.d / al * k) + std::abs(p.d);
      br.criterion_residual = hyperbolic_bracket(p, k) / sc;
    }
    cross_check(br, M, idx, tol);
    rep.branches.push_back(br);
  }
  if (in.evaluate) {
    const auto& p = p0;
    rep.evaluated = true;
    if (near0(p.d - p.a * k * k, std::abs(p.d) + std::abs(p.a * k * k), tol)) {
      rep.proposition_verdict = "harmonic_map";
      rep.matched_branch = "harmonic: d = a k^2";
    } else if (p.a != 0.0 && p.d != 0.0 && nondegenerate(p)) {
      const double al = p.alpha();
      const double rhs = (2.0 * al / p.d - p.a) * k - al / (p.a * k);
      if (near0(p.b - rhs, std::abs(p.b) + std::abs(rhs), tol)) {
        rep.proposition_verdict = "proper_g_biharmonic";
        rep.matched_branch = "proper: b from the closed formula";
      } else {
        rep.proposition_verdict = "not_biharmonic";
      }
    } else {
      rep.proposition_verdict = "not_biharmonic";
    }
    rep.engine_class = to_string(classify_unit(M, basis<double>(M.m, idx), p, tol).classification);
  }
  return rep;
}

// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 (c3 != 0) by bracketing + bisection on a bounded range.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0) {
  std::vector<double> out;
  auto f = [&](double x) { return ((c3 * x + c2) * x + c1) * x + c0; };
  const double bound = 1.0 + std::max({std::abs(c2 / c3), std::abs(c1 / c3), std::abs(c0 / c3)});
  // Critical points split the line into monotone pieces.
  std::vector<double> pts{-bound};
  const double qa = 3.0 * c3, qb = 2.0 * c2, qc = c1;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc > 0.0) {
    double r1 = (-qb - std::sqrt(disc)) / (2.0 * qa), r2 = (-qb + std::sqrt(disc)) / (2.0 * qa);
    if (r1 > r2) std::swap(r1, r2);
    pts.push_back(r1);
    pts.push_back(r2);
  }
  pts.push_back(bound);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double lo = pts[i], hi = pts[i + 1];
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) {
      out.push_back(lo);
      continue;
    }
    if ((flo < 0) == (fhi < 0)) continue;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    out.push_back(0.5 * (lo + hi));
  }
  if (f(pts.back()) == 0.0) out.push_back(pts.back());
  return out;
}

CriteriaReport sol3_criteria(const CriteriaInput& in, double tol) {
  CriteriaReport rep;
  rep.model = "sol3";
  rep.field = in.field;
  const int idx = field_index(in.field);
  const FrameModel<double> M = sol3<double>();
  const auto& p0 = in.params;
  const double a = p0.a, c = p0.c, d = p0.d;
  const double bseed = p0.b != 0.0 ? p0.b : 1.0;
  auto add = [&](CriterionBranch br) {
    br.field = in.field;
    cross_check(br, M, idx, tol);
    rep.branches.push_back(br);
  };
  // Predicates of the stated proposition, evaluated at p (in order).
  std::vector<std::pair<std::string, std::function<std::string(const UnitBundleParams<double>&)>>> preds;

  if (idx == 0) {
    {
      CriterionBranch br;
      br.name = "e1: d = b = 0, a != 0";
      br.expected = "proper_g_biharmonic";
      br.condition = br.name;
      br.params = {a, 0.0, c, 0.0};
      br.admissible = a != 0.0;
      add(br);
    }
    {
      // d = 0, b != 0, b = a(2a(a+c) + alpha)/(4 alpha) with alpha = a(a+c) - b^2:
      // -4 b^3 + a b^2 + 4 P b - 3 a P = 0, P = a(a+c).
      const double P = a * (a + c);
      const auto roots = real_cubic_roots(-4.0, a, 4.0 * P, -3.0 * a * P);
      int count = 0;
      for (double b : roots) {
        if (near0(b, 1.0, 1e-12)) continue;
        CriterionBranch br;
        br.name = "e1: d = 0, b = a(2a(a+c)+alpha)/(4 alpha), root " + std::to_string(++count);
        br.expected = "proper_g_biharmonic";
        br.condition = "d = 0, b != 0, b = a(2a(a+c) + alpha)/(4 alpha)";
        br.params = {a, b, c, 0.0};
        const double al = br.params.alpha();
        br.criterion_residual = (b - a * (2.0 * P + al) / (4.0 * al)) / (1.0 + std::abs(b));
        add(br);
      }
      if (count == 0) {
        CriterionBranch br;
        br.name = "e1: d = 0, b = a(2a(a+c)+alpha)/(4 alpha)";
        br.expected = "proper_g_biharmonic";
        br.condition = "d = 0, b != 0, b = a(2a(a+c) + alpha)/(4 alpha)";
        br.admissible = false;
        br.note = "no nonzero real b for the given (a, c)";
        br.params = {a, 0.0, c, 0.0};
        rep.branches.push_back(br);
      }
    }
    {
      CriterionBranch br;
      br.name = "e1: d != 0, b = a + d = 0";
      br.expected = "harmonic_map";
      br.condition = br.name;
      br.params = {a, 0.0, c, -a};
      br.admissible = a != 0.0;
      add(br);
    }
    for (int sgn : {+1, -1}) {
      CriterionBranch br;
      br.name = std::string("e1: alpha = -|a+d|/4 (|a+d| ") + (sgn > 0 ? "+" : "-") +
                " sqrt((a+d)^2 - 8ad)), b = -alpha/(a+d)";
      br.expected = "proper_g_biharmonic";
      br.condition = "a != 0, d in (-inf, 3a - 2 sqrt2 |a|] u [3a + 2 sqrt2 |a|, inf) \\ {0}";
      const double s = a + d;
      const double disc = s * s - 8.0 * a * d;
      const double lo = 3.0 * a - 2.0 * std::sqrt(2.0) * std::abs(a);
      const double hi = 3.0 * a + 2.0 * std::sqrt(2.0) * std::abs(a);
      br.admissible = a != 0.0 && d != 0.0 && (d <= lo || d >= hi) && disc >= 0.0 && s != 0.0;
      if (br.admissible) {
        const double al = -std::abs(s) / 4.0 * (std::abs(s) + sgn * std::sqrt(disc));
        if (al == 0.0) {
          br.admissible = false;
          br.note = "alpha = 0 on this branch";
        } else {
          const double b = -al / s;
          br.params = {a, b, c_from_alpha(a, b, al), d};
          br.criterion_residual = (2.0 * al * al + s * s * al + a * s * s * d) /
                                  (2.0 * al * al + std::abs(s * s * al) + std::abs(a * s * s * d));
        }
      } else {
        br.note = "(a, d) outside the admissible set";
        br.params = {a, bseed, c, d};
      }
      add(br);
    }
    preds.push_back({"e1: d = b = 0, a != 0", [&](const UnitBundleParams<double>& p) {
                       return near0(p.d, 1, tol) && near0(p.b, 1, tol) && p.a != 0.0 ? "proper_g_biharmonic" : "";
                     }});
    preds.push_back({"e1: d = 0, b = a(2a(a+c)+alpha)/(4 alpha)", [&](const UnitBundleParams<double>& p) {
                       const double al = p.alpha();
                       const double rhs = p.a * (2.0 * p.a * (p.a + p.c) + al) / (4.0 * al);
                       return near0(p.d, 1, tol) && !near0(p.b, 1, tol) && near0(p.b - rhs, std::abs(rhs), tol)
                                  ? "proper_g_biharmonic"
                                  : "";
                     }});
    preds.push_back({"e1: d != 0, b = a + d = 0", [&](const UnitBundleParams<double>& p) {
                       return !near0(p.d, 1, tol) && near0(p.b, 1, tol) && near0(p.a + p.d, 1, tol) ? "harmonic_map"
                                                                                                  : "";
                     }});
    preds.push_back({"e1: alpha from the quadratic, b = -alpha/(a+d)", [&](const UnitBundleParams<double>& p) {
                       const double s = p.a + p.d, al = p.alpha();
                       if (p.a == 0.0 || near0(p.d, 1, tol) || near0(s, 1, tol)) return "";
                       const double q = 2.0 * al * al + s * s * al + p.a * s * s * p.d;
                       const double qs = 2.0 * al * al + std::abs(s * s * al) + std::abs(p.a * s * s * p.d);
                       return near0(q, qs, tol) && near0(p.b + al / s, std::abs(al / s), tol) ? "proper_g_biharmonic"
                                                                                               : "";
                     }});
  } else if (idx == 1) {
    {
      CriterionBranch br;
      br.name = "e2: d = b = 0, a != 0";
      br.expected = "proper_g_biharmonic";
      br.condition = br.name;
      br.params = {a, 0.0, c, 0.0};
      br.admissible = a != 0.0;
      add(br);
    }
    {
      CriterionBranch br;
      br.name = "e2: b = 0, a + d = 0";
      br.expected = "harmonic_map";
      br.condition = br.name;
      br.params = {a, 0.0, c, -a};
      add(br);
    }
    for (int sgn : {+1, -1}) {
      CriterionBranch br;
      br.name = std::string("e2: alpha = d(a-d), b = ") + (sgn > 0 ? "+" : "-") + "sqrt(-(a+d)(2a-d)/2)";
      br.expected = "proper_g_biharmonic";
      br.condition = "a != 0, d != 0, (a+d)(2a-d) < 0";
      const double w = (a + d) * (2.0 * a - d);
      br.admissible = a != 0.0 && d != 0.0 && w < 0.0;
      if (br.admissible) {
        const double al = d * (a - d);
        const double b = sgn * std::sqrt(-w / 2.0);
        br.params = {a, b, c_from_alpha(a, b, al), d};
        br.criterion_residual = (br.params.alpha() - al) / (1.0 + std::abs(al));
      } else {
        br.note = "(a+d)(2a-d) < 0 fails";
        br.params = {a, bseed, c, d};
      }
      add(br);
    }
    preds.push_back({"e2: d = b = 0, a != 0", [&](const UnitBundleParams<double>& p) {
                       return near0(p.d, 1, tol) && near0(p.b, 1, tol) && p.a != 0.0 ? "proper_g_biharmonic" : "";
                     }});
    preds.push_back({"e2: b = 0, a + d = 0", [&](const UnitBundleParams<double>& p) {
                       return near0(p.b, 1, tol) && near0(p.a + p.d, 1, tol) ? "harmonic_map" : "";
                     }});
    preds.push_back({"e2: alpha = d(a-d), b^2 = -(a+d)(2a-d)/2", [&](const UnitBundleParams<double>& p) {
                       const double w = (p.a + p.d) * (2.0 * p.a - p.d);
                       return p.a != 0.0 && !near0(p.d, 1, tol) && w < 0.0 &&
                                      near0(p.alpha() - p.d * (p.a - p.d), std::abs(p.d * (p.a - p.d)), tol) &&
                                      near0(p.b * p.b + w / 2.0, std::abs(w), tol)
                                  ? "proper_g_biharmonic"
                                  : "";
                     }});
  } else {
    {
      CriterionBranch br;
      br.name = "e3: b = 0";
      br.expected = "harmonic_map";
      br.condition = br.name;
      br.params = {a, 0.0, c, d};
      add(br);
    }
    {
      CriterionBranch br;
      br.name = "e3: a != 0, d != 0, b != 0, a + d = 0, 2 alpha = ad";
      br.expected = "proper_g_biharmonic";
      br.condition = br.name;
      br.admissible = a != 0.0;
      const double al = -a * a / 2.0;
      br.params = {a, bseed, a != 0.0 ? c_from_alpha(a, bseed, al) : c, -a};
      br.criterion_residual = (2.0 * br.params.alpha() - br.params.a * br.params.d) / (1.0 + a * a);
      add(br);
    }
    preds.push_back({"e3: b = 0", [&](const UnitBundleParams<double>& p) {
                       return near0(p.b, 1, tol) ? "harmonic_map" : "";
                     }});
    preds.push_back({"e3: a != 0, d != 0, b != 0, a + d = 0, 2 alpha = ad", [&](const UnitBundleParams<double>& p) {
                       return p.a != 0.0 && !near0(p.d, 1, tol) && !near0(p.b, 1, tol) && near0(p.a + p.d, 1, tol) &&
                                      near0(2.0 * p.alpha() - p.a * p.d, std::abs(p.a * p.d), tol)
                                  ? "proper_g_biharmonic"
                                  : "";
                     }});
  }
  if (in.evaluate) {
    rep.evaluated = true;
    rep.proposition_verdict = "not_biharmonic";
    for (const auto& [name, pred] : preds) {
      const std::string v = pred(p0);
      if (!v.empty()) {
        rep.proposition_verdict = v;
        rep.matched_branch = name;
        break;
      }
    }
    rep.engine_class = to_string(classify_unit(M, basis<double>(3, idx), p0, tol).classification);
  }
  return rep;
}

CriteriaReport su2_criteria(const CriteriaInput& in, double tol) {
  CriteriaReport rep;
  rep.model = "su2";
  rep.field = in.field;
  const int idx = field_index(in.field);
  if (in.sigma < 1.0) throw ParameterError("su2 criteria require sigma >= 1");
  if (in.lambda3 <= 0.0) throw ParameterError("su2 criteria require lambda3 > 0");
  const double l3 = in.lambda3, lam = in.sigma * l3;
  const FrameModel<double> M = su2<double>(lam, lam, l3);
  const auto& p0 = in.params;
  auto add = [&](CriterionBranch br) {
    br.field = in.field;
    br.model_params = {in.sigma, l3};
    cross_check(br, M, idx, tol);
    rep.branches.push_back(br);
  };
  if (idx == 2) {
    CriterionBranch br;
    br.name = "e3: always a harmonic map";
    br.expected = "harmonic_map";
    br.condition = "none";
    br.params = p0;
    add(br);
  } else {
    {
      CriterionBranch br;
      br.name = "e1/e2: b = 0";
      br.expected = "harmonic_map";
      br.condition = "b = 0";
      br.params = {p0.a, 0.0, p0.c, p0.d};
      add(br);
    }
    {
      CriterionBranch br;
      br.name = "e1/e2: sigma = 1";
      br.expected = "harmonic_map";
      br.condition = "sigma = 1";
      br.params = p0;
      br.admissible = in.sigma == 1.0;
      if (!br.admissible) br.note = "sigma != 1 for this model";
      add(br);
    }
    const double bseed = p0.b != 0.0 ? p0.b : 1.0;
    const double r = su2_ad_over_alpha(in.sigma);
    for (int sgn : {+1, -1}) {
      CriterionBranch br;
      br.name = std::string("e1/e2: ad = 2(sigma^2 - sigma + 1)/(1 - 2 sigma) alpha, case ") + (sgn > 0 ? "+" : "-");
      br.expected = "proper_g_biharmonic";
      br.condition = std::string("b != 0, sigma != 1, alpha(1 - 2 sigma) - ad ") + (sgn > 0 ? ">= 0" : "<= 0");
      UnitBundleParams<double> p{p0.a, bseed, p0.c, 0.0};
      if (p.a == 0.0) {
        br.admissible = false;
        br.note = "a = 0";
        br.params = p;
      } else {
        const double al = p.alpha();
        p.d = r * al / p.a;
        br.params = p;
        const double side = al * (1.0 - 2.0 * in.sigma) - p.a * p.d;
        br.admissible = in.sigma != 1.0 && (sgn > 0 ? side >= 0.0 : side <= 0.0);
        if (!br.admissible) br.note = "side condition fails";
        br.criterion_residual = su2_quadratic(in.sigma, r) / (in.sigma * in.sigma + 1.0 + std::abs(r) * (in.sigma + 0.5));
        const double disc = p.a * p.a * p.d * p.d - 3.0 * al * al;
        if (disc < -1e-12 * (p.a * p.a * p.d * p.d + 3.0 * al * al))
          br.note += (br.note.empty() ? "" : "; ") + std::string("a^2 d^2 < 3 alpha^2");
      }
      add(br);
    }
  }
  if (in.evaluate) {
    rep.evaluated = true;
    const auto& p = p0;
    if (idx == 2) {
      rep.proposition_verdict = "harmonic_map";
      rep.matched_branch = "e3: always a harmonic map";
    } else if (near0(p.b, 1, tol) || in.sigma == 1.0) {
      rep.proposition_verdict = "harmonic_map";
      rep.matched_branch = near0(p.b, 1, tol) ? "e1/e2: b = 0" : "e1/e2: sigma = 1";
    } else {
      const double al = p.alpha();
      const double r = su2_ad_over_alpha(in.sigma);
      if (near0(p.a * p.d - r * al, std::abs(r * al), tol)) {
        rep.proposition_verdict = "proper_g_biharmonic";
        rep.matched_branch = "e1/e2: ad = 2(sigma^2 - sigma + 1)/(1 - 2 sigma) alpha";
      } else {
        rep.proposition_verdict = "not_biharmonic";
      }
    }
    rep.engine_class = to_string(classify_unit(M, basis<double>(3, idx), p, tol).classification);
  }
  return rep;
}

}  // namespace

CriteriaReport closed_form_criteria(const CriteriaInput& in, double tol) {
  CriteriaReport rep;
  if (in.model == "hyperbolic")
    rep = hyperbolic_criteria(in, tol);
  else if (in.model == "sol3")
    rep = sol3_criteria(in, tol);
  else if (in.model == "su2")
    rep = su2_criteria(in, tol);
  else
    throw ParameterError("closed-form criteria exist for hyperbolic, sol3 and su2 only (got '" + in.model + "')");
  if (rep.evaluated) rep.agree = rep.proposition_verdict == rep.engine_class;
  return rep;
}

}  // namespace gnat
