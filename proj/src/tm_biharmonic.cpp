#include "gnat/tm_biharmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gnat/errors.hpp"
#include "gnat/parallel.hpp"

namespace gnat {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

void validate(const ParallelFieldSpec& spec) {
  if (spec.m < 1) throw ParameterError("base dimension m must be >= 1, got " + std::to_string(spec.m));
  if (!(spec.rho >= 0.0) || !std::isfinite(spec.rho))
    throw ParameterError("rho must be a finite nonnegative number, got " + num(spec.rho));
}

const char* to_string(ParallelClass c) {
  switch (c) {
    case ParallelClass::harmonic_map: return "harmonic_map";
    case ParallelClass::proper_biharmonic: return "proper_biharmonic";
    case ParallelClass::biharmonic_only_trivially: return "biharmonic_only_trivially";
    case ParallelClass::not_biharmonic: return "not_biharmonic";
  }
  return "?";
}

Tension tension_from_coeffs(const ConnectionCoeffs& c, const ParallelFieldSpec& spec) {
  const double m = spec.m, rho = spec.rho;
  Tension t;
  t.c_h = 2.0 * c.a2 + m * c.a4 + rho * c.a5;
  t.c_v = 2.0 * c.b3 + m * c.b5 + rho * c.b6;
  t.scale_h = abs_sum({2.0 * c.a2, m * c.a4, rho * c.a5});
  t.scale_v = abs_sum({2.0 * c.b3, m * c.b5, rho * c.b6});
  return t;
}

Tension tension_parallel(const GNaturalMetric& g, const ParallelFieldSpec& spec) {
  validate(spec);
  return tension_from_coeffs(connection_coeffs(g, spec.rho), spec);
}

BitensionResult bitension_from_coeffs(const CoeffsT<Dual>& cd, const ParallelFieldSpec& spec,
                                      double tol) {
  validate(spec);
  const ConnectionCoeffs c = values_of(cd);
  const ConnectionCoeffs dc = derivatives_of(cd);
  const double m = spec.m, rho = spec.rho;
  const Tension ten = tension_from_coeffs(c, spec);
  const double ch = ten.c_h, cv = ten.c_v;
  // t-derivatives at rho of the tension factors a(t) = 2A2 + m A4 + t A5, b(t) = 2B3 + m B5 + t B6.
  const double a_prime = 2.0 * dc.a2 + m * dc.a4 + c.a5 + rho * dc.a5;
  const double b_prime = 2.0 * dc.b3 + m * dc.b5 + c.b6 + rho * dc.b6;

  const double h[] = {rho * ch * ch * (2.0 * c.a2 + c.a4 + rho * c.a5),
                      2.0 * rho * ch * cv * (c.c2 + c.c3 + c.c5 + rho * c.c6),
                      rho * cv * cv * (2.0 * c.e1 + c.e2 + rho * c.e3), ch * cv,
                      2.0 * rho * cv * a_prime};
  const double v[] = {rho * ch * ch * (2.0 * c.b3 + c.b5 + rho * c.b6),
                      2.0 * rho * ch * cv * (c.d2 + c.d3 + c.d5 + rho * c.d6),
                      rho * cv * cv * (2.0 * c.f1 + c.f2 + rho * c.f3), cv * cv,
                      2.0 * rho * cv * b_prime};

  BitensionResult r;
  r.c_h = ch;
  r.c_v = cv;
  for (double x : h) {
    r.tau2h_factor -= x;
    r.scale_h += std::abs(x);
  }
  for (double x : v) {
    r.tau2v_factor -= x;
    r.scale_v += std::abs(x);
  }

  const bool harmonic = is_zero(ch, ten.scale_h, tol) && is_zero(cv, ten.scale_v, tol);
  const bool bih = is_zero(r.tau2h_factor, r.scale_h, tol) && is_zero(r.tau2v_factor, r.scale_v, tol);
  if (harmonic)
    r.classification = ParallelClass::harmonic_map;
  else if (rho == 0.0)
    r.classification = ParallelClass::biharmonic_only_trivially;
  else
    r.classification = bih ? ParallelClass::proper_biharmonic : ParallelClass::not_biharmonic;
  return r;
}

BitensionResult bitension_parallel(const GNaturalMetric& g, const ParallelFieldSpec& spec,
                                   double tol) {
  validate(spec);
  return bitension_from_coeffs(connection_coeffs_dual(g, spec.rho), spec, tol);
}

ProofPathResult proof_path_bitension(const GNaturalMetric& g, const ParallelFieldSpec& spec) {
  validate(spec);
  if (!(spec.rho > 0.0))
    throw NotApplicableError("proof-path bitension needs rho > 0 (V = 0 has no direction)");
  const int m = spec.m;
  const CoeffsT<Dual> cd = connection_coeffs_dual(g, spec.rho);
  const ConnectionCoeffs c = values_of(cd);
  const CurvatureOracle flat = CurvatureOracle::flat();

  std::vector<Vec> e(m, Vec::Zero(m));
  for (int i = 0; i < m; ++i) e[i](i) = 1.0;
  const double norm_v = std::sqrt(spec.rho);
  const Vec V = norm_v * e[0];

  // Tension of the section: traces of A and B over the frame.
  Vec tau_h = Vec::Zero(m), tau_v = Vec::Zero(m);
  for (int i = 0; i < m; ++i) {
    tau_h += f_tensor_eval(FTensorKind::A, c, V, e[i], e[i], flat);
    tau_v += f_tensor_eval(FTensorKind::B, c, V, e[i], e[i], flat);
  }

  const PFormPoint pa{cd.a2, cd.a2, cd.a4, cd.a5};
  const PFormPoint pb{cd.b3, cd.b3, cd.b5, cd.b6};
  Vec t2h = f_tensor_eval(FTensorKind::A, c, V, tau_h, tau_h, flat) +
            2.0 * f_tensor_eval(FTensorKind::C, c, V, tau_h, tau_v, flat) +
            f_tensor_eval(FTensorKind::E, c, V, tau_v, tau_v, flat);
  Vec t2v = f_tensor_eval(FTensorKind::B, c, V, tau_h, tau_h, flat) +
            2.0 * f_tensor_eval(FTensorKind::D, c, V, tau_h, tau_v, flat) +
            f_tensor_eval(FTensorKind::F, c, V, tau_v, tau_v, flat);
  for (int i = 0; i < m; ++i) {
    t2h += d_P_eval(pa, V, e[i], e[i], tau_v);
    t2v += d_P_eval(pb, V, e[i], e[i], tau_v);
  }
  t2h = -t2h;
  t2v = -t2v;

  ProofPathResult r;
  r.tau2h_factor = t2h(0) / norm_v;
  r.tau2v_factor = t2v(0) / norm_v;
  r.off_axis_h = m > 1 ? t2h.tail(m - 1).norm() : 0.0;
  r.off_axis_v = m > 1 ? t2v.tail(m - 1).norm() : 0.0;
  return r;
}

namespace {

struct KKTypeJets {
  Jet2 a1, b1, s, bb;
};

KKTypeJets kk_type_jets(const GNaturalMetric& g, double rho, double tol) {
  if (!family_holds(g, FamilyTag::kaluza_klein_type))
    throw NotApplicableError("Kaluza-Klein-type criterion needs alpha2 = beta2 = 0 identically");
  const Jet2 b1 = eval_jet2(g.beta1, rho), b3 = eval_jet2(g.beta3, rho);
  const Jet2 bb = b1 + b3;
  if (!is_zero(bb.value, std::abs(b1.value) + std::abs(b3.value), tol))
    throw NotApplicableError("Kaluza-Klein-type criterion needs (beta1+beta3)(rho) = 0, got " +
                             num(bb.value));
  if (!is_zero(bb.d1, std::abs(b1.d1) + std::abs(b3.d1), tol))
    throw NotApplicableError("Kaluza-Klein-type criterion needs (beta1+beta3)'(rho) = 0, got " +
                             num(bb.d1));
  const Jet2 a1 = eval_jet2(g.alpha1, rho);
  const Jet2 s = a1 + eval_jet2(g.alpha3, rho);
  return {a1, b1, s, bb};
}

}  // namespace

ScalarWithScale kk_type_lhs_scaled(const GNaturalMetric& g, double rho) {
  const KKTypeJets j = kk_type_jets(g, rho, kDefaultTolerance);
  const double a1 = j.a1.value, da1 = j.a1.d1;
  const double b1 = j.b1.value, db1 = j.b1.d1;
  const double phi1 = a1 + rho * b1;
  const double dphi1 = da1 + b1 + rho * db1;
  if (a1 == 0.0 || phi1 == 0.0)
    throw DegenerateMetricError("Kaluza-Klein-type criterion needs alpha1(rho) != 0 and phi1(rho) != 0");
  const double terms[] = {2.0 * rho * da1 / a1, rho * (b1 - da1) / phi1,
                          rho * rho * (a1 * db1 - 2.0 * da1 * b1) / (phi1 * a1),
                          2.0 * rho * dphi1 / phi1, -1.0};
  double bracket = 0.0, bracket_scale = 0.0;
  for (double x : terms) {
    bracket += x;
    bracket_scale += std::abs(x);
  }
  const double sp = j.s.d1, spp = j.s.d2;
  return {sp * bracket - 2.0 * rho * spp, std::abs(sp) * bracket_scale + std::abs(2.0 * rho * spp)};
}

double kk_type_lhs(const GNaturalMetric& g, double rho) { return kk_type_lhs_scaled(g, rho).value; }

ScalarWithScale kk_type_residual(const GNaturalMetric& g, const ParallelFieldSpec& spec) {
  validate(spec);
  const double rho = spec.rho;
  const KKTypeJets j = kk_type_jets(g, rho, kDefaultTolerance);
  const ConnectionCoeffs c = connection_coeffs(g, rho);
  const double phi1 = j.a1.value + rho * j.b1.value;
  const double dphi1 = j.a1.d1 + j.b1.value + rho * j.b1.d1;
  const double X = 2.0 * c.f1 + c.f2 + rho * c.f3;
  const double sp = j.s.d1, spp = j.s.d2;
  const double terms[] = {-sp * rho * X, sp * 2.0 * rho * dphi1 / phi1, -sp, -2.0 * rho * spp,
                          -(2.0 * rho * rho / spec.m) * j.bb.d2};
  ScalarWithScale r;
  for (double x : terms) {
    r.value += x;
    r.scale += std::abs(x);
  }
  return r;
}

ParallelClassReport classify_parallel(const GNaturalMetric& g, const ParallelFieldSpec& spec,
                                      double tol) {
  ParallelClassReport rep;
  rep.bitension = bitension_parallel(g, spec, tol);
  try {
    const ScalarWithScale lhs = kk_type_lhs_scaled(g, spec.rho);
    rep.kk_type_applicable = true;
    rep.stated_lhs = lhs.value;
    rep.s_prime = (eval_jet2(g.alpha1, spec.rho) + eval_jet2(g.alpha3, spec.rho)).d1;
    if (is_zero(rep.s_prime, 0.0, tol))
      rep.stated_classification = ParallelClass::harmonic_map;
    else if (spec.rho == 0.0)
      rep.stated_classification = ParallelClass::biharmonic_only_trivially;
    else if (is_zero(lhs.value, lhs.scale, tol))
      rep.stated_classification = ParallelClass::proper_biharmonic;
    else
      rep.stated_classification = ParallelClass::not_biharmonic;
    rep.stated_criterion_agrees = rep.stated_classification == rep.bitension.classification;
  } catch (const NotApplicableError&) {
    rep.kk_type_applicable = false;
  }
  return rep;
}

GResidual g_biharmonic_residual(const GNaturalMetric& g, const ParallelFieldSpec& spec, double tol) {
  const BitensionResult b = bitension_parallel(g, spec, tol);
  const DerivedQuantities q = derived_quantities(g, spec.rho);
  GResidual r;
  r.residual = q.phi1.value * b.tau2v_factor + q.phi2.value * b.tau2h_factor;
  r.scale = std::abs(q.phi1.value) * b.scale_v + std::abs(q.phi2.value) * b.scale_h;
  r.is_g_biharmonic = is_zero(r.residual, r.scale, tol);
  return r;
}

// ---- lambda family -------------------------------------------------------------------------

LambdaFamily lambda_family_build(const SmoothFn& lambda, double K, double eta, int m) {
  if (K == 0.0 || !std::isfinite(K)) throw ParameterError("lambda family: K must be nonzero");
  if (!(eta > 0.0)) throw ParameterError("lambda family: eta must be positive");
  if (m < 1) throw ParameterError("lambda family: m must be >= 1");

  Jet2 at0;
  try {
    at0 = eval_jet2(lambda, 0.0);
  } catch (const DomainError& e) {
    throw ParameterError(std::string("lambda family: lambda(t)/t needs a finite limit at 0: ") +
                         e.what());
  }
  if (std::abs(at0.value) > 1e-14)
    throw ParameterError("lambda family: lambda(0) must vanish so that lambda(t)/t has a limit, got " +
                         num(at0.value));

  // Positivity on a geometric probe grid of (0, 1000 eta].
  for (int k = 0; k <= 200; ++k) {
    const double t = eta * std::pow(10.0, -6.0 + 9.0 * k / 200.0);
    double v;
    try {
      v = lambda(t);
    } catch (const DomainError& e) {
      throw ParameterError(std::string("lambda family: lambda not defined on (0, inf): ") + e.what());
    }
    if (!(v > 0.0))
      throw ParameterError("lambda family: lambda must be positive on (0, inf), lambda(" + num(t) +
                           ") = " + num(v));
  }

  const SmoothFn t = SmoothFn::identity();
  const SmoothFn dlambda = derivative(lambda);
  const SmoothFn w = lambda + t * dlambda;  // lambda + t lambda'

  // sgn(lambda + t lambda') must be well defined on (0, eta].
  double w_sign = 0.0;
  for (int k = 1; k <= 400; ++k) {
    const double tk = eta * k / 400.0;
    const double l = lambda(tk), tl = tk * dlambda(tk);
    const double wk = l + tl;
    if (is_zero(wk, std::abs(l) + std::abs(tl), 1e-12))
      throw ConstructionError("lambda family: lambda + t lambda' vanishes at t = " + num(tk) +
                              " in (0, eta]; sgn is ambiguous");
    if (w_sign == 0.0)
      w_sign = sign_of(wk);
    else if (sign_of(wk) != w_sign)
      throw ConstructionError("lambda family: lambda + t lambda' changes sign in (0, eta] near t = " +
                              num(tk));
  }

  const double sK = sign_of(K);
  const SmoothFn main13 = K * SmoothFn::pow(t * lambda, 2, m);
  const SmoothFn main2 = (2.0 * K / m) * SmoothFn::product({w, SmoothFn::pow(t, 2 - m, m),
                                                             SmoothFn::pow(lambda, 2 - 2 * m, m)});

  LambdaFamily fam;
  fam.lambda = lambda;
  fam.K = K;
  fam.eta = eta;
  fam.m = m;
  fam.sign_alpha13 = sK;
  fam.sign_alpha2 = sK * w_sign;
  fam.alpha13 = SmoothFn::blend(eta, SmoothFn::constant(fam.sign_alpha13), main13);
  fam.alpha2 = SmoothFn::blend(eta, SmoothFn::constant(fam.sign_alpha2), main2);
  const SmoothFn z = SmoothFn::constant(0.0);
  fam.metric = GNaturalMetric::make(z, fam.alpha2, fam.alpha13, z, z, z, FamilyTag::lambda_family);
  return fam;
}

LambdaNotations lambda_notations(const LambdaFamily& fam, double t) {
  const Jet2 s = eval_jet2(fam.alpha13, t);
  const Jet2 a = eval_jet2(fam.alpha2, t);
  if (a.value == 0.0) throw DegenerateMetricError("alpha2(" + num(t) + ") = 0");
  const double a2 = a.value * a.value;
  LambdaNotations n;
  n.lambda = s.d1 / a.value;
  n.dlambda = (s.d2 * a.value - s.d1 * a.d1) / a2;
  n.mu = s.value / a.value;
  n.dmu = (s.d1 * a.value - s.value * a.d1) / a2;
  n.nu = a.d1 / a.value;
  return n;
}

ScalarWithScale g3_residual(const LambdaFamily& fam, double t) {
  const Jet2 s = eval_jet2(fam.alpha13, t);
  const Jet2 a = eval_jet2(fam.alpha2, t);
  const double m = fam.m;
  // alpha2^3 [2 mu (lambda + t lambda') - m t lambda^2] with mu = s/a, lambda = s'/a.
  const double terms[] = {2.0 * s.value * s.d1 * a.value, 2.0 * t * s.value * s.d2 * a.value,
                          -2.0 * t * s.value * s.d1 * a.d1, -m * t * s.d1 * s.d1 * a.value};
  ScalarWithScale r;
  for (double x : terms) {
    r.value += x;
    r.scale += std::abs(x);
  }
  return r;
}

ScalarWithScale g9_bracket(const SmoothFn& lambda, int mi, double t) {
  const Jet2 j = eval_jet2(lambda, t);
  const double l = j.value, l1 = j.d1, l2 = j.d2, m = mi;
  const double w = l + t * l1;
  const double dw = 2.0 * l1 + t * l2;
  const double l3 = l * l * l;
  const double terms[] = {
      t * t * w * w,
      -t * (1.0 + t) * l3,
      -3.0 * t * l * l * l1,
      t * t * l3 * dw,
      3.0 * m * l * l * t * t * l2,
      3.0 * m * l * l * (4.0 / m - 1.0) * t * l * l1,
      3.0 * m * l * l * (2.0 / m - 2.0) * t * t * l1 * l1,
      3.0 * m * l * l * (2.0 / m - 1.0) * l * l,
      -m * l * (l * l + 2.0 * t * l * l1) * w,
      m * t * l3 * dw,
  };
  ScalarWithScale r;
  for (double x : terms) {
    r.value += x;
    r.scale += std::abs(x);
  }
  return r;
}

G9Result lambda_family_g9(const LambdaFamily& fam, double rho, double tol) {
  if (!(rho >= fam.eta))
    throw ParameterError("lambda family: rho must be >= eta = " + num(fam.eta) + ", got " + num(rho));
  G9Result r;
  const ScalarWithScale g9 = g9_bracket(fam.lambda, fam.m, rho);
  r.g9_value = g9.value;
  r.g9_scale = g9.scale;
  r.is_proper_g_biharmonic = !is_zero(g9.value, g9.scale, tol);

  const double m = fam.m;
  try {
    const LambdaNotations n = lambda_notations(fam, rho);
    r.tau2h_stated = m * n.lambda * (2.0 * n.mu * (n.lambda + rho * n.dlambda) - m * rho * n.lambda * n.lambda);
    const double dlm = n.dlambda * n.mu + n.lambda * n.dmu;
    r.g4_bracket = m * rho * rho * n.lambda * n.lambda - 2.0 * rho * (n.lambda * n.mu + dlm) +
                   m * n.lambda * (3.0 * n.mu * n.nu - 2.0 * n.dmu);
    r.tau2v_stated = m * n.lambda * n.mu * r.g4_bracket;
  } catch (const DegenerateMetricError&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.tau2h_stated = r.tau2v_stated = r.g4_bracket = nan;
  }
  try {
    const BitensionResult b = bitension_parallel(fam.metric, {fam.m, rho}, tol);
    r.tau2h_closed = b.tau2h_factor;
    r.tau2v_closed = b.tau2v_factor;
  } catch (const DegenerateMetricError&) {
    r.tau2h_closed = r.tau2v_closed = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

std::vector<double> exp_lambda_cubic_coefficients(double b, int mi) {
  const double m = mi;
  return {((2.0 * m - 11.0) * b - 1.0) * b, 2.0 * m * b * b + (5.0 * m - 21.0) * b + 2.0,
          7.0 * m * b + 17.0 * m - 20.0, -6.0 * m};
}

namespace {

double poly_eval(const std::vector<double>& c, double x) {
  double y = 0.0;
  for (double a : c) y = y * x + a;
  return y;
}
double poly_deriv(const std::vector<double>& c, double x) {
  double y = 0.0;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i) y = y * x + c[i] * static_cast<double>(n - 1 - i);
  return y;
}

}  // namespace

std::vector<double> exp_lambda_cubic(double a, double b, int m) {
  if (m < 1) throw ParameterError("exp_lambda_cubic: m must be >= 1");
  if (!(a > 0.0)) throw ParameterError("exp_lambda_cubic: a must be positive");
  std::vector<double> c = exp_lambda_cubic_coefficients(b, m);
  while (!c.empty() && c.front() == 0.0) c.erase(c.begin());
  if (c.empty()) throw ParameterError("exp_lambda_cubic: polynomial is identically zero");

  std::vector<double> real_roots;
  const std::size_t deg = c.size() - 1;
  if (deg == 1) {
    real_roots.push_back(-c[1] / c[0]);
  } else if (deg == 2) {
    const double A = c[0], B = c[1], C = c[2];
    const double disc = B * B - 4.0 * A * C;
    if (disc >= 0.0) {
      const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
      if (q != 0.0) {
        real_roots.push_back(q / A);
        real_roots.push_back(C / q);
      } else {
        real_roots.push_back(0.0);
      }
    }
  } else if (deg == 3) {
    Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
    comp(0, 0) = -c[1] / c[0];
    comp(0, 1) = -c[2] / c[0];
    comp(0, 2) = -c[3] / c[0];
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(comp, false);
    for (int i = 0; i < 3; ++i) {
      const auto z = es.eigenvalues()(i);
      if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z.real()))) real_roots.push_back(z.real());
    }
  }
  std::vector<double> out;
  for (double r : real_roots) {
    for (int it = 0; it < 3; ++it) {  // Newton polish
      const double d = poly_deriv(c, r);
      if (d == 0.0) break;
      r -= poly_eval(c, r) / d;
    }
    if (r > 0.0) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) { return std::abs(x - y) <= 1e-12 * (1.0 + std::abs(x)); }),
            out.end());
  return out;
}

// ---- scans ---------------------------------------------------------------------------------

ScanRoot bisect_root(const std::function<double(double)>& f, double lo, double hi, double xtol) {
  double flo = f(lo), fhi = f(hi);
  ScanRoot r;
  if (flo == 0.0) return {lo, lo, lo, 0.0};
  if (fhi == 0.0) return {hi, hi, hi, 0.0};
  if ((flo < 0.0) == (fhi < 0.0)) throw ParameterError("bisect_root: no sign change on bracket");
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return {mid, mid, mid, 0.0};
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  r.lo = lo;
  r.hi = hi;
  r.rho = 0.5 * (lo + hi);
  r.value = f(r.rho);
  return r;
}

ScanResult scan_parallel(const GNaturalMetric& g, int m, double rho_min, double rho_max, int steps,
                         unsigned jobs, double tol) {
  if (!(rho_min < rho_max)) throw ParameterError("scan: need rho_min < rho_max");
  if (!(rho_min >= 0.0)) throw ParameterError("scan: need rho_min >= 0");
  if (steps < 1) throw ParameterError("scan: need steps >= 1");
  validate({m, rho_min});

  ScanResult out;
  out.rows.resize(static_cast<std::size_t>(steps) + 1);
  parallel_for(out.rows.size(), jobs, [&](std::size_t k) {
    ScanRow& row = out.rows[k];
    row.rho = (k == static_cast<std::size_t>(steps))
                  ? rho_max
                  : rho_min + (rho_max - rho_min) * static_cast<double>(k) / steps;
    try {
      row.bitension = bitension_parallel(g, {m, row.rho}, tol);
      row.g_residual = g_biharmonic_residual(g, {m, row.rho}, tol);
    } catch (const PreconditionError& e) {
      row.ok = false;
      row.warning = e.what();
    }
    try {
      row.kk_lhs = kk_type_lhs(g, row.rho);
    } catch (const PreconditionError&) {
      row.kk_lhs.reset();
    }
  });

  bool any_lhs = false;
  for (const auto& r : out.rows) any_lhs = any_lhs || r.kk_lhs.has_value();
  out.root_function = any_lhs ? "kk_type_lhs" : "none";
  if (!any_lhs) return out;
  // (alpha1+alpha3) constant: condition 1 of the criterion holds everywhere; no isolated roots.
  out.lhs_identically_zero = std::all_of(out.rows.begin(), out.rows.end(),
                                         [](const ScanRow& r) { return !r.kk_lhs || *r.kk_lhs == 0.0; });
  if (out.lhs_identically_zero) return out;

  auto f = [&](double rho) { return kk_type_lhs(g, rho); };
  for (std::size_t k = 0; k < out.rows.size(); ++k) {
    const auto& r = out.rows[k];
    if (!r.kk_lhs) continue;
    if (*r.kk_lhs == 0.0) {
      out.roots.push_back({r.rho, r.rho, r.rho, 0.0});
      continue;
    }
    if (k + 1 >= out.rows.size()) continue;
    const auto& n = out.rows[k + 1];
    if (!n.kk_lhs || *n.kk_lhs == 0.0) continue;
    if ((*r.kk_lhs < 0.0) == (*n.kk_lhs < 0.0)) continue;
    try {
      out.roots.push_back(bisect_root(f, r.rho, n.rho, 1e-10));
    } catch (const PreconditionError&) {
      // LHS undefined inside the bracket; no root reported.
    }
  }
  return out;
}

}  // namespace gnat
