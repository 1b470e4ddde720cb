#pragma once
#include <string>
#include <vector>

#include "gnat/errors.hpp"
#include "gnat/frame_models.hpp"

namespace gnat {

// g-natural metric on the unit tangent bundle, determined by four constants.
template <class T>
struct UnitBundleParams {
  T a{1}, b{0}, c{0}, d{0};

  T alpha() const { return a * (a + c) - b * b; }
  T phi() const { return a * (a + c + d) - b * b; }
  T varphi() const { return a + c + d; }

  void validate() const {
    if (alpha() == T(0)) throw DegenerateMetricError("unit bundle metric: alpha = a(a+c) - b^2 vanishes");
    if (phi() == T(0)) throw DegenerateMetricError("unit bundle metric: phi = a(a+c+d) - b^2 vanishes");
    if (varphi() == T(0)) throw DegenerateMetricError("unit bundle metric: varphi = a+c+d vanishes");
  }
};

template <class T>
void require_unit_field(const FrameModel<T>& M, const FVec<T>& U, double tol = 1e-12) {
  if (static_cast<int>(U.size()) != M.m)
    throw DimensionError("field has " + std::to_string(U.size()) + " coefficients, model dimension is " +
                         std::to_string(M.m));
  if (!scalar_is_zero(dot(U, U) - T(1), 1.0, tol)) throw DomainError("field is not a unit field");
}

template <class T>
struct T1MTension {
  FVec<T> tau_h, tau_v;
  DerivedOperators<T> ops;
  T gQ{0}, gL{0}, gS{0};  // g(QU,U), g(Lap U,U), g(S(U),U)
  double scale = 0.0;     // magnitude of the largest additive term
};

namespace detail {
// Accumulates a sum of vectors together with the magnitude of its largest term.
template <class T>
struct Acc {
  FVec<T> v;
  double scale = 0.0;
  explicit Acc(int m) : v(zeros<T>(m)) {}
  void add(const FVec<T>& t) {
    v = v + t;
    scale = std::max(scale, max_abs(t));
  }
};
}  // namespace detail

template <class T>
T1MTension<T> t1m_tension(const FrameModel<T>& M, const FVec<T>& U, const UnitBundleParams<T>& p) {
  require_unit_field(M, U);
  p.validate();
  T1MTension<T> r;
  r.ops = derived_operators(M, U);
  const auto& o = r.ops;
  r.gQ = dot(o.QU, U);
  r.gL = dot(o.laplacian_U, U);
  r.gS = dot(o.S_U, U);
  const T al = p.alpha(), vp = p.varphi();
  const T &a = p.a, &b = p.b, &d = p.d;

  detail::Acc<T> h(M.m);
  h.add(scale(a * b / al, o.QU));
  h.add(scale(-a * a / al, o.S_U));
  h.add(scale(-a * d / al, o.nabla_U_U));
  h.add(scale(-b * (a * d + b * b) / (al * vp) * r.gQ, U));
  h.add(scale(-b / vp * r.gL, U));
  h.add(scale(d / vp * o.div_U, U));
  h.add(scale(a * (a * d + b * b) / (al * vp) * r.gS, U));

  detail::Acc<T> v(M.m);
  v.add(-o.laplacian_U);
  v.add(scale(-b * b / al, o.QU));
  v.add(scale(a * b / al, o.S_U));
  v.add(scale(b * d / al, o.nabla_U_U));
  v.add(scale(b * b / al * r.gQ, U));
  v.add(scale(r.gL, U));
  v.add(scale(-a * b / al * r.gS, U));

  r.tau_h = h.v;
  r.tau_v = v.v;
  r.scale = std::max(h.scale, v.scale);
  return r;
}

template <class T>
struct T1MBitension {
  T1MTension<T> tension;
  FVec<T> T_U;
  FVec<T> grad_term;   // grad[g(tau_h,U)]; identically zero for constant-coefficient fields
  double scale = 0.0;  // magnitude of the largest additive term of T(U)
};

// Gradient of the function g(tau_h(U), U). With constant frame coefficients the function is
// constant, so the gradient vanishes; kept as a separate term so the formula stays complete.
template <class T>
FVec<T> grad_of_constant_pairing(const FrameModel<T>& M) {
  return zeros<T>(M.m);
}

template <class T>
T1MBitension<T> t1m_bitension_tensor(const FrameModel<T>& M, const FVec<T>& U, const UnitBundleParams<T>& p) {
  T1MBitension<T> r;
  r.tension = t1m_tension(M, U, p);
  const auto& tn = r.tension;
  const auto& o = tn.ops;
  const FVec<T>& th = tn.tau_h;
  const FVec<T>& tv = tn.tau_v;
  const T al = p.alpha(), vp = p.varphi();
  const T &a = p.a, &b = p.b, &c = p.c, &d = p.d;
  const T g_th_U = dot(th, U);

  detail::Acc<T> acc(M.m);
  for (int i = 0; i < M.m; ++i) {
    const FVec<T> e = basis<T>(M.m, i);
    acc.add(scale(-T(2) * a, curvature(M, e, th, nabla(M, e, U))));
    acc.add(scale(-a, nabla_R(M, e, e, th, U)));
    acc.add(scale(-a, curvature(M, e, nabla(M, e, th), U)));
    acc.add(scale(-d * dot(nabla(M, e, U), th), e));
  }
  acc.add(scale(d, nabla(M, U, th)));
  acc.add(scale(b, ricci_operator(M, th)));
  const T coef_h = -b * d / vp * tn.gQ + b * d / vp * tn.gL + (a + c) * d / vp * o.div_U + a * d / vp * tn.gS +
                   d * g_th_U;
  acc.add(scale(coef_h, th));
  acc.add(scale(a * a * d / al * g_th_U, o.S_U));
  acc.add(scale(-a * b * d / al * g_th_U, o.QU));
  acc.add(scale(-a, rough_laplacian(M, tv)));
  acc.add(scale(-b, rough_laplacian(M, th)));
  const T coef_v = b * b / vp * tn.gQ + (al + a * d) / vp * tn.gL - a * b / vp * tn.gS + b * d / vp * o.div_U;
  acc.add(scale(coef_v, tv));
  r.grad_term = grad_of_constant_pairing(M);
  acc.add(scale(-d, r.grad_term));
  acc.add(scale(a * d * d / al * g_th_U, o.nabla_U_U));

  r.T_U = acc.v;
  r.scale = std::max(acc.scale, tn.scale);
  return r;
}

enum class UnitClass { HarmonicMap, HarmonicUnitFieldOnly, ProperGBiharmonic, NotBiharmonic };
std::string to_string(UnitClass c);

// Lap U parallel to U (U unit): Lap U - g(Lap U, U) U = 0.
template <class T>
bool collinear_with_unit(const FVec<T>& X, const FVec<T>& U, double tol) {
  const FVec<T> perp = X - scale(dot(X, U), U);
  return vec_is_zero(perp, max_abs(X), tol);
}

template <class T>
struct UnitFieldReport {
  T1MBitension<T> bitension;
  bool tension_zero = false;
  bool T_zero = false;
  bool harmonic_unit_field = false;
  UnitClass classification = UnitClass::NotBiharmonic;
};

template <class T>
UnitFieldReport<T> classify_unit(const FrameModel<T>& M, const FVec<T>& U, const UnitBundleParams<T>& p,
                                 double tol = 1e-9) {
  UnitFieldReport<T> r;
  r.bitension = t1m_bitension_tensor(M, U, p);
  const auto& tn = r.bitension.tension;
  r.tension_zero = vec_is_zero(tn.tau_h, tn.scale, tol) && vec_is_zero(tn.tau_v, tn.scale, tol);
  r.T_zero = vec_is_zero(r.bitension.T_U, r.bitension.scale, tol);
  r.harmonic_unit_field = collinear_with_unit(tn.ops.laplacian_U, U, tol);
  if (r.tension_zero)
    r.classification = UnitClass::HarmonicMap;
  else if (r.T_zero)
    r.classification = UnitClass::ProperGBiharmonic;
  else if (r.harmonic_unit_field)
    r.classification = UnitClass::HarmonicUnitFieldOnly;
  else
    r.classification = UnitClass::NotBiharmonic;
  return r;
}

// ---- special cases -------------------------------------------------------------------------

enum class SpecialKind { KKMetric, GeodesicConstCurv, Killing, Reeb };
std::string to_string(SpecialKind k);
SpecialKind special_kind_from_string(const std::string& s);

template <class T>
struct SpecialResidual {
  SpecialKind kind = SpecialKind::KKMetric;
  FVec<T> residual;
  double scale = 0.0;
  bool zero = false;
  std::vector<std::string> failed_premises;  // empty when every premise holds
  double sectional_curvature = 0.0;          // geodesic_constcurv only
};

// Constant sectional curvature K if R(X,Y)Z = K(g(Y,Z)X - g(X,Z)Y) on the frame; throws otherwise.
template <class T>
bool constant_curvature(const FrameModel<T>& M, T& K, double tol) {
  if (M.m < 2) return false;
  K = M.Curv(0, 1, 1, 0);
  double sc = 0.0;
  for (const auto& x : M.curv) sc = std::max(sc, magnitude(x));
  for (int i = 0; i < M.m; ++i)
    for (int j = 0; j < M.m; ++j)
      for (int k = 0; k < M.m; ++k)
        for (int l = 0; l < M.m; ++l) {
          T expect = T(0);
          if (j == k && i == l) expect += K;
          if (i == k && j == l) expect -= K;
          if (!scalar_is_zero(M.Curv(i, j, k, l) - expect, sc, tol)) return false;
        }
  return true;
}

template <class T>
bool is_killing(const FrameModel<T>& M, const FVec<T>& U, double tol) {
  double sc = 0.0;
  for (const auto& x : M.conn) sc = std::max(sc, magnitude(x));
  for (int i = 0; i < M.m; ++i)
    for (int j = 0; j < M.m; ++j) {
      const T s = dot(nabla(M, basis<T>(M.m, i), U), basis<T>(M.m, j)) +
                  dot(nabla(M, basis<T>(M.m, j), U), basis<T>(M.m, i));
      if (!scalar_is_zero(s, sc, tol)) return false;
    }
  return true;
}

// Left-minus-right side of the special-case characterizations. With enforce_premises, a failed
// premise raises NotApplicableError naming it; otherwise premises are only reported.
template <class T>
SpecialResidual<T> special_case_residual(SpecialKind kind, const FrameModel<T>& M, const FVec<T>& U,
                                         const UnitBundleParams<T>& p, bool enforce_premises = true,
                                         double tol = 1e-9) {
  require_unit_field(M, U);
  p.validate();
  SpecialResidual<T> r;
  r.kind = kind;
  const DerivedOperators<T> o = derived_operators(M, U);
  const T gL = dot(o.laplacian_U, U);
  auto premise = [&](bool ok, const std::string& what) {
    if (!ok) r.failed_premises.push_back(what);
  };
  detail::Acc<T> acc(M.m);
  switch (kind) {
    case SpecialKind::KKMetric: {
      premise(p.b == T(0) || scalar_is_zero(p.b, 1.0, tol), "b = 0");
      premise(p.d == T(0) || scalar_is_zero(p.d, 1.0, tol), "d = 0");
      const FVec<T> SU = o.S_U;
      acc.add(scale(p.a / (p.a + p.c), curvature_sum(M, U, SU)));
      const FVec<T> LU = o.laplacian_U;
      acc.add(rough_laplacian(M, LU));
      acc.add(-rough_laplacian(M, scale(gL, U)));
      acc.add(scale(-gL, LU));
      acc.add(scale(gL * gL, U));
      break;
    }
    case SpecialKind::GeodesicConstCurv: {
      T K(0);
      const bool cc = constant_curvature(M, K, tol);
      premise(cc, "constant sectional curvature");
      premise(scalar_is_zero(p.b, 1.0, tol), "b = 0");
      premise(cc && scalar_is_zero(p.d + p.a * K, magnitude(p.a * K) + magnitude(p.d), tol),
              "d = -a K with K the sectional curvature");
      premise(vec_is_zero(o.nabla_U_U, 1.0, tol), "U geodesic (nabla_U U = 0)");
      r.sectional_curvature = to_double(K);
      if (enforce_premises && !r.failed_premises.empty()) break;
      const T1MTension<T> tn = t1m_tension(M, U, p);
      acc.add(scale(T(2) * K, nabla(M, U, tn.tau_h)));
      acc.add(scale(T(2) * K * o.div_U, tn.tau_h));
      acc.add(scale(K * (p.a + p.c) / p.varphi() * o.div_U, tn.tau_h));
      acc.add(-rough_laplacian(M, tn.tau_v));
      acc.add(scale(gL, tn.tau_v));
      break;
    }
    case SpecialKind::Killing:
    case SpecialKind::Reeb: {
      premise(scalar_is_zero(p.b, 1.0, tol), "b = 0");
      if (kind == SpecialKind::Killing) premise(is_killing(M, U, tol), "U is a Killing field");
      premise(vec_is_zero(o.S_U, 1.0, tol), "S(U) = 0");
      premise(!collinear_with_unit(o.QU, U, tol), "QU and U not collinear");
      const FVec<T> AU = o.QU - scale(dot(o.QU, U), U);
      acc.add(rough_laplacian(M, AU));
      acc.add(scale(-o.grad_norm_sq, AU));
      break;
    }
  }
  if (enforce_premises && !r.failed_premises.empty()) {
    std::string msg = "special case " + to_string(kind) + " not applicable; failed premise: ";
    for (std::size_t i = 0; i < r.failed_premises.size(); ++i)
      msg += (i ? "; " : "") + r.failed_premises[i];
    throw NotApplicableError(msg);
  }
  r.residual = acc.v;
  r.scale = acc.scale;
  r.zero = vec_is_zero(r.residual, r.scale, tol);
  return r;
}

// ---- closed-form criteria of the example propositions (floating point) ------------------------

struct CriterionBranch {
  std::string field;      // "e1", "e2", "e3", "V"
  std::string name;       // branch identifier
  std::string expected;   // "harmonic_map" | "proper_g_biharmonic"
  std::string condition;  // human-readable parameter condition
  bool admissible = true;
  std::string note;
  // Parameter set realizing the branch (when constructed) and the engine cross-check.
  UnitBundleParams<double> params;
  std::vector<double> model_params;
  double T_norm = 0.0, T_scale = 0.0;
  double criterion_residual = 0.0;  // residual of the proposition's own equation
  std::string engine_class;
  bool engine_agrees = false;
};

struct CriteriaReport {
  std::string model;
  std::vector<CriterionBranch> branches;
  // Evaluation at user-supplied parameters: the proposition's verdict vs the engine.
  std::string field;
  std::string proposition_verdict;  // "harmonic_map" | "proper_g_biharmonic" | "not_biharmonic"
  std::string matched_branch;
  std::string engine_class;
  bool agree = false;
  bool evaluated = false;
};

struct CriteriaInput {
  std::string model;  // hyperbolic | sol3 | su2
  std::string field;  // sol3: e1/e2/e3, su2: e1/e2/e3; hyperbolic: V (ignored)
  UnitBundleParams<double> params;
  int n = 3;             // hyperbolic dimension
  double k = 1.0;        // hyperbolic
  double sigma = 2.0;    // su2
  double lambda3 = 1.0;  // su2: lambda1 = lambda2 = sigma * lambda3
  bool evaluate = true;  // also evaluate the stated verdict at `params`
};

CriteriaReport closed_form_criteria(const CriteriaInput& in, double tol = 1e-9);

// Stated hyperbolic formula b = (2 alpha/d - a) k - alpha/(a k) with alpha = a(a+c) - b^2, solved
// for b given (a, c, d, k); returns the real solutions.
std::vector<double> hyperbolic_b_solutions(double a, double c, double d, double k);
// The bracket (-2a + a^2 d/alpha) k^2 + (abd/alpha) k + d of the stated biharmonicity condition.
double hyperbolic_bracket(const UnitBundleParams<double>& p, double k);
// Stated SU(2) quadratic sigma^2 - (1 - ad/alpha) sigma - (-1 + ad/(2 alpha)).
double su2_quadratic(double sigma, double ad_over_alpha);
// Stated relation ad = 2(sigma^2 - sigma + 1)/(1 - 2 sigma) alpha, returned as ad/alpha.
double su2_ad_over_alpha(double sigma);

}  // namespace gnat
