#include "gnat/gnatural.hpp"

#include <cmath>
#include <sstream>

#include "gnat/errors.hpp"
#include "gnat/tolerance.hpp"

namespace gnat {

const char* to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::generic: return "generic";
    case FamilyTag::sasaki: return "sasaki";
    case FamilyTag::kaluza_klein: return "kaluza_klein";
    case FamilyTag::kaluza_klein_type: return "kaluza_klein_type";
    case FamilyTag::lambda_family: return "lambda_family";
  }
  return "?";
}

FamilyTag family_from_string(const std::string& s) {
  if (s == "generic") return FamilyTag::generic;
  if (s == "sasaki") return FamilyTag::sasaki;
  if (s == "kaluza_klein") return FamilyTag::kaluza_klein;
  if (s == "kaluza_klein_type") return FamilyTag::kaluza_klein_type;
  if (s == "lambda_family" || s == "lambda") return FamilyTag::lambda_family;
  throw ParameterError("unknown metric family '" + s + "'");
}

const char* to_string(CertStatus s) { return s == CertStatus::verified ? "verified" : "violated"; }

GNaturalMetric GNaturalMetric::make(SmoothFn a1, SmoothFn a2, SmoothFn a3, SmoothFn b1,
                                    SmoothFn b2, SmoothFn b3, FamilyTag tag) {
  GNaturalMetric g{std::move(a1), std::move(a2), std::move(a3),
                   std::move(b1), std::move(b2), std::move(b3), tag};
  check_family(g);
  return g;
}

GNaturalMetric GNaturalMetric::sasaki() {
  const SmoothFn z = SmoothFn::constant(0.0);
  return make(SmoothFn::constant(1.0), z, z, z, z, z, FamilyTag::sasaki);
}

GNaturalMetric GNaturalMetric::kaluza_klein(SmoothFn alpha1, SmoothFn alpha3, SmoothFn beta1) {
  const SmoothFn z = SmoothFn::constant(0.0);
  SmoothFn b3 = beta1.is_constant() ? SmoothFn::constant(-beta1.constant_value()) : -beta1;
  return make(std::move(alpha1), z, std::move(alpha3), std::move(beta1), z, std::move(b3),
              FamilyTag::kaluza_klein);
}

GNaturalMetric GNaturalMetric::kaluza_klein_type(SmoothFn alpha1, SmoothFn alpha3, SmoothFn beta1,
                                                 SmoothFn beta3) {
  const SmoothFn z = SmoothFn::constant(0.0);
  return make(std::move(alpha1), z, std::move(alpha3), std::move(beta1), z, std::move(beta3),
              FamilyTag::kaluza_klein_type);
}

namespace {

// Probe points for "identically equal" tests of the family conditions.
const std::vector<double>& probe_points() {
  static const std::vector<double> pts = {0.0,  0.013, 0.1,  0.37, 0.5, 0.91, 1.0, 1.7,
                                          2.45, 3.3,   4.0,  5.2,  6.6, 8.1,  9.4, 12.5};
  return pts;
}

// f == c on the probe grid. Constant nodes are decided exactly; points outside the
// domain of f are skipped.
bool identically(const SmoothFn& f, double c) {
  if (f.is_constant()) return f.constant_value() == c;
  for (double t : probe_points()) {
    double v;
    try {
      v = f(t);
    } catch (const DomainError&) {
      continue;
    }
    if (!is_zero(v - c, std::abs(v) + std::abs(c), 1e-12)) return false;
  }
  return true;
}

bool identically_zero_sum(const SmoothFn& f, const SmoothFn& g) {
  if (f.is_constant() && g.is_constant()) return f.constant_value() + g.constant_value() == 0.0;
  for (double t : probe_points()) {
    double a, b;
    try {
      a = f(t);
      b = g(t);
    } catch (const DomainError&) {
      continue;
    }
    if (!is_zero(a + b, std::abs(a) + std::abs(b), 1e-12)) return false;
  }
  return true;
}

}  // namespace

bool family_holds(const GNaturalMetric& g, FamilyTag tag) {
  switch (tag) {
    case FamilyTag::generic: return true;
    case FamilyTag::sasaki:
      return identically(g.alpha1, 1.0) && identically(g.alpha2, 0.0) &&
             identically(g.alpha3, 0.0) && identically(g.beta1, 0.0) &&
             identically(g.beta2, 0.0) && identically(g.beta3, 0.0);
    case FamilyTag::kaluza_klein:
      return identically(g.alpha2, 0.0) && identically(g.beta2, 0.0) &&
             identically_zero_sum(g.beta1, g.beta3);
    case FamilyTag::kaluza_klein_type:
      return identically(g.alpha2, 0.0) && identically(g.beta2, 0.0);
    case FamilyTag::lambda_family:
      return identically(g.alpha1, 0.0) && identically(g.beta1, 0.0) &&
             identically(g.beta2, 0.0) && identically(g.beta3, 0.0);
  }
  return false;
}

void check_family(const GNaturalMetric& g) {
  if (!family_holds(g, g.family))
    throw ParameterError(std::string("metric functions are inconsistent with family tag '") +
                         to_string(g.family) + "'");
}

FamilyTag infer_family(const GNaturalMetric& g) {
  for (FamilyTag t : {FamilyTag::sasaki, FamilyTag::kaluza_klein, FamilyTag::kaluza_klein_type,
                      FamilyTag::lambda_family})
    if (family_holds(g, t)) return t;
  return FamilyTag::generic;
}

DerivedQuantities derived_quantities(const GNaturalMetric& g, double t) {
  const Jet2 a1 = eval_jet2(g.alpha1, t), a2 = eval_jet2(g.alpha2, t), a3 = eval_jet2(g.alpha3, t);
  const Jet2 b1 = eval_jet2(g.beta1, t), b2 = eval_jet2(g.beta2, t), b3 = eval_jet2(g.beta3, t);
  const Jet2 tt = Jet2::variable(t);
  DerivedQuantities q;
  q.phi1 = a1 + tt * b1;
  q.phi2 = a2 + tt * b2;
  q.phi3 = a3 + tt * b3;
  q.alpha = a1 * (a1 + a3) - a2 * a2;
  q.phi = q.phi1 * (q.phi1 + q.phi3) - q.phi2 * q.phi2;
  return q;
}

MetricClassification classify(const GNaturalMetric& g, double t_min, double t_max, int samples) {
  if (!(t_min >= 0.0) || !(t_min < t_max))
    throw ParameterError("classify: need 0 <= t_min < t_max");
  if (samples < 2) throw ParameterError("classify: need at least 2 samples");

  struct Cond {
    const char* name;
    bool strict_positive;  // Riemannian condition (> 0) vs. non-degeneracy (!= 0)
    bool violated = false;
    double prev = 0.0;
    bool has_prev = false;
  };
  Cond conds[] = {{"alpha", false}, {"phi", false},   {"alpha1", true},
                  {"phi1", true},   {"alpha>0", true}, {"phi>0", true}};

  MetricClassification out;
  for (int k = 0; k < samples; ++k) {
    const double t = (k == samples - 1) ? t_max : t_min + (t_max - t_min) * k / (samples - 1);
    const DerivedQuantities q = derived_quantities(g, t);
    const double a1 = g.alpha1(t), a2 = g.alpha2(t), a3 = g.alpha3(t);
    const double alpha_scale = std::abs(a1 * (a1 + a3)) + a2 * a2;
    const double phi_scale = std::abs(q.phi1.value * (q.phi1.value + q.phi3.value)) +
                             q.phi2.value * q.phi2.value;
    const double values[] = {q.alpha.value, q.phi.value,   a1,
                             q.phi1.value,  q.alpha.value, q.phi.value};
    const double scales[] = {alpha_scale, phi_scale, std::abs(a1),
                             std::abs(q.phi1.value), alpha_scale, phi_scale};
    for (int c = 0; c < 6; ++c) {
      Cond& cond = conds[c];
      const double v = values[c];
      const bool zero = is_zero(v, scales[c]);
      bool bad = cond.strict_positive ? (zero || v < 0.0) : zero;
      std::string label = cond.name;
      if (!bad && !cond.strict_positive && cond.has_prev && (cond.prev < 0.0) != (v < 0.0)) {
        bad = true;
        label += " (sign change)";
      }
      if (bad && !cond.violated) {
        cond.violated = true;
        out.violations.push_back({t, label, v});
      }
      if (!zero) {
        cond.prev = v;
        cond.has_prev = true;
      }
    }
  }
  if (conds[0].violated || conds[1].violated) out.nondegenerate_on_grid = CertStatus::violated;
  for (const Cond& c : conds)
    if (c.violated) out.riemannian_on_grid = CertStatus::violated;
  return out;
}

template <class S>
CoeffsT<S> coeffs_from_point(const MetricPoint<S>& p) {
  const S& t = p.t;
  const S &a1 = p.a1, &a2 = p.a2, &a3 = p.a3, &b1 = p.b1, &b2 = p.b2, &b3 = p.b3;
  const S &da1 = p.da1, &da2 = p.da2, &db1 = p.db1, &db2 = p.db2;
  const S s = a1 + a3, ds = p.da1 + p.da3;
  const S bb = b1 + b3, dbb = p.db1 + p.db3;
  const S p1 = a1 + t * b1, p2 = a2 + t * b2, p3 = a3 + t * b3, p13 = p1 + p3;
  const S al = a1 * s - a2 * a2;
  const S ph = p1 * p13 - p2 * p2;
  const S alph = al * ph;
  const S half_b2 = b2 / 2.0, half_bb = bb / 2.0;

  CoeffsT<S> c;
  c.a1 = -(a1 * a2) / (2.0 * al);
  c.a2 = (a2 * bb) / (2.0 * al);
  c.a3 = a2 * (a1 * (p1 * bb - p2 * b2) + a2 * (b1 * a2 - b2 * a1)) / alph;
  c.a4 = (p2 * ds) / ph;
  c.a5 = (al * p2 * dbb + bb * (a2 * (p2 * b2 - p1 * bb) + s * (a1 * b2 - a2 * b1))) / alph;

  c.b1 = (a2 * a2) / al;
  c.b2 = -(a1 * s) / (2.0 * al);
  c.b3 = -(s * bb) / (2.0 * al);
  c.b4 = a2 * (a2 * (p2 * b2 - p1 * bb) + s * (b2 * a1 - b1 * a2)) / alph;
  c.b5 = -(p13 * ds) / ph;
  c.b6 = (-(al * p13 * dbb) + bb * (s * (p13 * b1 - p2 * b2) + a2 * (a2 * bb - s * b2))) / alph;

  c.c1 = -(a1 * a1) / (2.0 * al);
  c.c2 = (a1 * bb) / (2.0 * al);  // sign confirmed against the Christoffel symbols of the metric
  c.c3 = (a1 * ds - a2 * (da2 - half_b2)) / al;
  c.c4 = a1 * (a2 * (a2 * b1 - a1 * b2) + a1 * (p1 * bb - p2 * b2)) / (2.0 * alph);
  c.c5 = (p1 * bb + p2 * (2.0 * da2 - b2)) / (2.0 * ph);
  c.c6 = (al * p1 * dbb + (a2 * (a1 * b2 - a2 * b1) + a1 * (p2 * b2 - bb * p1)) * (ds + half_bb)) /
             alph +
         ((a2 * (b1 * p13 - b2 * p2) - a1 * (b2 * s - a2 * bb)) * (da2 - half_b2)) / alph;

  c.d1 = (a1 * a2) / (2.0 * al);
  c.d2 = -(a2 * bb) / (2.0 * al);  // sign confirmed against the Christoffel symbols of the metric
  c.d3 = (-(a2 * ds) + s * (da2 - half_b2)) / al;
  c.d4 = a1 * (s * (a1 * b2 - a2 * b1) + a2 * (p2 * b2 - p1 * bb)) / (2.0 * alph);
  c.d5 = -(p2 * bb + p13 * (2.0 * da2 - b2)) / (2.0 * ph);
  c.d6 = (-(al * p2 * dbb) + (s * (a2 * b1 - a1 * b2) + a2 * (p1 * bb - p2 * b2)) * (ds + half_bb)) /
             alph +
         ((s * (b2 * p2 - b1 * p13) + a2 * (b2 * s - a2 * bb)) * (da2 - half_b2)) / alph;

  c.e1 = (a1 * (da2 + half_b2) - a2 * da1) / al;
  c.e2 = (p1 * b2 - p2 * (b1 - da1)) / ph;
  c.e3 = (al * (2.0 * p1 * db2 - p2 * db1) +
          2.0 * da1 * (a1 * (a2 * bb - b2 * s) + a2 * (b1 * p13 - b2 * p2))) /
             alph +
         ((2.0 * da2 + b2) * (a1 * (p2 * b2 - p1 * bb) + a2 * (a1 * b2 - a2 * b1))) / alph;

  c.f1 = (-(a2 * (da2 + half_b2)) + s * da1) / al;
  c.f2 = (p13 * (b1 - da1) - p2 * b2) / ph;
  c.f3 = (al * (p13 * db1 - 2.0 * p2 * db2) +
          2.0 * da1 * (a2 * (b2 * s - a2 * bb) + s * (b2 * p2 - b1 * p13))) /
             alph +
         ((2.0 * da2 + b2) * (a2 * (p1 * bb - p2 * b2) + s * (a2 * b1 - a1 * b2))) / alph;
  return c;
}

template CoeffsT<double> coeffs_from_point(const MetricPoint<double>&);
template CoeffsT<Dual> coeffs_from_point(const MetricPoint<Dual>&);

void require_nondegenerate(const GNaturalMetric& g, double rho) {
  const DerivedQuantities q = derived_quantities(g, rho);
  const double a1 = g.alpha1(rho), a2 = g.alpha2(rho), a3 = g.alpha3(rho);
  const double alpha_scale = std::abs(a1 * (a1 + a3)) + a2 * a2;
  const double phi_scale =
      std::abs(q.phi1.value * (q.phi1.value + q.phi3.value)) + q.phi2.value * q.phi2.value;
  std::ostringstream os;
  os.precision(17);
  if (is_zero(q.alpha.value, alpha_scale, 1e-12)) {
    os << "degenerate metric: alpha(" << rho << ") = " << q.alpha.value;
    throw DegenerateMetricError(os.str());
  }
  if (is_zero(q.phi.value, phi_scale, 1e-12)) {
    os << "degenerate metric: phi(" << rho << ") = " << q.phi.value;
    throw DegenerateMetricError(os.str());
  }
}

ConnectionCoeffs connection_coeffs(const GNaturalMetric& g, double rho) {
  require_nondegenerate(g, rho);
  const Jet2 a1 = eval_jet2(g.alpha1, rho), a2 = eval_jet2(g.alpha2, rho),
             a3 = eval_jet2(g.alpha3, rho);
  const Jet2 b1 = eval_jet2(g.beta1, rho), b2 = eval_jet2(g.beta2, rho),
             b3 = eval_jet2(g.beta3, rho);
  MetricPoint<double> p{rho,      a1.value, a2.value, a3.value, b1.value, b2.value, b3.value,
                        a1.d1,    a2.d1,    a3.d1,    b1.d1,    b2.d1,    b3.d1};
  return coeffs_from_point(p);
}

CoeffsT<Dual> connection_coeffs_dual(const GNaturalMetric& g, double rho) {
  require_nondegenerate(g, rho);
  const Jet2 a1 = eval_jet2(g.alpha1, rho), a2 = eval_jet2(g.alpha2, rho),
             a3 = eval_jet2(g.alpha3, rho);
  const Jet2 b1 = eval_jet2(g.beta1, rho), b2 = eval_jet2(g.beta2, rho),
             b3 = eval_jet2(g.beta3, rho);
  auto f = [](const Jet2& j) { return Dual{j.value, j.d1}; };
  auto df = [](const Jet2& j) { return Dual{j.d1, j.d2}; };
  MetricPoint<Dual> p{Dual{rho, 1.0}, f(a1),  f(a2),  f(a3),  f(b1),  f(b2),  f(b3),
                      df(a1),         df(a2), df(a3), df(b1), df(b2), df(b3)};
  return coeffs_from_point(p);
}

namespace {
template <class F>
ConnectionCoeffs map_coeffs(const CoeffsT<Dual>& c, F f) {
  return {f(c.a1), f(c.a2), f(c.a3), f(c.a4), f(c.a5), f(c.b1), f(c.b2), f(c.b3), f(c.b4), f(c.b5),
          f(c.b6), f(c.c1), f(c.c2), f(c.c3), f(c.c4), f(c.c5), f(c.c6), f(c.d1), f(c.d2), f(c.d3),
          f(c.d4), f(c.d5), f(c.d6), f(c.e1), f(c.e2), f(c.e3), f(c.f1), f(c.f2), f(c.f3)};
}
}  // namespace

ConnectionCoeffs values_of(const CoeffsT<Dual>& c) {
  return map_coeffs(c, [](const Dual& x) { return x.v; });
}
ConnectionCoeffs derivatives_of(const CoeffsT<Dual>& c) {
  return map_coeffs(c, [](const Dual& x) { return x.d; });
}

std::vector<std::pair<std::string, double>> named_coeffs(const ConnectionCoeffs& c) {
  return {{"A1", c.a1}, {"A2", c.a2}, {"A3", c.a3}, {"A4", c.a4}, {"A5", c.a5}, {"B1", c.b1},
          {"B2", c.b2}, {"B3", c.b3}, {"B4", c.b4}, {"B5", c.b5}, {"B6", c.b6}, {"C1", c.c1},
          {"C2", c.c2}, {"C3", c.c3}, {"C4", c.c4}, {"C5", c.c5}, {"C6", c.c6}, {"D1", c.d1},
          {"D2", c.d2}, {"D3", c.d3}, {"D4", c.d4}, {"D5", c.d5}, {"D6", c.d6}, {"E1", c.e1},
          {"E2", c.e2}, {"E3", c.e3}, {"F1", c.f1}, {"F2", c.f2}, {"F3", c.f3}};
}

CurvatureOracle CurvatureOracle::flat() {
  return {[](const Vec& X, const Vec&, const Vec&) { return Vec(Vec::Zero(X.size())); },
          [](const Vec& X, const Vec& Y) { return X.dot(Y); }};
}

CurvatureOracle CurvatureOracle::constant_curvature(double K) {
  return {[K](const Vec& X, const Vec& Y, const Vec& Z) {
            return Vec(K * (Y.dot(Z) * X - X.dot(Z) * Y));
          },
          [](const Vec& X, const Vec& Y) { return X.dot(Y); }};
}

FTensorKind ftensor_from_string(const std::string& s) {
  if (s == "A") return FTensorKind::A;
  if (s == "B") return FTensorKind::B;
  if (s == "C") return FTensorKind::C;
  if (s == "D") return FTensorKind::D;
  if (s == "E") return FTensorKind::E;
  if (s == "F") return FTensorKind::F;
  throw ParameterError("unknown F-tensor kind '" + s + "'");
}

namespace {
void require_same_dim(std::initializer_list<const Vec*> vs) {
  const Eigen::Index n = (*vs.begin())->size();
  for (const Vec* v : vs)
    if (v->size() != n) throw DimensionError("vectors must live in one tangent space");
}
}  // namespace

Vec f_tensor_eval(FTensorKind kind, const ConnectionCoeffs& c, const Vec& u, const Vec& X,
                  const Vec& Y, const CurvatureOracle& curv) {
  require_same_dim({&u, &X, &Y});
  const auto& g = curv.g;
  const auto& R = curv.R;
  const double gXu = g(X, u), gYu = g(Y, u), gXY = g(X, Y);
  auto RuRu = [&]() { return g(R(X, u, Y), u); };
  switch (kind) {
    case FTensorKind::A:
      return c.a1 * (R(X, u, Y) + R(Y, u, X)) + c.a2 * (gYu * X + gXu * Y) + c.a3 * RuRu() * u +
             c.a4 * gXY * u + c.a5 * gXu * gYu * u;
    case FTensorKind::B:
      return c.b1 * R(X, u, Y) + c.b2 * R(X, Y, u) + c.b3 * (gYu * X + gXu * Y) +
             c.b4 * RuRu() * u + c.b5 * gXY * u + c.b6 * gXu * gYu * u;
    case FTensorKind::C:
      return c.c1 * R(Y, u, X) + c.c2 * gXu * Y + c.c3 * gYu * X + c.c4 * RuRu() * u +
             c.c5 * gXY * u + c.c6 * gXu * gYu * u;
    case FTensorKind::D:
      return c.d1 * R(Y, u, X) + c.d2 * gXu * Y + c.d3 * gYu * X + c.d4 * RuRu() * u +
             c.d5 * gXY * u + c.d6 * gXu * gYu * u;
    case FTensorKind::E:
      return c.e1 * (gYu * X + gXu * Y) + c.e2 * gXY * u + c.e3 * gXu * gYu * u;
    case FTensorKind::F:
      return c.f1 * (gYu * X + gXu * Y) + c.f2 * gXY * u + c.f3 * gXu * gYu * u;
  }
  throw std::logic_error("unknown F-tensor kind");
}

Vec p_form_eval(const PFormPoint& p, const Vec& u, const Vec& X, const Vec& Y) {
  require_same_dim({&u, &X, &Y});
  const double gXu = X.dot(u), gYu = Y.dot(u);
  return p.f3.v * gYu * X + p.f4.v * gXu * Y + p.f5.v * X.dot(Y) * u + p.f6.v * gXu * gYu * u;
}

Vec d_P_eval(const PFormPoint& p, const Vec& u, const Vec& X, const Vec& Y, const Vec& Z) {
  require_same_dim({&u, &X, &Y, &Z});
  const double gXu = X.dot(u), gYu = Y.dot(u), gXY = X.dot(Y);
  const double gXZ = X.dot(Z), gYZ = Y.dot(Z);
  const double drho = 2.0 * u.dot(Z);  // d|u|^2 (Z)
  Vec out = drho * (p.f3.d * gYu * X + p.f4.d * gXu * Y + p.f5.d * gXY * u +
                    p.f6.d * gXu * gYu * u);
  out += p.f3.v * gYZ * X + p.f4.v * gXZ * Y + p.f5.v * gXY * Z;
  out += p.f6.v * (gXZ * gYu * u + gXu * gYZ * u + gXu * gYu * Z);
  return out;
}

Vec d_P_eval(const PForm& p, const Vec& u, const Vec& X, const Vec& Y, const Vec& Z) {
  const double rho = u.squaredNorm();
  auto at = [rho](const SmoothFn& f) {
    const Jet2 j = eval_jet2(f, rho);
    return Dual{j.value, j.d1};
  };
  return d_P_eval(PFormPoint{at(p.f3), at(p.f4), at(p.f5), at(p.f6)}, u, X, Y, Z);
}

}  // namespace gnat
