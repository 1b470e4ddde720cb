#pragma once
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gnat/jet.hpp"
#include "gnat/smooth_fn.hpp"

namespace gnat {

enum class FamilyTag { generic, sasaki, kaluza_klein, kaluza_klein_type, lambda_family };

const char* to_string(FamilyTag tag);
FamilyTag family_from_string(const std::string& s);

// A g-natural metric on TM given by the six functions alpha_i, beta_i of t = |u|^2.
struct GNaturalMetric {
  SmoothFn alpha1, alpha2, alpha3, beta1, beta2, beta3;
  FamilyTag family = FamilyTag::generic;

  static GNaturalMetric sasaki();
  // alpha2 = beta2 = 0, beta3 = -beta1.
  static GNaturalMetric kaluza_klein(SmoothFn alpha1, SmoothFn alpha3, SmoothFn beta1);
  // alpha2 = beta2 = 0.
  static GNaturalMetric kaluza_klein_type(SmoothFn alpha1, SmoothFn alpha3, SmoothFn beta1,
                                          SmoothFn beta3);
  static GNaturalMetric make(SmoothFn a1, SmoothFn a2, SmoothFn a3, SmoothFn b1, SmoothFn b2,
                             SmoothFn b3, FamilyTag tag = FamilyTag::generic);
};

// Sampling test of the defining identities of each family; throws ParameterError when the
// declared tag does not hold on the probe grid.
bool family_holds(const GNaturalMetric& g, FamilyTag tag);
void check_family(const GNaturalMetric& g);
FamilyTag infer_family(const GNaturalMetric& g);

struct DerivedQuantities {
  Jet2 phi1, phi2, phi3, alpha, phi;
};
DerivedQuantities derived_quantities(const GNaturalMetric& g, double t);

enum class CertStatus { verified, violated };
const char* to_string(CertStatus s);

struct Violation {
  double t;
  std::string quantity;
  double value;
};

struct MetricClassification {
  CertStatus nondegenerate_on_grid = CertStatus::verified;
  CertStatus riemannian_on_grid = CertStatus::verified;
  std::vector<Violation> violations;  // first violation per condition
};

// Grid certificate of the non-degeneracy and Riemannian conditions on [t_min, t_max].
MetricClassification classify(const GNaturalMetric& g, double t_min, double t_max, int samples);

// The 29 connection scalars A1..F3 at a point. Templated so that the same transcription
// yields values (double) and values with t-derivatives (Dual).
template <class S>
struct CoeffsT {
  S a1, a2, a3, a4, a5;
  S b1, b2, b3, b4, b5, b6;
  S c1, c2, c3, c4, c5, c6;
  S d1, d2, d3, d4, d5, d6;
  S e1, e2, e3;
  S f1, f2, f3;
};
using ConnectionCoeffs = CoeffsT<double>;

// Metric jets at a point, the input of the coefficient formulas.
template <class S>
struct MetricPoint {
  S t;
  S a1, a2, a3, b1, b2, b3;        // functions
  S da1, da2, da3, db1, db2, db3;  // first t-derivatives
};

template <class S>
CoeffsT<S> coeffs_from_point(const MetricPoint<S>& p);

ConnectionCoeffs connection_coeffs(const GNaturalMetric& g, double rho);
// Coefficients together with their t-derivatives at rho.
CoeffsT<Dual> connection_coeffs_dual(const GNaturalMetric& g, double rho);

ConnectionCoeffs values_of(const CoeffsT<Dual>& c);
ConnectionCoeffs derivatives_of(const CoeffsT<Dual>& c);

// Named view, in the order A1..A5, B1..B6, C1..C6, D1..D6, E1..E3, F1..F3.
std::vector<std::pair<std::string, double>> named_coeffs(const ConnectionCoeffs& c);

// Throws DegenerateMetricError if alpha or phi vanishes at rho.
void require_nondegenerate(const GNaturalMetric& g, double rho);

using Vec = Eigen::VectorXd;

// Curvature of the base on one tangent space, in an orthonormal frame.
struct CurvatureOracle {
  std::function<Vec(const Vec&, const Vec&, const Vec&)> R;  // R(X,Y)Z
  std::function<double(const Vec&, const Vec&)> g;
  static CurvatureOracle flat();
  // R(X,Y)Z = K (g(Y,Z)X - g(X,Z)Y)
  static CurvatureOracle constant_curvature(double K);
};

enum class FTensorKind { A, B, C, D, E, F };
FTensorKind ftensor_from_string(const std::string& s);

// Value of the F-tensor A..F of the Levi-Civita connection at (u; X, Y).
Vec f_tensor_eval(FTensorKind kind, const ConnectionCoeffs& c, const Vec& u, const Vec& X,
                  const Vec& Y, const CurvatureOracle& curv = CurvatureOracle::flat());

// F-tensor in g-form: P(u;X,Y) = f3 g(Y,u)X + f4 g(X,u)Y + f5 g(X,Y)u + f6 g(X,u)g(Y,u)u,
// with f_i functions of t = |u|^2.
struct PForm {
  SmoothFn f3, f4, f5, f6;
};
// The same, with each coefficient given by (value, t-derivative) at t = |u|^2.
struct PFormPoint {
  Dual f3, f4, f5, f6;
};

Vec p_form_eval(const PFormPoint& p, const Vec& u, const Vec& X, const Vec& Y);
// d(P_{(X,Y)})_u(Z): derivative of u -> P(u;X,Y) in direction Z, Euclidean fibre metric.
Vec d_P_eval(const PFormPoint& p, const Vec& u, const Vec& X, const Vec& Y, const Vec& Z);
Vec d_P_eval(const PForm& p, const Vec& u, const Vec& X, const Vec& Y, const Vec& Z);

}  // namespace gnat
