#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gnat/gnatural.hpp"
#include "gnat/tolerance.hpp"

namespace gnat {

// A parallel vector field V on an m-dimensional base with |V|^2 = rho.
struct ParallelFieldSpec {
  int m = 2;
  double rho = 1.0;
};
void validate(const ParallelFieldSpec& spec);

enum class ParallelClass { harmonic_map, proper_biharmonic, biharmonic_only_trivially, not_biharmonic };
const char* to_string(ParallelClass c);

struct Tension {
  double c_h = 0.0, c_v = 0.0;          // tau_h(V) = c_h V, tau_v(V) = c_v V
  double scale_h = 0.0, scale_v = 0.0;  // sums of absolute additive terms
};

struct BitensionResult {
  double c_h = 0.0, c_v = 0.0;
  double tau2h_factor = 0.0, tau2v_factor = 0.0;  // tau_2h(V) = tau2h_factor V, same for v
  double scale_h = 0.0, scale_v = 0.0;
  ParallelClass classification = ParallelClass::not_biharmonic;
};

Tension tension_parallel(const GNaturalMetric& g, const ParallelFieldSpec& spec);
Tension tension_from_coeffs(const ConnectionCoeffs& c, const ParallelFieldSpec& spec);

// Closed-form bitension of a parallel field. rho = 0 is the zero section, for which every
// factor multiplies V = 0 (classification biharmonic_only_trivially).
BitensionResult bitension_parallel(const GNaturalMetric& g, const ParallelFieldSpec& spec,
                                   double tol = kDefaultTolerance);
// The same formula from precomputed coefficients and their t-derivatives.
BitensionResult bitension_from_coeffs(const CoeffsT<Dual>& c, const ParallelFieldSpec& spec,
                                      double tol = kDefaultTolerance);

// Second route: tau_2 assembled from F-tensor values and their fibre derivatives on an
// m-frame with V = sqrt(rho) e_1. Requires rho > 0.
struct ProofPathResult {
  double tau2h_factor = 0.0, tau2v_factor = 0.0;
  double off_axis_h = 0.0, off_axis_v = 0.0;  // norms of the components orthogonal to V
};
ProofPathResult proof_path_bitension(const GNaturalMetric& g, const ParallelFieldSpec& spec);

// Kaluza-Klein-type criterion for parallel fields. Requires alpha2 = beta2 = 0 and
// (beta1+beta3)(rho) = (beta1+beta3)'(rho) = 0; otherwise NotApplicableError.
// Returns s'(rho)[2 rho a1'/a1 + rho (b1 - a1')/phi1 + rho^2 (a1 b1' - 2 a1' b1)/(phi1 a1)
//                 + 2 rho phi1'/phi1 - 1] - 2 rho s''(rho),   s = alpha1 + alpha3.
double kk_type_lhs(const GNaturalMetric& g, double rho);
struct ScalarWithScale {
  double value = 0.0, scale = 0.0;
};
ScalarWithScale kk_type_lhs_scaled(const GNaturalMetric& g, double rho);

// The same criterion re-derived from the full bitension:
// s'(-rho X + 2 rho phi1'/phi1 - 1) - 2 rho s'' - (2 rho^2/m)(beta1+beta3)'',
// X = 2F1 + F2 + rho F3, so that tau2v_factor = (m^2 s'/phi1^2) * residual.
ScalarWithScale kk_type_residual(const GNaturalMetric& g, const ParallelFieldSpec& spec);

struct ParallelClassReport {
  BitensionResult bitension;
  bool kk_type_applicable = false;
  // Only meaningful when kk_type_applicable:
  double s_prime = 0.0;
  double stated_lhs = 0.0;
  ParallelClass stated_classification = ParallelClass::not_biharmonic;
  bool stated_criterion_agrees = true;
};
ParallelClassReport classify_parallel(const GNaturalMetric& g, const ParallelFieldSpec& spec,
                                      double tol = kDefaultTolerance);

struct GResidual {
  double residual = 0.0;  // phi1 tau2v_factor + phi2 tau2h_factor
  double scale = 0.0;
  bool is_g_biharmonic = false;
};
GResidual g_biharmonic_residual(const GNaturalMetric& g, const ParallelFieldSpec& spec,
                                double tol = kDefaultTolerance);

// ---- lambda family -----------------------------------------------------------------------

struct LambdaFamily {
  SmoothFn lambda;
  double K = 1.0;
  double eta = 1.0;
  int m = 2;
  SmoothFn alpha13;  // alpha1 + alpha3
  SmoothFn alpha2;
  double sign_alpha13 = 1.0;  // value of alpha1+alpha3 near the zero section
  double sign_alpha2 = 1.0;   // value of alpha2 near the zero section
  GNaturalMetric metric;
};

// alpha1 = beta_i = 0; alpha1+alpha3 and alpha2 equal K (t lambda)^{2/m} and
// (2K/m)(lambda + t lambda') t^{2/m-1} lambda^{2/m-2} on [eta, inf), and are blended by the
// cutoff f_eta to sgn(K), sgn(K(lambda + t lambda')) near t = 0.
LambdaFamily lambda_family_build(const SmoothFn& lambda, double K, double eta, int m);

// Notations of the family at t: lambda = (alpha1+alpha3)'/alpha2, mu = (alpha1+alpha3)/alpha2,
// nu = alpha2'/alpha2 (with first derivatives of lambda and mu), from the metric functions.
struct LambdaNotations {
  double lambda = 0.0, dlambda = 0.0, mu = 0.0, dmu = 0.0, nu = 0.0;
};
LambdaNotations lambda_notations(const LambdaFamily& fam, double t);

// alpha2^3 [2 mu (lambda + t lambda') - m t lambda^2] (denominator-cleared), with scale.
ScalarWithScale g3_residual(const LambdaFamily& fam, double t);

struct G9Result {
  double g9_value = 0.0, g9_scale = 0.0;
  bool is_proper_g_biharmonic = false;  // g9 bracket nonzero
  double tau2h_stated = 0.0;            // m lambda [2 mu (lambda + rho lambda') - m rho lambda^2]
  double tau2v_stated = 0.0;            // m lambda mu {m rho^2 lambda^2 - 2 rho [..] + m lambda [..]}
  double g4_bracket = 0.0;              // the braces of the tau2v_stated expression
  double tau2h_closed = 0.0, tau2v_closed = 0.0;  // bitension_parallel
};
G9Result lambda_family_g9(const LambdaFamily& fam, double rho, double tol = kDefaultTolerance);

// The bracket of the non-biharmonicity condition, from lambda jets at t.
ScalarWithScale g9_bracket(const SmoothFn& lambda, int m, double t);

// Positive real roots of [(2m-11)b-1]b t^3 + [2mb^2+(5m-21)b+2] t^2 + [7mb+17m-20] t - 6m.
std::vector<double> exp_lambda_cubic(double a, double b, int m);
std::vector<double> exp_lambda_cubic_coefficients(double b, int m);  // highest degree first

// ---- scans -------------------------------------------------------------------------------

struct ScanRow {
  double rho = 0.0;
  bool ok = true;
  std::string warning;
  BitensionResult bitension;
  GResidual g_residual;
  std::optional<double> kk_lhs;
};
struct ScanRoot {
  double rho = 0.0;
  double lo = 0.0, hi = 0.0;  // final bracket
  double value = 0.0;         // LHS at rho
};
struct ScanResult {
  std::vector<ScanRow> rows;
  std::vector<ScanRoot> roots;
  std::string root_function;  // "kk_type_lhs" or "none"
  bool lhs_identically_zero = false;  // every defined grid value is exactly 0; roots not listed
};
ScanResult scan_parallel(const GNaturalMetric& g, int m, double rho_min, double rho_max, int steps,
                         unsigned jobs, double tol = kDefaultTolerance);

// Bisection on a sign-changing bracket until hi - lo <= xtol.
ScanRoot bisect_root(const std::function<double(double)>& f, double lo, double hi,
                     double xtol = 1e-10);

}  // namespace gnat
