#pragma once
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gnat/gnatural.hpp"
#include "gnat/tm_biharmonic.hpp"

namespace gnat {

// T(R^m) = R^{2m} with coordinates (x^1..x^m, u^1..u^m) and the flat base metric.
struct FlatChart {
  int m = 2;
  GNaturalMetric G;
};

struct FDConfig {
  double h = 0.0;  // 0 selects 1e-3 * (1 + |u|)
  int richardson_levels = 1;
};

Eigen::MatrixXd metric_matrix(const FlatChart& chart, const Vec& x, const Vec& u);

// Christoffel symbols and curvature of (TM, G) at (x, u), by central differences with
// Richardson extrapolation. Index layout: gamma[(K*n + I)*n + J] = Gamma^K_{IJ},
// riemann[((K*n + L)*n + I)*n + J] = R^K_{LIJ} with R(d_I, d_J) d_L = R^K_{LIJ} d_K.
struct FDGeometry {
  int n = 0;
  std::vector<double> gamma;
  std::vector<double> riemann;
  Eigen::MatrixXd metric;
  std::vector<Eigen::MatrixXd> dmetric;  // d_L G, L = 0..n-1
  double gamma_error = 0.0;              // Richardson error estimate (max abs)
  double riemann_error = 0.0;

  double G(int K, int I, int J) const { return gamma[(K * n + I) * n + J]; }
  double R(int K, int L, int I, int J) const { return riemann[((K * n + L) * n + I) * n + J]; }
};
FDGeometry fd_geometry(const FlatChart& chart, const Vec& x, const Vec& u, const FDConfig& cfg,
                       bool with_curvature = true);

struct FDBitension {
  Vec tau_h, tau_v;    // tension of the constant section x -> (x, v0)
  Vec tau2_h, tau2_v;  // bitension, (d_x, d_u) blocks
  double error_estimate = 0.0;
  std::vector<std::string> warnings;
};
FDBitension fd_bitension(const FlatChart& chart, const Vec& v0, const FDConfig& cfg = {});

// Generic unit direction used for comparisons: proportional to (1, 1/2, ..., 1/m).
Vec generic_direction(int m);

struct ComponentComparison {
  double closed_factor = 0.0;
  double fd_factor = 0.0;  // projection of the FD vector on v0, divided by rho
  double abs_error = 0.0;  // |fd vector - closed_factor * v0|
  double rel_error = 0.0;  // abs_error / |closed vector| (0 when the closed vector vanishes)
  bool absolute_mode = false;
  bool pass = false;
};

struct CompareReport {
  ComponentComparison tension_h, tension_v, tau2_h, tau2_v;
  double tolerance = 1e-4;
  double abs_tolerance = 1e-8;
  bool pass = false;
  std::vector<std::string> warnings;
};

// Runs fd_bitension and the closed form on the same field. `mutate` may alter the closed-form
// coefficients before use (mutation testing of the oracle).
CompareReport compare(const FlatChart& chart, const ParallelFieldSpec& spec, const FDConfig& cfg = {},
                      double tolerance = 1e-4,
                      const std::function<void(CoeffsT<Dual>&)>& mutate = {});

}  // namespace gnat
