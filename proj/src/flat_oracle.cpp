#include "gnat/flat_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gnat/errors.hpp"

namespace gnat {

namespace {

using Flat = std::vector<double>;

struct Derivative {
  Flat value;
  double error = 0.0;
};

// d/dp_dir F(p) by central differences at h, h/2, ..., h/2^levels and Richardson extrapolation.
Derivative richardson(const std::function<Flat(const Vec&)>& F, const Vec& p, int dir, double h,
                      int levels) {
  std::vector<std::vector<Flat>> T(levels + 1);
  for (int i = 0; i <= levels; ++i) {
    const double hi = h / std::pow(2.0, i);
    Vec pp = p, pm = p;
    pp(dir) += hi;
    pm(dir) -= hi;
    const Flat fp = F(pp), fm = F(pm);
    Flat d(fp.size());
    for (std::size_t k = 0; k < fp.size(); ++k) d[k] = (fp[k] - fm[k]) / (2.0 * hi);
    T[i].push_back(std::move(d));
    for (int k = 1; k <= i; ++k) {
      const double f = std::pow(4.0, k) - 1.0;
      const Flat& a = T[i][k - 1];
      const Flat& b = T[i - 1][k - 1];
      Flat c(a.size());
      for (std::size_t q = 0; q < a.size(); ++q) c[q] = a[q] + (a[q] - b[q]) / f;
      T[i].push_back(std::move(c));
    }
  }
  Derivative out;
  out.value = T[levels][levels];
  if (levels >= 1) {
    const Flat& prev = T[levels][levels - 1];
    for (std::size_t q = 0; q < out.value.size(); ++q)
      out.error = std::max(out.error, std::abs(out.value[q] - prev[q]));
  }
  return out;
}

Flat flatten(const Eigen::MatrixXd& M) {
  Flat f(static_cast<std::size_t>(M.size()));
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) f[i * M.cols() + j] = M(i, j);
  return f;
}

double step_for(const FDConfig& cfg, const Vec& u) {
  if (cfg.h < 0.0) throw ParameterError("FD step h must be positive");
  if (cfg.richardson_levels < 1) throw ParameterError("richardson_levels must be >= 1");
  return cfg.h > 0.0 ? cfg.h : 1e-3 * (1.0 + u.norm());
}

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

struct ChristoffelAt {
  Flat gamma;
  Eigen::MatrixXd metric;
  std::vector<Eigen::MatrixXd> dmetric;
  double error = 0.0;
};

ChristoffelAt christoffel(const FlatChart& chart, const Vec& p, double h, int levels) {
  const int m = chart.m, n = 2 * m;
  auto metric_flat = [&](const Vec& q) {
    return flatten(metric_matrix(chart, q.head(m), q.tail(m)));
  };
  ChristoffelAt out;
  out.metric = metric_matrix(chart, p.head(m), p.tail(m));
  Eigen::FullPivLU<Eigen::MatrixXd> lu(out.metric);
  const double scale = out.metric.cwiseAbs().maxCoeff();
  if (!lu.isInvertible() ||
      std::abs(lu.matrixLU()(n - 1, n - 1)) <= 1e-12 * std::max(scale, 1e-300)) {
    std::ostringstream os;
    os << "degenerate metric matrix at |u|^2 = " << p.tail(m).squaredNorm();
    throw DegenerateMetricError(os.str());
  }
  const Eigen::MatrixXd Ginv = lu.inverse();
  out.dmetric.resize(n);
  for (int L = 0; L < n; ++L) {
    Derivative d = richardson(metric_flat, p, L, h, levels);
    out.error = std::max(out.error, d.error);
    out.dmetric[L] = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                    Eigen::RowMajor>>(d.value.data(), n, n);
  }
  out.gamma.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int K = 0; K < n; ++K)
    for (int I = 0; I < n; ++I)
      for (int J = 0; J < n; ++J) {
        double s = 0.0;
        for (int L = 0; L < n; ++L)
          s += Ginv(K, L) *
               (out.dmetric[I](L, J) + out.dmetric[J](L, I) - out.dmetric[L](I, J));
        out.gamma[(K * n + I) * n + J] = 0.5 * s;
      }
  return out;
}

}  // namespace

Eigen::MatrixXd metric_matrix(const FlatChart& chart, const Vec& x, const Vec& u) {
  const int m = chart.m;
  if (m < 1) throw ParameterError("chart dimension must be >= 1");
  if (x.size() != m || u.size() != m) throw DimensionError("metric_matrix: point must have 2m coordinates");
  const double rho = u.squaredNorm();
  const GNaturalMetric& G = chart.G;
  const double a1 = eval_jet2(G.alpha1, rho).value, a2 = eval_jet2(G.alpha2, rho).value,
               a3 = eval_jet2(G.alpha3, rho).value;
  const double b1 = eval_jet2(G.beta1, rho).value, b2 = eval_jet2(G.beta2, rho).value,
               b3 = eval_jet2(G.beta3, rho).value;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd uu = u * u.transpose();
  Eigen::MatrixXd M(2 * m, 2 * m);
  M.topLeftCorner(m, m) = (a1 + a3) * I + (b1 + b3) * uu;
  M.topRightCorner(m, m) = a2 * I + b2 * uu;
  M.bottomLeftCorner(m, m) = a2 * I + b2 * uu;
  M.bottomRightCorner(m, m) = a1 * I + b1 * uu;
  return M;
}

FDGeometry fd_geometry(const FlatChart& chart, const Vec& x, const Vec& u, const FDConfig& cfg,
                       bool with_curvature) {
  const int m = chart.m, n = 2 * m;
  if (x.size() != m || u.size() != m) throw DimensionError("fd_geometry: point must have 2m coordinates");
  const double h = step_for(cfg, u);
  const int levels = cfg.richardson_levels;
  Vec p(n);
  p << x, u;

  ChristoffelAt c0 = christoffel(chart, p, h, levels);
  FDGeometry geo;
  geo.n = n;
  geo.gamma = c0.gamma;
  geo.metric = c0.metric;
  geo.dmetric = c0.dmetric;
  geo.gamma_error = c0.error;
  if (!with_curvature) return geo;

  auto gamma_flat = [&](const Vec& q) { return christoffel(chart, q, h, levels).gamma; };
  std::vector<Flat> dgamma(n);  // dgamma[I][(K n + J) n + L] = d_I Gamma^K_{JL}
  for (int I = 0; I < n; ++I) {
    Derivative d = richardson(gamma_flat, p, I, h, levels);
    geo.riemann_error = std::max(geo.riemann_error, d.error);
    dgamma[I] = std::move(d.value);
  }
  auto Gm = [&](int K, int I, int J) { return geo.gamma[(K * n + I) * n + J]; };
  geo.riemann.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int K = 0; K < n; ++K)
    for (int L = 0; L < n; ++L)
      for (int I = 0; I < n; ++I)
        for (int J = 0; J < n; ++J) {
          double r = dgamma[I][(K * n + J) * n + L] - dgamma[J][(K * n + I) * n + L];
          for (int M = 0; M < n; ++M) r += Gm(K, I, M) * Gm(M, J, L) - Gm(K, J, M) * Gm(M, I, L);
          geo.riemann[((K * n + L) * n + I) * n + J] = r;
        }
  return geo;
}

FDBitension fd_bitension(const FlatChart& chart, const Vec& v0, const FDConfig& cfg) {
  const int m = chart.m, n = 2 * m;
  if (v0.size() != m) throw DimensionError("fd_bitension: v0 must have m components");
  const Vec x = Vec::Zero(m);  // the metric does not depend on x; any base point will do
  const FDGeometry geo = fd_geometry(chart, x, v0, cfg, true);

  // tau^K = sum_i Gamma^K_{ii} over the base directions (flat base, identity metric).
  Vec tau = Vec::Zero(n);
  for (int K = 0; K < n; ++K)
    for (int i = 0; i < m; ++i) tau(K) += geo.G(K, i, i);

  // tau is constant along the section, so nabla_{d_i} W = Gamma_i W for constant W.
  auto gamma_i = [&](int i, const Vec& W) {
    Vec out = Vec::Zero(n);
    for (int K = 0; K < n; ++K)
      for (int L = 0; L < n; ++L) out(K) += geo.G(K, i, L) * W(L);
    return out;
  };
  Vec tau2 = Vec::Zero(n);
  for (int i = 0; i < m; ++i) tau2 -= gamma_i(i, gamma_i(i, tau));
  // - sum_i R(tau, d_i) d_i, R(d_I, d_J) d_L = R^K_{LIJ} d_K.
  for (int i = 0; i < m; ++i)
    for (int K = 0; K < n; ++K) {
      double s = 0.0;
      for (int I = 0; I < n; ++I) s += tau(I) * geo.R(K, i, I, i);
      tau2(K) -= s;
    }

  FDBitension out;
  out.tau_h = tau.head(m);
  out.tau_v = tau.tail(m);
  out.tau2_h = tau2.head(m);
  out.tau2_v = tau2.tail(m);
  out.error_estimate = std::max(geo.gamma_error, geo.riemann_error);
  const double mag = 1.0 + tau2.cwiseAbs().maxCoeff() + tau.cwiseAbs().maxCoeff();
  if (geo.riemann_error > 1e-6 * mag)
    out.warnings.push_back("accuracy warning: Richardson error estimate " + sci(geo.riemann_error) +
                           " for the curvature");
  return out;
}

Vec generic_direction(int m) {
  Vec d(m);
  for (int i = 0; i < m; ++i) d(i) = 1.0 / (i + 1);
  return d / d.norm();
}

namespace {

ComponentComparison compare_component(double closed_factor, const Vec& fd, const Vec& v0,
                                      double tol, double abs_tol) {
  ComponentComparison c;
  const double rho = v0.squaredNorm();
  const Vec closed = closed_factor * v0;
  c.closed_factor = closed_factor;
  c.fd_factor = rho > 0.0 ? fd.dot(v0) / rho : 0.0;
  c.abs_error = (fd - closed).norm();
  const double cn = closed.norm();
  c.absolute_mode = cn <= abs_tol;
  c.rel_error = cn > 0.0 ? c.abs_error / cn : 0.0;
  c.pass = c.absolute_mode ? c.abs_error <= abs_tol : c.rel_error <= tol;
  return c;
}

}  // namespace

CompareReport compare(const FlatChart& chart, const ParallelFieldSpec& spec, const FDConfig& cfg,
                      double tolerance, const std::function<void(CoeffsT<Dual>&)>& mutate) {
  validate(spec);
  if (spec.m != chart.m) throw DimensionError("compare: spec.m differs from chart.m");
  CoeffsT<Dual> cd = connection_coeffs_dual(chart.G, spec.rho);
  if (mutate) mutate(cd);
  const BitensionResult closed = bitension_from_coeffs(cd, spec);

  const Vec v0 = std::sqrt(spec.rho) * generic_direction(chart.m);
  const FDBitension fd = fd_bitension(chart, v0, cfg);

  CompareReport r;
  r.tolerance = tolerance;
  r.tension_h = compare_component(closed.c_h, fd.tau_h, v0, tolerance, r.abs_tolerance);
  r.tension_v = compare_component(closed.c_v, fd.tau_v, v0, tolerance, r.abs_tolerance);
  r.tau2_h = compare_component(closed.tau2h_factor, fd.tau2_h, v0, tolerance, r.abs_tolerance);
  r.tau2_v = compare_component(closed.tau2v_factor, fd.tau2_v, v0, tolerance, r.abs_tolerance);
  r.pass = r.tension_h.pass && r.tension_v.pass && r.tau2_h.pass && r.tau2_v.pass;
  r.warnings = fd.warnings;
  return r;
}

}  // namespace gnat
