#include <gtest/gtest.h>

#include <cmath>

#include "gnat/errors.hpp"
#include "gnat/flat_oracle.hpp"
#include "test_support.hpp"

using namespace gnat;
using gnat::testing_support::corpus;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

GNaturalMetric generic_metric() {
  for (const auto& mc : corpus())
    if (mc.name == "generic") return mc.metric;
  throw std::runtime_error("corpus has no generic metric");
}

}  // namespace

TEST(MetricMatrix, SasakiIsIdentity) {
  const FlatChart chart{3, GNaturalMetric::sasaki()};
  const Eigen::MatrixXd G = metric_matrix(chart, vec({0.1, 0.2, 0.3}), vec({1.0, -0.5, 2.0}));
  EXPECT_LE((G - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MetricMatrix, BlockStructure) {
  const GNaturalMetric g = generic_metric();
  const FlatChart chart{2, g};
  const Vec u = vec({0.7, -0.4});
  const double t = u.squaredNorm();
  const Eigen::MatrixXd G = metric_matrix(chart, vec({0.0, 0.0}), u);
  const Eigen::Matrix2d uu = u * u.transpose(), I = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d hh = (g.alpha1(t) + g.alpha3(t)) * I + (g.beta1(t) + g.beta3(t)) * uu;
  const Eigen::Matrix2d hv = g.alpha2(t) * I + g.beta2(t) * uu;
  const Eigen::Matrix2d vv = g.alpha1(t) * I + g.beta1(t) * uu;
  EXPECT_LE((G.block(0, 0, 2, 2) - hh).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((G.block(0, 2, 2, 2) - hv).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((G.block(2, 0, 2, 2) - hv).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((G.block(2, 2, 2, 2) - vv).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(FDBitension, SasakiConstantSectionIsHarmonic) {
  const FDBitension b = fd_bitension({3, GNaturalMetric::sasaki()}, vec({0.4, 0.8, -0.2}));
  EXPECT_LE(b.tau_h.norm() + b.tau_v.norm(), 1e-10);
  EXPECT_LE(b.tau2_h.norm() + b.tau2_v.norm(), 1e-8);
}

TEST(Compare, CorpusAgreesWithClosedForm) {
  for (const auto& mc : corpus())
    for (int m : {2, 3})
      for (double rho : {0.5, 1.5}) {
        const CompareReport r = compare({m, mc.metric}, {m, rho});
        EXPECT_TRUE(r.pass) << mc.name << " m=" << m << " rho=" << rho << " tau2v rel "
                            << r.tau2_v.rel_error << " tau2h rel " << r.tau2_h.rel_error;
      }
}

TEST(Compare, MutationSentinelIsCaught) {
  // Flipping the sign of one connection coefficient must be detected by the FD oracle.
  const GNaturalMetric g = generic_metric();
  const auto flip_a4 = [](CoeffsT<Dual>& c) { c.a4 = -c.a4; };
  const CompareReport r = compare({3, g}, {3, 1.5}, {}, 1e-4, flip_a4);
  EXPECT_FALSE(r.pass);
  const auto flip_f1 = [](CoeffsT<Dual>& c) { c.f1 = -c.f1; };
  EXPECT_FALSE(compare({3, g}, {3, 1.5}, {}, 1e-4, flip_f1).pass);
}

TEST(FDGeometryProperty, ChristoffelAreMetricCompatible) {
  const FlatChart chart{2, generic_metric()};
  const FDGeometry geo = fd_geometry(chart, vec({0.0, 0.0}), vec({0.6, 0.9}), {}, false);
  const int n = geo.n;
  double worst = 0.0, scale = 0.0;
  for (int L = 0; L < n; ++L)
    for (int I = 0; I < n; ++I)
      for (int J = 0; J < n; ++J) {
        double rhs = 0.0;
        for (int K = 0; K < n; ++K) rhs += geo.G(K, L, I) * geo.metric(K, J) + geo.G(K, L, J) * geo.metric(I, K);
        worst = std::max(worst, std::abs(geo.dmetric[L](I, J) - rhs));
        scale = std::max(scale, std::abs(geo.dmetric[L](I, J)));
      }
  EXPECT_LE(worst, 1e-10 * (1 + scale));
}

TEST(FDGeometryProperty, CurvatureSymmetries) {
  const FlatChart chart{2, generic_metric()};
  const FDGeometry geo = fd_geometry(chart, vec({0.0, 0.0}), vec({0.6, 0.9}), {0.0, 2});
  const int n = geo.n;
  double scale = 0.0;
  for (double x : geo.riemann) scale = std::max(scale, std::abs(x));
  double anti = 0.0, bianchi = 0.0;
  for (int K = 0; K < n; ++K)
    for (int L = 0; L < n; ++L)
      for (int I = 0; I < n; ++I)
        for (int J = 0; J < n; ++J) {
          anti = std::max(anti, std::abs(geo.R(K, L, I, J) + geo.R(K, L, J, I)));
          bianchi = std::max(bianchi, std::abs(geo.R(K, L, I, J) + geo.R(K, I, J, L) + geo.R(K, J, L, I)));
        }
  EXPECT_LE(anti, 1e-12 * (1 + scale));
  EXPECT_LE(bianchi, 1e-5 * (1 + scale));
}

TEST(FDGeometry, SasakiHasFlatChart) {
  const FDGeometry geo = fd_geometry({2, GNaturalMetric::sasaki()}, vec({0.0, 0.0}), vec({1.0, 2.0}), {});
  for (double x : geo.gamma) EXPECT_LE(std::abs(x), 1e-12);
  for (double x : geo.riemann) EXPECT_LE(std::abs(x), 1e-8);
}

TEST(GenericDirection, IsUnitAndDecreasing) {
  const Vec d = generic_direction(4);
  EXPECT_NEAR(d.norm(), 1.0, 1e-15);
  for (int i = 1; i < 4; ++i) EXPECT_LT(d(i), d(i - 1));
}
