#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gnat/errors.hpp"
#include "gnat/frame_models.hpp"
#include "gnat/t1m_biharmonic.hpp"

using namespace gnat;

namespace {

using Q = Rational;

// Random admissible parameters with small integer numerators: alpha, phi, varphi nonzero.
UnitBundleParams<Q> random_params(std::mt19937_64& rng, bool b_zero, bool d_zero = false) {
  std::uniform_int_distribution<int> u(-6, 6), den(1, 4);
  for (;;) {
    UnitBundleParams<Q> p{Q(u(rng), den(rng)), b_zero ? Q(0) : Q(u(rng), den(rng)), Q(u(rng), den(rng)),
                          d_zero ? Q(0) : Q(u(rng), den(rng))};
    if (p.a != 0 && p.alpha() != 0 && p.phi() != 0 && p.varphi() != 0) return p;
  }
}

FVec<Q> e(int m, int i) { return basis<Q>(m, i); }

}  // namespace

TEST(T1MTension, Sol3E3ClosedForm) {
  std::mt19937_64 rng(61);
  const FrameModel<Q> M = sol3<Q>();
  for (int n = 0; n < 100; ++n) {
    const UnitBundleParams<Q> p = random_params(rng, false);
    const T1MBitension<Q> r = t1m_bitension_tensor(M, e(3, 2), p);
    EXPECT_EQ(r.tension.tau_h, scale(Q(-4) * p.b / p.varphi(), e(3, 2)));
    EXPECT_EQ(r.tension.tau_v, zeros<Q>(3));
    const Q expected = Q(8) / p.varphi() * p.b * p.b * (Q(2) - p.a * p.d / p.alpha());
    EXPECT_EQ(r.T_U, scale(expected, e(3, 2)));
  }
}

TEST(T1MTension, Sol3E3WithoutTwistIsHarmonic) {
  const UnitFieldReport<Q> r = classify_unit(sol3<Q>(), e(3, 2), UnitBundleParams<Q>{Q(1), Q(0), Q(1), Q(1)});
  EXPECT_EQ(r.classification, UnitClass::HarmonicMap);
}

TEST(T1MTensionProperty, VerticalPartVanishesWhenOperatorsAreCollinear) {
  std::mt19937_64 rng(67);
  for (int n : {2, 3, 5})
    for (long k : {1L, 2L}) {
      const FrameModel<Q> M = hyperbolic<Q>(n, Q(k));
      for (int draw = 0; draw < 10; ++draw) {
        const UnitBundleParams<Q> p = random_params(rng, false);
        const T1MTension<Q> t = t1m_tension(M, e(n, n - 1), p);
        EXPECT_EQ(t.tau_v, zeros<Q>(n));
        // Horizontal part along V with the closed coefficient.
        const Q K = Q(-k * k), nm1(n - 1), kk(k);
        const Q gQ = nm1 * K, gL = -nm1 * K, gS = nm1 * kk * kk * kk, div = -nm1 * kk;
        const Q al = p.alpha(), vp = p.varphi();
        const Q coef = p.a * p.b / al * gQ - p.a * p.a / al * gS - p.b * (p.a * p.d + p.b * p.b) / (al * vp) * gQ -
                       p.b / vp * gL + p.d / vp * div + p.a * (p.a * p.d + p.b * p.b) / (al * vp) * gS;
        EXPECT_EQ(t.tau_h, scale(coef, e(n, n - 1)));
      }
    }
}

TEST(T1MBitensionProperty, HarmonicImpliesBiharmonic) {
  std::mt19937_64 rng(71);
  int harmonic = 0;
  for (int draw = 0; draw < 200; ++draw) {
    const UnitBundleParams<Q> p = random_params(rng, true);
    for (const FrameModel<Q>& M : {sol3<Q>(), su2<Q>(Q(2), Q(2), Q(1)), hyperbolic<Q>(3, Q(1))}) {
      for (int i = 0; i < M.m; ++i) {
        const UnitFieldReport<Q> r = classify_unit(M, e(M.m, i), p);
        if (!r.tension_zero) continue;
        ++harmonic;
        EXPECT_EQ(r.bitension.T_U, zeros<Q>(M.m));
        EXPECT_EQ(r.classification, UnitClass::HarmonicMap);
      }
    }
  }
  EXPECT_GT(harmonic, 0);
}

TEST(T1MBitension, ClassificationOrder) {
  // A harmonic unit field that is not a harmonic map: Sol3 e3 with b != 0 and 2 alpha != a d.
  const UnitFieldReport<Q> r = classify_unit(sol3<Q>(), e(3, 2), UnitBundleParams<Q>{Q(1), Q(1), Q(2), Q(1)});
  EXPECT_FALSE(r.tension_zero);
  EXPECT_TRUE(r.harmonic_unit_field);
  EXPECT_EQ(r.classification, UnitClass::HarmonicUnitFieldOnly);
  // 2 alpha = a d: proper g-biharmonic.
  const UnitBundleParams<Q> p{Q(1), Q(1), Q(1), Q(2)};
  ASSERT_EQ(Q(2) * p.alpha(), p.a * p.d);
  EXPECT_EQ(classify_unit(sol3<Q>(), e(3, 2), p).classification, UnitClass::ProperGBiharmonic);
}

TEST(T1MBitension, FloatMatchesExact) {
  const UnitBundleParams<Q> pq{Q(3, 2), Q(1, 3), Q(-1, 2), Q(2)};
  const UnitBundleParams<double> pd{1.5, 1.0 / 3.0, -0.5, 2.0};
  const FrameModel<Q> Mq = su2<Q>(Q(3), Q(2), Q(1));
  const FrameModel<double> Md = su2<double>(3.0, 2.0, 1.0);
  const FVec<Q> Uq{Q(3, 5), Q(4, 5), Q(0)};
  const FVec<double> Ud{0.6, 0.8, 0.0};
  const T1MBitension<Q> a = t1m_bitension_tensor(Mq, Uq, pq);
  const T1MBitension<double> b = t1m_bitension_tensor(Md, Ud, pd);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(to_double(a.T_U[i]), b.T_U[i], 1e-12 * (1 + b.scale));
}

TEST(T1MErrors, Preconditions) {
  EXPECT_THROW(t1m_tension(sol3<Q>(), FVec<Q>{Q(1), Q(1), Q(0)}, UnitBundleParams<Q>{}), DomainError);
  EXPECT_THROW(t1m_tension(sol3<Q>(), FVec<Q>{Q(1), Q(0)}, UnitBundleParams<Q>{}), DimensionError);
  EXPECT_THROW(t1m_tension(sol3<Q>(), e(3, 0), UnitBundleParams<Q>{Q(1), Q(1), Q(0), Q(0)}), DegenerateMetricError);
  EXPECT_THROW(t1m_tension(sol3<Q>(), e(3, 0), UnitBundleParams<Q>{Q(1), Q(0), Q(0), Q(-1)}), DegenerateMetricError);
}

TEST(SpecialCases, KaluzaKleinMetricMatchesBitension) {
  std::mt19937_64 rng(73);
  for (int draw = 0; draw < 30; ++draw) {
    const UnitBundleParams<Q> p = random_params(rng, true, true);
    for (const FrameModel<Q>& M : {sol3<Q>(), su2<Q>(Q(3), Q(2), Q(1)), hyperbolic<Q>(4, Q(2))})
      for (int i = 0; i < M.m; ++i) {
        const SpecialResidual<Q> s = special_case_residual(SpecialKind::KKMetric, M, e(M.m, i), p);
        const T1MBitension<Q> b = t1m_bitension_tensor(M, e(M.m, i), p);
        EXPECT_EQ(b.T_U, scale(p.a, s.residual)) << M.name << " e" << i + 1;
      }
  }
}

TEST(SpecialCases, KaluzaKleinPremiseGate) {
  const UnitBundleParams<Q> p{Q(1), Q(1, 2), Q(1), Q(0)};
  EXPECT_THROW(special_case_residual(SpecialKind::KKMetric, sol3<Q>(), e(3, 0), p), NotApplicableError);
  const SpecialResidual<Q> r = special_case_residual(SpecialKind::KKMetric, sol3<Q>(), e(3, 0), p, false);
  ASSERT_EQ(r.failed_premises.size(), 1u);
  EXPECT_EQ(r.failed_premises[0], "b = 0");
}

TEST(SpecialCases, GeodesicConstantCurvature) {
  // H^n, V = e_n is geodesic; K = -k^2 so the premise asks d = a k^2.
  const FrameModel<Q> M = hyperbolic<Q>(3, Q(1));
  const UnitBundleParams<Q> p{Q(1), Q(0), Q(1), Q(1)};
  const SpecialResidual<Q> s = special_case_residual(SpecialKind::GeodesicConstCurv, M, e(3, 2), p);
  EXPECT_EQ(s.sectional_curvature, -1.0);
  const T1MBitension<Q> b = t1m_bitension_tensor(M, e(3, 2), p);
  EXPECT_EQ(s.zero, vec_is_zero(b.T_U, b.scale, 0.0));
  EXPECT_THROW(special_case_residual(SpecialKind::GeodesicConstCurv, M, e(3, 2), UnitBundleParams<Q>{Q(1), Q(0), Q(1), Q(2)}),
               NotApplicableError);
  EXPECT_THROW(special_case_residual(SpecialKind::GeodesicConstCurv, sol3<Q>(), e(3, 2), p), NotApplicableError);
}

TEST(SpecialCases, KillingPremisesAreReported) {
  // Berger sphere: e3 is Killing but QU is collinear with U.
  const FrameModel<Q> M = su2<Q>(Q(2), Q(2), Q(1));
  const UnitBundleParams<Q> p{Q(1), Q(0), Q(1), Q(1)};
  EXPECT_THROW(special_case_residual(SpecialKind::Killing, M, e(3, 2), p), NotApplicableError);
  const SpecialResidual<Q> r = special_case_residual(SpecialKind::Killing, M, e(3, 2), p, false);
  EXPECT_FALSE(r.failed_premises.empty());
  for (const auto& f : r.failed_premises) EXPECT_NE(f, "U is a Killing field");
}

TEST(SpecialCasesProperty, KillingResidualWhenPremisesHold) {
  // Berger sphere x R: the unit field (3/5) e3 + (4/5) e4 is Killing, S(U) = 0 and QU is not
  // collinear with U. (On a three-dimensional Milnor frame every such field has QU parallel to U.)
  std::mt19937_64 rng(79);
  std::uniform_int_distribution<int> u(1, 4);
  int hits = 0;
  for (int draw = 0; draw < 40; ++draw) {
    const Q l3(u(rng)), sigma(u(rng) + 1);
    std::vector<Q> c(64, Q(0));
    set_bracket<Q>(c, 4, 0, 1, {Q(0), Q(0), l3, Q(0)});
    set_bracket<Q>(c, 4, 1, 2, {sigma * l3, Q(0), Q(0), Q(0)});
    set_bracket<Q>(c, 4, 2, 0, {Q(0), sigma * l3, Q(0), Q(0)});
    const FrameModel<Q> M = build_model<Q>(4, c);
    const FVec<Q> U{Q(0), Q(0), Q(3, 5), Q(4, 5)};
    const UnitBundleParams<Q> p = random_params(rng, true);
    const SpecialResidual<Q> r = special_case_residual(SpecialKind::Killing, M, U, p, false);
    ASSERT_TRUE(r.failed_premises.empty()) << r.failed_premises.front();
    ++hits;
    const T1MBitension<Q> b = t1m_bitension_tensor(M, U, p);
    EXPECT_EQ(b.T_U, scale(p.a, r.residual)) << draw;
    EXPECT_FALSE(r.zero);
  }
  EXPECT_EQ(hits, 40);
}

TEST(Criteria, Sol3E3BranchesAgreeWithEngine) {
  CriteriaInput in;
  in.model = "sol3";
  in.field = "e3";
  in.evaluate = false;
  const CriteriaReport r = closed_form_criteria(in);
  int admissible = 0;
  for (const auto& br : r.branches) {
    if (!br.admissible) continue;
    ++admissible;
    EXPECT_TRUE(br.engine_agrees) << br.name << " engine " << br.engine_class;
    EXPECT_EQ(br.engine_class, br.expected) << br.name;
  }
  EXPECT_EQ(admissible, 2);
}

TEST(Criteria, Sol3HorizontalBranchesAreFlaggedByTheEngine) {
  // For e1 and e2 with d = 0 the tension vanishes but T(U) does not: the stated proper branches
  // are reported as disagreements, never forced.
  for (const char* f : {"e1", "e2"}) {
    CriteriaInput in;
    in.model = "sol3";
    in.field = f;
    in.evaluate = false;
    const CriteriaReport r = closed_form_criteria(in);
    for (const auto& br : r.branches) {
      if (!br.admissible) continue;
      EXPECT_EQ(br.expected, "proper_g_biharmonic") << f << " " << br.name;
      EXPECT_EQ(br.engine_class, "harmonic_unit_field_only") << f << " " << br.name;
      EXPECT_FALSE(br.engine_agrees) << f << " " << br.name;
      EXPECT_GT(br.T_norm, 1e-6 * (1.0 + br.T_scale)) << f << " " << br.name;
    }
  }
}

TEST(CriteriaProperty, AdmissibleBranchesHaveValidParameters) {
  for (const char* model : {"sol3", "hyperbolic", "su2"})
    for (const char* f : {"e1", "e2", "e3"}) {
      CriteriaInput in;
      in.model = model;
      in.field = f;
      in.evaluate = false;
      const CriteriaReport r = closed_form_criteria(in);
      for (const auto& br : r.branches) {
        if (!br.admissible) {
          EXPECT_FALSE(br.note.empty()) << model << " " << br.name;
          continue;
        }
        EXPECT_NO_THROW(br.params.validate()) << model << " " << br.name;
        EXPECT_LE(std::abs(br.criterion_residual), 1e-9) << model << " " << br.name;
      }
    }
}

TEST(Criteria, HyperbolicRelationSolutions) {
  for (double k : {0.5, 1.0, 2.0}) {
    const double a = 1.0, c = 0.5, d = 3.0;
    for (double b : hyperbolic_b_solutions(a, c, d, k)) {
      const double al = a * (a + c) - b * b;
      EXPECT_NEAR(b, (2 * al / d - a) * k - al / (a * k), 1e-10 * (1 + std::abs(b)));
    }
  }
}

TEST(Criteria, UnknownModel) {
  CriteriaInput in;
  in.model = "torus";
  EXPECT_THROW(closed_form_criteria(in), PreconditionError);
}
