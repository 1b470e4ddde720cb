#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>

#include "gnat/errors.hpp"
#include "gnat/smooth_fn.hpp"
#include "test_support.hpp"

using namespace gnat;
using gnat::testing_support::rel_err;

namespace {

const SmoothFn T = SmoothFn::identity();
SmoothFn C(double c) { return SmoothFn::constant(c); }

}  // namespace

TEST(SmoothFn, ExponentialAtZero) {
  const Jet2 j = eval_jet2(SmoothFn::exp(C(1.0) * T), 0.0);
  EXPECT_DOUBLE_EQ(j.value, 1.0);
  EXPECT_DOUBLE_EQ(j.d1, 1.0);
  EXPECT_DOUBLE_EQ(j.d2, 1.0);
}

TEST(SmoothFn, ThreeHalvesPower) {
  const SmoothFn f = (2.0 / 3.0) * SmoothFn::pow(T, 3, 2) + C(0.0);
  const Jet2 j = eval_jet2(f, 4.0);
  EXPECT_NEAR(j.value, 16.0 / 3.0, 1e-14);
  EXPECT_NEAR(j.d1, 2.0, 1e-14);
  EXPECT_NEAR(j.d2, 0.25, 1e-14);
}

TEST(SmoothFn, BumpOutsideSupportIsZero) {
  const Jet2 j = eval_jet2(build_bump(1.0), 2.0);
  EXPECT_EQ(j.value, 0.0);
  EXPECT_EQ(j.d1, 0.0);
  EXPECT_EQ(j.d2, 0.0);
}

TEST(SmoothFn, BumpPlateauAndTransition) {
  const SmoothFn f = build_bump(1.0);
  EXPECT_EQ(f(0.25), 1.0);
  EXPECT_EQ(f(0.0), 1.0);
  EXPECT_EQ(f(1.5), 0.0);
  const double mid = f(0.75);
  EXPECT_GT(mid, 0.0);
  EXPECT_LT(mid, 1.0);
}

TEST(SmoothFn, BumpMonotoneBoundedAndC2) {
  for (double eta : {0.3, 1.0, 4.0}) {
    const SmoothFn f = build_bump(eta);
    double prev = 1.0;
    for (int i = 0; i <= 2000; ++i) {
      const double t = 1.5 * eta * i / 2000.0;
      const Jet2 j = f.eval(t);
      EXPECT_GE(j.value, 0.0);
      EXPECT_LE(j.value, 1.0);
      EXPECT_LE(j.value, prev + 1e-15) << "t=" << t;
      EXPECT_LE(j.d1, 1e-15);
      prev = j.value;
    }
    // Continuity of d1, d2 across the junctions eta/2 and eta.
    for (double x : {eta / 2.0, eta}) {
      const Jet2 l = f.eval(x - 1e-9), r = f.eval(x + 1e-9);
      EXPECT_NEAR(l.d1, r.d1, 1e-6);
      EXPECT_NEAR(l.d2, r.d2, 1e-6);
    }
  }
}

TEST(SmoothFn, BumpRejectsNonPositiveEta) {
  EXPECT_THROW(build_bump(0.0), ParameterError);
  EXPECT_THROW(build_bump(-1.0), ParameterError);
}

TEST(SmoothFn, DomainErrorsNameTheNode) {
  try {
    SmoothFn::inv(T).eval(0.0);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("t=0"), std::string::npos) << e.what();
  }
  EXPECT_THROW(SmoothFn::log(T).eval(0.0), DomainError);
  EXPECT_THROW(SmoothFn::pow(T, -1, 2).eval(0.0), DomainError);
  EXPECT_NO_THROW(T.eval(-1.0));  // polynomial nodes are defined everywhere
  EXPECT_THROW(SmoothFn::pow(T, 3, 2).eval(0.0), DomainError);  // second derivative blows up
}

TEST(SmoothFn, JsonRoundTripPreservesValues) {
  const nlohmann::json j = nlohmann::json::parse(
      R"({"kind":"exp","arg":{"kind":"mul","args":[{"kind":"const","value":1.0},{"kind":"t"}]}})");
  const SmoothFn f = SmoothFn::from_json(j);
  EXPECT_NEAR(f(1.0), std::exp(1.0), 1e-15);
  const SmoothFn g = SmoothFn::from_json(f.to_json());
  for (double t : {0.0, 0.5, 3.0}) {
    const Jet2 a = f.eval(t), b = g.eval(t);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.d1, b.d1);
    EXPECT_EQ(a.d2, b.d2);
  }
  const SmoothFn p = SmoothFn::from_json(nlohmann::json::parse(R"({"kind":"pow","num":3,"den":2,"arg":{"kind":"t"}})"));
  EXPECT_NEAR(p(4.0), 8.0, 1e-14);
  EXPECT_THROW(SmoothFn::from_json(nlohmann::json::parse(R"({"kind":"sinh","arg":{"kind":"t"}})")), ParameterError);
}

TEST(ExpressionParser, InfixMatchesTree) {
  const SmoothFn f = parse_expression("exp(t/2) + (2/3)*t^(3/2) - 1/(1+t) + log(2+t) * sqrt(t+1)");
  for (double t : {0.1, 1.0, 2.5}) {
    const double expect = std::exp(t / 2) + 2.0 / 3.0 * std::pow(t, 1.5) - 1 / (1 + t) + std::log(2 + t) * std::sqrt(t + 1);
    EXPECT_NEAR(f(t), expect, 1e-13 * (1 + std::abs(expect)));
  }
  EXPECT_NEAR(parse_expression("e")(0.0), std::exp(1.0), 1e-15);
  EXPECT_NEAR(parse_expression("-t^2")(3.0), -9.0, 1e-15);
  EXPECT_NEAR(parse_expression("2*t^-1")(4.0), 0.5, 1e-15);
  EXPECT_EQ(parse_expression("bump(1)")(0.25), 1.0);
  EXPECT_EQ(parse_expression("blend(1, 5, t)")(0.1), 5.0);
  EXPECT_EQ(parse_expression("blend(1, 5, t)")(3.0), 3.0);
}

TEST(ExpressionParser, ErrorsReportColumn) {
  try {
    parse_expression("1 + foo(t)");
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("column 5"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_expression("(t"), ParameterError);
  EXPECT_THROW(parse_expression("t^x"), ParameterError);
  EXPECT_THROW(parse_expression(""), ParameterError);
  EXPECT_THROW(parse_expression("t t"), ParameterError);
}

// ---- properties ------------------------------------------------------------------------------

namespace {

// Random expression trees that are smooth on [0.5, 3].
SmoothFn random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  switch (pick(rng)) {
    case 0: return C(coef(rng));
    case 1: return T;
    case 2: return random_tree(rng, depth - 1) + random_tree(rng, depth - 1);
    case 3: return random_tree(rng, depth - 1) * random_tree(rng, depth - 1);
    case 4: return -random_tree(rng, depth - 1);
    case 5: return SmoothFn::exp(0.3 * random_tree(rng, depth - 1));
    case 6: return SmoothFn::inv(C(3.0) + SmoothFn::pow(random_tree(rng, depth - 1), 2));
    default: return SmoothFn::log(C(1.0) + SmoothFn::pow(random_tree(rng, depth - 1), 2));
  }
}

// Central differences of the value with one Richardson step.
double fd1(const SmoothFn& f, double t, double h) {
  auto d = [&](double s) { return (f(t + s) - f(t - s)) / (2 * s); };
  return (4 * d(h / 2) - d(h)) / 3;
}
double fd2(const SmoothFn& f, double t, double h) {
  auto d = [&](double s) { return (f(t + s) - 2 * f(t) + f(t - s)) / (s * s); };
  return (4 * d(h / 2) - d(h)) / 3;
}

}  // namespace

TEST(SmoothFnProperty, JetsAgreeWithFiniteDifferences) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> tdist(0.5, 3.0);
  int checked = 0;
  for (int n = 0; n < 1000; ++n) {
    const SmoothFn f = random_tree(rng, 4);
    const double t = tdist(rng);
    const Jet2 j = f.eval(t);
    if (!std::isfinite(j.value) || std::abs(j.value) > 1e8) continue;
    const double h1 = 1e-3 * (1 + t), h2 = 1e-2 * (1 + t);
    const double s1 = std::abs(j.d1) + std::abs(j.value) + std::abs(j.d2) + 1e-3;
    EXPECT_LE(std::abs(fd1(f, t, h1) - j.d1) / s1, 1e-6) << f.to_string() << " at " << t;
    EXPECT_LE(std::abs(fd2(f, t, h2) - j.d2) / s1, 1e-6) << f.to_string() << " at " << t;
    ++checked;
  }
  EXPECT_GT(checked, 900);
}

TEST(SmoothFnProperty, SumAndProductRulesExactAtJetLevel) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> tdist(0.5, 3.0);
  for (int n = 0; n < 200; ++n) {
    const SmoothFn f = random_tree(rng, 3), g = random_tree(rng, 3);
    const double t = tdist(rng);
    const Jet2 a = f.eval(t), b = g.eval(t);
    const Jet2 s = (f + g).eval(t), p = (f * g).eval(t);
    EXPECT_EQ(s.value, a.value + b.value);
    EXPECT_EQ(s.d1, a.d1 + b.d1);
    EXPECT_EQ(s.d2, a.d2 + b.d2);
    EXPECT_EQ(p.value, a.value * b.value);
    EXPECT_EQ(p.d1, a.d1 * b.value + a.value * b.d1);
    EXPECT_EQ(p.d2, a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2);
  }
}

TEST(SmoothFnProperty, ChainRuleFaaDiBruno) {
  // (exp o g)'' = exp(g) (g'' + g'^2)
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> tdist(0.5, 3.0);
  for (int n = 0; n < 200; ++n) {
    const SmoothFn g = 0.2 * random_tree(rng, 3);
    const double t = tdist(rng);
    const Jet2 gj = g.eval(t), e = SmoothFn::exp(g).eval(t);
    const double ev = std::exp(gj.value);
    EXPECT_LE(rel_err(e.value, ev), 1e-15);
    EXPECT_LE(rel_err(e.d1, ev * gj.d1), 1e-14);
    EXPECT_LE(std::abs(e.d2 - ev * (gj.d2 + gj.d1 * gj.d1)), 1e-13 * (1 + std::abs(e.d2)));
  }
}

TEST(SmoothFnProperty, SymbolicDerivativeMatchesJets) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> tdist(0.5, 3.0);
  for (int n = 0; n < 200; ++n) {
    const SmoothFn f = random_tree(rng, 3);
    const double t = tdist(rng);
    const Jet2 j = f.eval(t), dj = derivative(f).eval(t);
    EXPECT_LE(std::abs(dj.value - j.d1), 1e-12 * (1 + std::abs(j.d1)));
    EXPECT_LE(std::abs(dj.d1 - j.d2), 1e-11 * (1 + std::abs(j.d2)));
  }
}

TEST(SmoothFnProperty, ConcurrentEvaluationIsDeterministic) {
  const SmoothFn f = parse_expression("exp(t/3)*(1+t)^(2/3) + bump(2)");
  std::vector<double> a(64), b(64);
  std::vector<std::thread> pool;
  for (int k = 0; k < 4; ++k)
    pool.emplace_back([&, k] {
      for (int i = k; i < 64; i += 4) a[i] = f(0.05 * i);
    });
  for (auto& th : pool) th.join();
  for (int i = 0; i < 64; ++i) b[i] = f(0.05 * i);
  EXPECT_EQ(a, b);
}
