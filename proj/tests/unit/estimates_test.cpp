#include "prodint/error.hpp"
#include "prodint/estimates.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace prodint;

namespace {

struct ProbeTest : ::testing::Test {
  GroupPtr so3g = make_group("so3");
  GroupPtr ab = make_group("abelian:6");
  GroupPtr gl2 = make_group("gl2");
  Seminorm p3 = Seminorm::frobenius(so3g->space());
  Seminorm pa = Seminorm::frobenius(ab->space());
  StepperConfig cfg{Scheme::midpoint, 256, true};
  std::mt19937_64 rng{99};
};

}  // namespace

TEST_F(ProbeTest, ViolationTolerance) {
  EXPECT_FALSE(ProbeReport::is_violation(1.0, 1.0 + 1e-11));
  EXPECT_TRUE(ProbeReport::is_violation(1.0, 1.0 + 1e-9));
  EXPECT_FALSE(ProbeReport::is_violation(0.0, 1e-14));
  EXPECT_TRUE(ProbeReport::is_violation(0.0, 1e-12));
}

TEST_F(ProbeTest, AbelianMuConvexityIsTriangleInequality) {
  const auto r = mu_convexity_probe(*ab, pa, pa, {10000, 8, 0.5, 1});
  EXPECT_EQ(r.samples, 10000u);
  EXPECT_EQ(r.violations, 0u);
}

TEST_F(ProbeTest, SingleFactorHasNonnegativeMargin) {
  for (const GroupPtr& g : {so3g, gl2}) {
    const auto p = Seminorm::frobenius(g->space());
    const auto r = mu_convexity_probe(*g, p, p, {2000, 1, 0.5, 2});
    EXPECT_EQ(r.violations, 0u) << g->id();
    EXPECT_GE(r.worst_margin, -1e-13) << g->id();
  }
  const auto pg = Seminorm::frobenius(gl2->space());
  EXPECT_GT(mu_convexity_probe(*gl2, pg, pg, {2000, 1, 0.5, 2}).hypothesis_failures, 0u);
}

TEST_F(ProbeTest, MuConvexityNeedsDominatingQ) {
  EXPECT_THROW(mu_convexity_probe(*so3g, p3, p3.scaled(0.5), {10, 2, 0.5, 3}), ContractError);
}

TEST_F(ProbeTest, MuConvexityIsDeterministic) {
  const auto a = mu_convexity_probe(*gl2, Seminorm::frobenius(gl2->space()), Seminorm::frobenius(gl2->space(), 2.0),
                                    {500, 8, 0.5, 17});
  const auto b = mu_convexity_probe(*gl2, Seminorm::frobenius(gl2->space()), Seminorm::frobenius(gl2->space(), 2.0),
                                    {500, 8, 0.5, 17});
  EXPECT_EQ(a.csv_row(), b.csv_row());
  EXPECT_EQ(a.witness, b.witness);
}

TEST_F(ProbeTest, AdjointDomination) {
  const GroupElement e[] = {so3g->identity()};
  const auto at_e = adjoint_domination_probe(*so3g, p3, p3, e, {200, 1, 0.5, 4});
  EXPECT_EQ(at_e.violations, 0u);
  EXPECT_NEAR(at_e.worst_margin, 0.0, 1e-15);

  const auto ball = sample_group_ball(*so3g, 30, 2.0, 5);
  EXPECT_TRUE(adjoint_domination_probe(*so3g, p3, p3, ball, {200, 1, 1.0, 6}).passed());

  const auto pg = Seminorm::frobenius(gl2->space());
  const auto gl_ball = sample_group_ball(*gl2, 30, 0.5, 7);
  const SampleSpec spec{200, 1, 1.0, 8};
  EXPECT_FALSE(adjoint_domination_probe(*gl2, pg, pg, gl_ball, spec).passed());
  const double scales[] = {1.0, 1.5, 2.0, 3.0, 4.0};
  std::vector<ProbeReport> reports;
  const auto c = seminorm_search(
      pg, scales, [&](const Seminorm& m) { return adjoint_domination_probe(*gl2, pg, m, gl_ball, spec); }, &reports);
  ASSERT_TRUE(c.has_value());
  EXPECT_GT(*c, 1.0);
  EXPECT_TRUE(reports.back().passed());
}

TEST_F(ProbeTest, Prop2Cases) {
  const auto zero = prop2_bound_check(*so3g, p3, p3, zero_curve(*so3g, 0.0, 1.0), cfg);
  EXPECT_EQ(zero.violations, 0u);
  EXPECT_EQ(zero.worst_margin, 0.0);

  for (int i = 0; i < 10; ++i) {
    const auto phi = random_trig_curve(*ab, rng, 2.0, 0.0, 1.0);
    EXPECT_TRUE(prop2_bound_check(*ab, pa, pa, phi, cfg).passed());
  }
  const auto big = random_trig_curve(*so3g, rng, 5.0, 0.0, 1.0);
  const auto r = prop2_bound_check(*so3g, p3, p3, big, cfg);
  EXPECT_LT(r.input_scale, 1.0);
  EXPECT_TRUE(r.passed());

  const auto x = so3g->random_algebra(rng, 1.0);
  const auto line = constant_curve({x.group_id, x.coords * (0.4 / p3(x.coords))}, 0.0, 1.0);
  const auto control = prop2_bound_check(*so3g, p3, p3.scaled(0.5), line, cfg);
  EXPECT_GT(control.violations, 0u);
  EXPECT_NEAR(control.worst_margin, -0.2, 1e-12);
}

TEST_F(ProbeTest, TwoCurveCases) {
  const auto phi = random_trig_curve(*so3g, rng, 1.0, 0.0, 1.0);
  EXPECT_TRUE(two_curve_bound_check(*so3g, p3, p3, phi, phi, cfg, 2.0).passed());
  for (int i = 0; i < 10; ++i) {
    const auto u = random_trig_curve(*ab, rng, 1.0, 0.0, 1.0);
    const auto v = random_polynomial_curve(*ab, rng, 1.0, 0.0, 1.0);
    EXPECT_TRUE(two_curve_bound_check(*ab, pa, pa, u, v, cfg, 10.0).passed());
  }
  int passed = 0;
  for (int i = 0; i < 100; ++i) {
    const auto u = random_trig_curve(*so3g, rng, 1.0, 0.0, 1.0);
    const auto v = random_trig_curve(*so3g, rng, 1.0, 0.0, 1.0);
    passed += two_curve_bound_check(*so3g, p3, p3, u, v, cfg, 2.0).passed();
  }
  EXPECT_EQ(passed, 100);
}

TEST_F(ProbeTest, TwoCurveCountsHypothesisFailures) {
  const auto x = so3g->random_algebra(rng, 1.0);
  const auto far = constant_curve({x.group_id, x.coords * (3.0 / p3(x.coords))}, 0.0, 1.0);
  const auto r = two_curve_bound_check(*so3g, p3, p3, far, far, cfg, 0.5);
  EXPECT_GT(r.hypothesis_failures, 0u);
}

TEST_F(ProbeTest, SearchAbelianFindsOne) {
  const double scales[] = {1.0, 2.0};
  const auto c = seminorm_search(pa, scales, [&](const Seminorm& q) {
    return mu_convexity_probe(*ab, pa, q, {2000, 8, 0.5, 9});
  });
  ASSERT_TRUE(c);
  EXPECT_EQ(*c, 1.0);
  const double unsorted[] = {2.0, 1.0};
  EXPECT_THROW(seminorm_search(pa, unsorted, [&](const Seminorm& q) { return mu_convexity_probe(*ab, pa, q, {}); }),
               ConfigurationError);
}

TEST_F(ProbeTest, SearchReportsNotFound) {
  const auto x = so3g->random_algebra(rng, 1.0);
  const auto line = constant_curve({x.group_id, x.coords * (0.4 / p3(x.coords))}, 0.0, 1.0);
  const double scales[] = {0.25, 0.5};
  std::vector<ProbeReport> reports;
  const auto c = seminorm_search(
      p3, scales, [&](const Seminorm& q) { return prop2_bound_check(*so3g, p3, q, line, cfg); }, &reports);
  EXPECT_FALSE(c);
  EXPECT_EQ(reports.size(), 2u);
}

TEST_F(ProbeTest, WeightedLadderSearchOnDiagonalOperators) {
  const GroupPtr d = make_group("diagop:16");
  const auto p = Seminorm::weighted_sup(d->space(), 2);
  const auto ball = sample_group_ball(*d, 10, 0.5, 10);
  std::optional<int> found;
  for (int k = 0; k <= 6 && !found; ++k) {
    const auto m = Seminorm::weighted_sup(d->space(), k);
    if (adjoint_domination_probe(*d, p, m, ball, {200, 1, 0.5, 11}).passed()) found = k;
  }
  ASSERT_TRUE(found);
  EXPECT_EQ(*found, 2);
}

TEST_F(ProbeTest, CsvSchema) {
  EXPECT_EQ(ProbeReport::csv_header(), "probe,group,p,q,samples,violations,worst_margin,seed");
  ProbeReport r{"prop2", "so3", "frobenius*1", "frobenius*2"};
  r.seed = 7;
  r.record(1.0, 0.25, [] { return std::string("w"); });
  EXPECT_EQ(r.csv_row(), "prop2,so3,frobenius*1,frobenius*2,1,0,0.75,7");
}
