#include "prodint/curves.hpp"
#include "prodint/error.hpp"
#include "prodint/group.hpp"
#include "prodint/model_space.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace prodint;

namespace {

ModelVector random_vector(const SpaceId& space, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd v(space.dimension());
  for (auto& x : v) x = n(rng);
  return {space, v};
}

std::vector<Seminorm> roster() {
  const auto m3 = SpaceId::matrix(3);
  const auto s16 = SpaceId::sequence(16);
  return {Seminorm::frobenius(m3),           Seminorm::frobenius(m3, 2.5),
          Seminorm::operator_norm(m3),       Seminorm::operator_norm(s16),
          Seminorm::weighted_sup(s16, 0),    Seminorm::weighted_sup(s16, 2, 0.5),
          Seminorm::weighted_sup(s16, 3, 1.0, Ladder::dyadic)};
}

}  // namespace

TEST(Seminorm, ZeroVector) {
  const auto s = SpaceId::matrix(2);
  EXPECT_EQ(Seminorm::frobenius(s)(ModelVector::zero(s)), 0.0);
}

TEST(Seminorm, ScaledFrobeniusOfIdentity) {
  const auto v = ModelVector::from_matrix(Eigen::Matrix2d::Identity());
  EXPECT_NEAR(Seminorm::frobenius(v.space(), 2.0)(v), 2.0 * std::sqrt(2.0), 1e-15);
}

TEST(Seminorm, OperatorNormIsLargestSingularValue) {
  Eigen::Matrix2d a;
  a << 3, 0, 0, -4;
  EXPECT_NEAR(Seminorm::operator_norm(SpaceId::matrix(2))(ModelVector::from_matrix(a)), 4.0, 1e-14);
}

TEST(Seminorm, WeightedSupLadders) {
  const auto s = SpaceId::sequence(8);
  const auto poly = Seminorm::weighted_sup(s, 2);
  const auto dyad = Seminorm::weighted_sup(s, 2, 1.0, Ladder::dyadic);
  EXPECT_DOUBLE_EQ(poly.weight(3), 16.0);
  EXPECT_DOUBLE_EQ(dyad.weight(3), 64.0);
  EXPECT_DOUBLE_EQ(poly(ModelVector::basis(s, 3) * -0.5), 8.0);
}

TEST(Seminorm, HomogeneityAndTriangleOnRandomPairs) {
  std::mt19937_64 rng(11);
  for (const auto& p : roster()) {
    for (int i = 0; i < 1000; ++i) {
      const auto v = random_vector(p.space(), rng);
      const auto w = random_vector(p.space(), rng);
      const double c = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
      ASSERT_NEAR(p(v * c), std::abs(c) * p(v), 1e-12 * (1 + p(v))) << p.id();
      ASSERT_LE(p(v + w), p(v) + p(w) + 1e-12) << p.id();
    }
  }
}

TEST(Seminorm, DimensionMismatchThrows) {
  const auto p = Seminorm::frobenius(SpaceId::matrix(2));
  EXPECT_THROW(p(ModelVector::zero(SpaceId::matrix(3))), ConfigurationError);
}

TEST(Seminorm, Ids) {
  EXPECT_EQ(Seminorm::frobenius(SpaceId::matrix(3), 1.25).id(), "frobenius*1.25");
  EXPECT_EQ(Seminorm::weighted_sup(SpaceId::sequence(4), 3).id(), "weighted-sup[3]*1");
}

TEST(SupSeminorm, EmptySetThrows) {
  const auto p = Seminorm::frobenius(SpaceId::matrix(2));
  EXPECT_THROW(sup_seminorm(p, std::span<const ModelVector>{}), DomainError);
}

TEST(SupSeminorm, ConstantAndLinearCurves) {
  const GroupPtr g = make_group("so3");
  const auto p = Seminorm::frobenius(g->space());
  const double c[] = {0.3, -0.1, 0.7};
  const auto x = g->algebra(c);
  EXPECT_NEAR(sup_seminorm(p, constant_curve(x, 0.0, 1.0), 50), p(x.coords), 1e-15);
  const PiecewiseCurve lin{g->id(), g->space(), {0.0, 1.0},
                           {[v = x.coords.coords()](double t) -> Eigen::VectorXd { return t * v; }}};
  EXPECT_NEAR(sup_seminorm(p, lin, 101), p(x.coords), 1e-15);
}

TEST(L1Seminorm, ConstantAndZero) {
  const GroupPtr g = make_group("gl2");
  const auto q = Seminorm::frobenius(g->space(), 1.5);
  const double c[] = {0.3, -0.1, 0.7, 0.2};
  const auto x = g->algebra(c);
  EXPECT_NEAR(l1_seminorm(q, constant_curve(x, 0.0, 1.0), 8), q(x.coords), 1e-14);
  EXPECT_EQ(l1_seminorm(q, zero_curve(*g, -1.0, 2.0), 8), 0.0);
}

TEST(L1Seminorm, QuadraticIntegrand) {
  const GroupPtr g = make_group("abelian:1");
  const auto q = Seminorm::frobenius(g->space());
  const PiecewiseCurve sq{g->id(), g->space(), {0.0, 2.0},
                          {[](double t) { return Eigen::VectorXd::Constant(1, t * t); }}};
  EXPECT_NEAR(l1_seminorm(q, sq, 4096), 8.0 / 3.0, 1e-6);
}

TEST(SeminormFamily, WeightedLadderIsDominated) {
  const auto s = SpaceId::sequence(16);
  const auto family = SeminormFamily::weighted_ladder(s, 4, Ladder::polynomial);
  ASSERT_EQ(family.members().size(), 5u);
  std::mt19937_64 rng(5);
  std::vector<ModelVector> samples;
  for (int i = 0; i < 500; ++i) samples.push_back(random_vector(s, rng));
  EXPECT_TRUE(family.dominated_on(1, 3, samples));
  EXPECT_FALSE(family.dominated_on(3, 1, samples));
}

TEST(Seminorm, DyadicLadderOnBasisVector) {
  const auto s = SpaceId::sequence(16);
  EXPECT_DOUBLE_EQ(Seminorm::weighted_sup(s, 3, 1.0, Ladder::dyadic)(ModelVector::basis(s, 2)), 64.0);
  EXPECT_DOUBLE_EQ(Seminorm::weighted_sup(s, 3)(ModelVector::basis(s, 2)), 27.0);
}
