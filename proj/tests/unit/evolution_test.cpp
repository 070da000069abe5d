#include "prodint/error.hpp"
#include "prodint/evolution.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace prodint;

namespace {

double gap(const GroupElement& a, const Eigen::MatrixXd& b) { return (a.value - b).norm(); }

StepperConfig stepper(Scheme s, int spu, bool refine = true) { return {s, spu, refine}; }

// φ(t) = E01 + t·E12 on heis3; exact solution [[1, t, t³/6], [0, 1, t²/2], [0, 0, 1]].
PiecewiseCurve heis_curve(const Group& g) {
  return {g.id(), g.space(), {0.0, 1.0}, {[&g](double t) {
            const double c[] = {1.0, t, 0.0};
            return g.algebra(c).coords.coords();
          }}};
}

Eigen::MatrixXd heis_exact(double t) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 1) = t;
  m(1, 2) = 0.5 * t * t;
  m(0, 2) = t * t * t / 6.0;
  return m;
}

// φ(t) = cos(3t)·[w]_x on so3; ⨏_0^t φ = exp(sin(3t)/3·[w]_x).
PiecewiseCurve axis_curve(const Group& g, const Eigen::Vector3d& w) {
  return {g.id(), g.space(), {0.0, 1.0}, {[&g, w](double t) {
            return so3::hat(g, std::cos(3 * t) * w).coords.coords();
          }}};
}

template <class F>
double fitted_order(F&& residual_at) {
  std::vector<double> hs, rs;
  for (int spu = 1 << 6; spu <= 1 << 10; spu *= 2) {
    hs.push_back(1.0 / spu);
    rs.push_back(residual_at(spu));
  }
  return oracle::loglog_slope(hs, rs);
}

struct EngineTest : ::testing::Test {
  GroupPtr so3g = make_group("so3");
  GroupPtr heis = make_group("heis3");
  GroupPtr ab = make_group("abelian:4");
  Seminorm p = Seminorm::frobenius(so3g->space());
  Seminorm ph = Seminorm::frobenius(heis->space());
  std::mt19937_64 rng{2024};
};

}  // namespace

TEST_F(EngineTest, ZeroCurveGivesIdentity) {
  const auto r = evolve(*so3g, zero_curve(*so3g, 0.0, 1.0), 0.0, 1.0, {});
  EXPECT_EQ(gap(r.endpoint, Eigen::MatrixXd::Identity(3, 3)), 0.0);
}

TEST_F(EngineTest, ConstantCurveIsExp) {
  const Eigen::Vector3d w(0.3, -0.7, 0.4);
  const auto x = so3::hat(*so3g, w);
  for (Scheme s : {Scheme::left_euler, Scheme::midpoint}) {
    const auto r = evolve(*so3g, constant_curve(x, 0.0, 1.0), 0.0, 1.0, stepper(s, 100));
    EXPECT_LT(gap(r.endpoint, oracle::rodrigues(w)), 1e-13) << scheme_name(s);
  }
}

TEST_F(EngineTest, TrajectoryFollowsOneParameterSubgroup) {
  const Eigen::Vector3d w(0.1, 0.2, -0.9);
  const auto x = so3::hat(*so3g, w);
  const auto r = evolve(*so3g, constant_curve(x, 0.0, 1.0), 0.0, 1.0, stepper(Scheme::midpoint, 64), true);
  ASSERT_TRUE(r.trajectory);
  const auto& tr = *r.trajectory;
  ASSERT_EQ(tr.times.size(), 65u);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    ASSERT_LT(gap(tr.values[k], oracle::rodrigues(tr.times[k] * w)), 1e-13);
  }
  EXPECT_EQ(gap(tr.values.back(), r.endpoint.value), 0.0);
  const auto zero = evolve_curve(*so3g, zero_curve(*so3g, 0.0, 1.0), 0.0, stepper(Scheme::midpoint, 16));
  for (const auto& v : zero.values) EXPECT_EQ(gap(v, Eigen::MatrixXd::Identity(3, 3)), 0.0);
}

TEST_F(EngineTest, SchemeOrdersOnHeisenberg) {
  const auto phi = heis_curve(*heis);
  const auto err = [&](Scheme s) {
    return fitted_order([&](int spu) { return gap(evolve(*heis, phi, 0.0, 1.0, stepper(s, spu)).endpoint, heis_exact(1.0)); });
  };
  EXPECT_NEAR(err(Scheme::left_euler), 1.0, 0.1);
  EXPECT_NEAR(err(Scheme::midpoint), 2.0, 0.1);
}

TEST_F(EngineTest, FixedAxisCurveOnSo3) {
  const Eigen::Vector3d w(0.6, -0.2, 0.5);
  const auto phi = axis_curve(*so3g, w);
  const auto r = evolve(*so3g, phi, 0.0, 1.0, stepper(Scheme::midpoint, 1024));
  EXPECT_LT(gap(r.endpoint, oracle::rodrigues(std::sin(3.0) / 3.0 * w)), 1e-6);
  const auto order = fitted_order([&](int spu) {
    return gap(evolve(*so3g, phi, 0.0, 1.0, stepper(Scheme::midpoint, spu)).endpoint,
               oracle::rodrigues(std::sin(3.0) / 3.0 * w));
  });
  EXPECT_NEAR(order, 2.0, 0.1);
}

TEST_F(EngineTest, AbelianEvolveIsRiemannIntegral) {
  const auto phi = random_polynomial_curve(*ab, rng, 1.0, 0.0, 1.0);
  const auto cfg = stepper(Scheme::midpoint, 512);
  const auto nodes = make_partition(phi, 0.0, 1.0, cfg);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(4);
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double h = nodes[k + 1] - nodes[k];
    sum += h * phi(nodes[k] + 0.5 * h).coords();
  }
  EXPECT_LT((evolve(*ab, phi, 0.0, 1.0, cfg).endpoint.value - Eigen::MatrixXd(sum)).norm(), 1e-12);
}

TEST_F(EngineTest, PartitionRefinesAtBreakpoints) {
  const double cuts[] = {0.3};
  const auto phi = refine(zero_curve(*so3g, 0.0, 1.0), cuts);
  const auto nodes = make_partition(phi, 0.0, 1.0, stepper(Scheme::midpoint, 10));
  EXPECT_NE(std::find(nodes.begin(), nodes.end(), 0.3), nodes.end());
  EXPECT_EQ(nodes.size(), 11u);
  const auto flat = make_partition(phi, 0.0, 1.0, stepper(Scheme::midpoint, 8, false));
  EXPECT_EQ(flat.size(), 9u);
  EXPECT_EQ(make_partition(phi, 0.5, 0.5, {}).size(), 1u);
}

TEST_F(EngineTest, EvolveOutsideDomainThrows) {
  EXPECT_THROW(evolve(*so3g, zero_curve(*so3g, 0.0, 1.0), 0.0, 1.5, {}), DomainError);
  EXPECT_THROW(evolve(*heis, zero_curve(*so3g, 0.0, 1.0), 0.0, 1.0, {}), ConfigurationError);
}

TEST_F(EngineTest, LogDerivative) {
  const auto x = so3g->random_algebra(rng, 1.0);
  const auto mu = one_parameter_subgroup(so3g, x, 0.0, 2.0);
  for (double t : {0.0, 0.7, 2.0}) {
    EXPECT_LT(p(log_derivative(mu, t).coords - x.coords), 1e-12);
    EXPECT_LT(p(log_derivative_via_chart(rescale_group_curve(mu, 0.5, 1), std::min(t, 0.9)).coords -
                0.5 * x.coords),
              1e-7);
  }
  const auto g0 = so3g->exp(x);
  GroupCurve still(so3g, 0.0, 1.0, [g0](double) { return g0.value; },
                   [](double) { return Eigen::MatrixXd::Zero(3, 3).eval(); }, Smoothness::c1);
  EXPECT_LT(p(log_derivative(still, 0.4).coords), 1e-15);
}

TEST_F(EngineTest, IdentityADegenerateCases) {
  const auto phi = random_trig_curve(*so3g, rng, 1.0, 0.0, 1.0);
  EXPECT_LE(identity_a_residual(*so3g, phi, zero_curve(*so3g, 0.0, 1.0), p, {}), 1e-12);
  const auto pa = Seminorm::frobenius(ab->space());
  const auto u = random_trig_curve(*ab, rng, 1.0, 0.0, 1.0);
  const auto v = random_polynomial_curve(*ab, rng, 1.0, 0.0, 1.0);
  EXPECT_LE(identity_a_residual(*ab, u, v, pa, {}), 1e-12);
  EXPECT_LE(identity_b_residual(*ab, u, v, pa, {}), 1e-12);
}

TEST_F(EngineTest, IdentityAConvergesWithOrderTwo) {
  const auto phi = random_trig_curve(*so3g, rng, 1.0, 0.0, 1.0);
  const auto psi = random_trig_curve(*so3g, rng, 1.0, 0.0, 1.0);
  const double order = fitted_order([&](int spu) {
    return identity_a_residual(*so3g, phi, psi, p, stepper(Scheme::midpoint, spu));
  });
  EXPECT_GE(order, 1.7);
}

TEST_F(EngineTest, InverseAdjointVariantDoesNotHold) {
  const auto phi = random_trig_curve(*so3g, rng, 1.0, 0.0, 1.0);
  const auto psi = random_trig_curve(*so3g, rng, 1.0, 0.0, 1.0);
  const auto cfg = stepper(Scheme::midpoint, 1024);
  const double correct = identity_a_residual(*so3g, phi, psi, p, cfg);
  const double variant = identity_a_inverse_ad_residual(*so3g, phi, psi, p, cfg);
  EXPECT_LT(correct, 1e-5);
  EXPECT_GT(variant, 1e-2);
  EXPECT_GT(identity_a_inverse_ad_residual(*so3g, phi, psi, p, stepper(Scheme::midpoint, 4096)), 1e-2);
}

TEST_F(EngineTest, IdentityB) {
  const auto phi = random_trig_curve(*heis, rng, 1.0, 0.0, 1.0);
  EXPECT_LE(identity_b_residual(*heis, phi, phi, ph, {}), 1e-12);
  const auto psi = random_polynomial_curve(*heis, rng, 1.0, 0.0, 1.0);
  const double order = fitted_order([&](int spu) {
    return identity_b_residual(*heis, phi, psi, ph, stepper(Scheme::midpoint, spu));
  });
  EXPECT_GE(order, 1.7);
}

TEST_F(EngineTest, IdentityC) {
  const auto phi = random_trig_curve(*so3g, rng, 1.0, 0.0, 1.0);
  const double whole[] = {0.0, 1.0};
  EXPECT_LE(identity_c_residual(*so3g, phi, whole, p, {}), 1e-14);
  const double grid[] = {0.0, 0.5, 1.0};
  EXPECT_LE(identity_c_residual(*so3g, phi, grid, p, {}), 1e-12);
  const double odd[] = {0.0, 0.1234567, 0.61, 1.0};
  EXPECT_LE(identity_c_residual(*so3g, phi, odd, p, stepper(Scheme::midpoint, 256)), 1e-12);
  EXPECT_GT(identity_c_residual(*so3g, phi, odd, p, stepper(Scheme::midpoint, 256, false)), 1e-10);
}

TEST_F(EngineTest, IdentityD) {
  const auto phi = random_trig_curve(*so3g, rng, 1.0, 0.0, 1.0);
  EXPECT_LE(identity_d_residual(*so3g, phi, Reparametrization::affine(0.0, 1.0, 1.0, 0.0), p, {}), 1e-12);
  EXPECT_LE(identity_d_residual(*so3g, phi, Reparametrization::affine(0.0, 2.0, 0.25, 0.5), p,
                                stepper(Scheme::left_euler, 256)),
            1e-12);
  const Reparametrization square{0.0, 1.0, [](double t) { return t * t; }, [](double t) { return 2 * t; }, true};
  const double order = fitted_order([&](int spu) {
    return identity_d_residual(*so3g, phi, square, p, stepper(Scheme::midpoint, spu));
  });
  EXPECT_GE(order, 1.7);
}

TEST_F(EngineTest, ExpScaling) {
  const auto x = so3::hat(*so3g, {0.0, 0.0, 0.4});
  const auto one = exp_scaling_check(*so3g, x, 1.0, 1, p, {});
  EXPECT_LE(one.scaled_residual, 1e-12);
  EXPECT_LE(one.power_residual, 1e-12);
  const auto five = exp_scaling_check(*so3g, x, 1.0, 5, p, {});
  EXPECT_LE(five.power_residual, 1e-10);
  const auto pa = Seminorm::frobenius(ab->space());
  const auto v = ab->random_algebra(rng, 1.0);
  EXPECT_LE(exp_scaling_check(*ab, v, 0.5, 3, pa, {}).scaled_residual, 1e-13);
  EXPECT_THROW(exp_scaling_check(*so3g, x, 0.0, 2, p, {}), DomainError);
}

TEST_F(EngineTest, StretchedConstantCurveOnSo3) {
  const auto x = so3g->random_algebra(rng, 0.9);
  for (int n = 1; n <= 8; ++n) {
    const auto r = evolve(*so3g, constant_curve(x, 0.0, n), 0.0, n, {});
    ASSERT_LT(gap(r.endpoint, so3g->power(so3g->exp(x), n).value), 1e-9) << n;
  }
}
