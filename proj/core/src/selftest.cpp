#include "prodint/error.hpp"
#include "prodint/estimates.hpp"
#include "prodint/experiment.hpp"
#include "prodint/format.hpp"
#include "prodint/trotter.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>

namespace prodint {

namespace {

struct Suite {
  std::ostream& out;
  int failures = 0;

  void check(const std::string& name, const std::function<bool()>& body) {
    bool ok = false;
    std::string note;
    try {
      ok = body();
    } catch (const std::exception& e) {
      note = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "PASS " : "FAIL ") << name << note << '\n';
    if (!ok) ++failures;
  }
};

double dist(const GroupElement& a, const GroupElement& b) { return (a.value - b.value).norm(); }

}  // namespace

int selftest(std::ostream& out) {
  Suite s{out};
  std::mt19937_64 rng(7);

  const auto mat2 = SpaceId::matrix(2);
  s.check("seminorm of zero", [&] { return Seminorm::frobenius(mat2)(ModelVector::zero(mat2)) == 0.0; });
  s.check("frobenius homogeneity", [&] {
    const auto v = ModelVector::from_matrix(Eigen::MatrixXd::Identity(2, 2));
    return std::abs(Seminorm::frobenius(mat2, 2.0)(v) - 2.0 * std::sqrt(2.0)) < 1e-14;
  });

  const GroupPtr so3 = make_group("so3");
  const GroupPtr ab = make_group("abelian:4");
  const Seminorm p3 = Seminorm::frobenius(so3->space());
  const Seminorm pa = Seminorm::frobenius(ab->space());
  const AlgebraElement x = so3->random_algebra(rng, 0.8);
  const AlgebraElement v = ab->random_algebra(rng, 0.8);
  const AlgebraElement w = ab->random_algebra(rng, 0.8);

  s.check("curve sup of constant", [&] {
    return std::abs(sup_seminorm(p3, constant_curve(x, 0.0, 1.0), 11) - p3(x.coords)) < 1e-14;
  });
  s.check("curve sup of t·X", [&] {
    const PiecewiseCurve lin{so3->id(), so3->space(), {0.0, 1.0},
                             {[c = x.coords.coords()](double t) -> Eigen::VectorXd { return t * c; }}};
    return std::abs(sup_seminorm(p3, lin, 101) - p3(x.coords)) < 1e-14;
  });
  s.check("l1 of constant", [&] {
    return std::abs(l1_seminorm(p3, constant_curve(x, 0.0, 1.0), 16) - p3(x.coords)) < 1e-13;
  });
  s.check("l1 of zero", [&] { return l1_seminorm(p3, zero_curve(*so3, 0.0, 3.0), 16) == 0.0; });

  s.check("multiply(identity, g)", [&] {
    const auto g = so3->exp(x);
    return dist(so3->multiply(so3->identity(), g), g) < 1e-15;
  });
  s.check("abelian multiply is addition", [&] {
    const auto sum = ab->multiply(ab->exp(v), ab->exp(w));
    return dist(sum, ab->exp(ab->algebra(v.coords + w.coords))) < 1e-15;
  });
  s.check("exp(0) = e", [&] { return dist(so3->exp(so3->zero_algebra()), so3->identity()) < 1e-15; });
  s.check("chart_forward(e) = 0", [&] { return p3(so3->chart_forward(so3->identity())) < 1e-15; });
  s.check("chart_backward = exp near 0", [&] {
    const auto y = so3->random_algebra(rng, 0.3);
    return dist(so3->chart_backward(y.coords), so3->exp(y)) < 1e-13;
  });
  s.check("Ad_e = id", [&] { return p3(so3->adjoint(so3->identity(), x).coords - x.coords) < 1e-15; });
  s.check("abelian Ad trivial", [&] { return pa(ab->adjoint(ab->exp(v), w).coords - w.coords) < 1e-15; });
  s.check("validate(e) empty", [&] { return so3->validate(so3->identity()).empty(); });
  s.check("validate reflection", [&] {
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(3, 3);
    r(2, 2) = -1.0;
    const auto issues = so3->validate({so3->id(), r});
    return std::find(issues.begin(), issues.end(), "orientation") != issues.end();
  });

  s.check("scale_curve(0) is zero", [&] {
    return p3(scale_curve(0.0, constant_curve(x, 0.0, 1.0))(0.4)) == 0.0;
  });
  s.check("restrict constant", [&] {
    const auto r = restrict_to(constant_curve(x, 0.0, 1.0), 0.2, 0.7);
    return r.begin() == 0.2 && r.end() == 0.7 && p3(r(0.5) - x.coords) == 0.0;
  });
  s.check("reparametrize by 2t", [&] {
    const auto r = reparametrize(constant_curve(x, 0.0, 1.0), Reparametrization::affine(0.0, 0.5, 2.0, 0.0));
    return p3(r(0.3) - 2.0 * x.coords) < 1e-14;
  });

  StepperConfig cfg;
  s.check("log derivative of exp(tX)", [&] {
    const auto mu = one_parameter_subgroup(so3, x, 0.0, 1.0);
    return p3(log_derivative(mu, 0.4).coords - x.coords) < 1e-12;
  });
  s.check("evolve zero curve", [&] {
    return dist(evolve(*so3, zero_curve(*so3, 0.0, 1.0), 0.0, 1.0, cfg).endpoint, so3->identity()) == 0.0;
  });
  s.check("evolve constant = exp", [&] {
    const StepperConfig euler{Scheme::left_euler, 256, true};
    return dist(evolve(*so3, constant_curve(x, 0.0, 1.0), 0.0, 1.0, euler).endpoint, so3->exp(x)) < 1e-12;
  });
  const auto random_phi = random_trig_curve(*so3, rng, 1.0, 0.0, 1.0);
  s.check("identity a with ψ = 0", [&] {
    return identity_a_residual(*so3, random_phi, zero_curve(*so3, 0.0, 1.0), p3, cfg) <= 1e-12;
  });
  s.check("identity b with ψ = φ", [&] {
    return identity_b_residual(*so3, random_phi, random_phi, p3, cfg) <= 1e-12;
  });
  s.check("identity c on the step grid", [&] {
    const double cut[] = {0.0, 0.5, 1.0};
    return identity_c_residual(*so3, random_phi, cut, p3, cfg) <= 1e-12;
  });
  s.check("identity d, identity map", [&] {
    return identity_d_residual(*so3, random_phi, Reparametrization::affine(0.0, 1.0, 1.0, 0.0), p3, cfg) <= 1e-12;
  });
  s.check("exp scaling s=1, n=1", [&] {
    const auto r = exp_scaling_check(*so3, x, 1.0, 1, p3, cfg);
    return r.scaled_residual <= 1e-12 && r.power_residual <= 1e-12;
  });

  const SampleSpec small{500, 6, 0.5, 3};
  s.check("abelian μ-convexity with q = p", [&] { return mu_convexity_probe(*ab, pa, pa, small).passed(); });
  s.check("Ad domination at e", [&] {
    const GroupElement e[] = {so3->identity()};
    return adjoint_domination_probe(*so3, p3, p3, e, small).passed();
  });
  s.check("prop2 with φ ≡ 0", [&] {
    return prop2_bound_check(*so3, p3, p3, zero_curve(*so3, 0.0, 1.0), cfg).worst_margin == 0.0;
  });
  s.check("abelian prop2 with q = p", [&] {
    return prop2_bound_check(*ab, pa, pa, random_trig_curve(*ab, rng, 1.0, 0.0, 1.0), cfg).passed();
  });
  s.check("two-curve with ψ = φ", [&] {
    const auto r = two_curve_bound_check(*so3, p3, p3, random_phi, random_phi, cfg, 2.0);
    return r.passed();
  });

  const auto fam = make_trotter_family(one_parameter_subgroup(so3, x, 0.0, 1.0), 2.0);
  s.check("χ at τ = 0 is zero", [&] { return p3(build_chi(fam, 0.0, fam.m)(0.0)) < 1e-15; });
  s.check("power identity, τ = 0", [&] { return verify_power_identity(fam, 0.0, fam.m, p3, cfg) <= 1e-12; });
  s.check("Trotter error for exp(tX)", [&] {
    double worst = 0.0;
    for (int n : {fam.m, 4 * fam.m, 16 * fam.m}) worst = std::max(worst, trotter_error(fam, 1.7, n, p3));
    return worst <= 1e-12;
  });
  s.check("continuity of zero curve", [&] {
    for (double o : continuity_probe(*so3, zero_curve(*so3, 0.0, 1.0), 0.0, 2.0, 3, p3, cfg)) {
      if (o != 0.0) return false;
    }
    return true;
  });
  s.check("registry lists so3 and exp-product", [&] {
    const auto text = list_registry();
    return text.find("so3") != std::string::npos && text.find("exp-product") != std::string::npos;
  });

  out << (s.failures == 0 ? "selftest passed" : "selftest FAILED: " + std::to_string(s.failures)) << '\n';
  return s.failures == 0 ? 0 : 1;
}

}  // namespace prodint
