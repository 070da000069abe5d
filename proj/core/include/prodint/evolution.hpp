#pragma once

// The product integral ⨏ (evolution map), the right logarithmic derivative δ,
// and residual checks for the elementary product-integral identities.
//
// Conventions: ⨏_s^t φ is the solution of μ̇ = φ·μ (right logarithmic
// derivative φ) with μ(s) = e, evaluated at t. Discretely, later steps are
// multiplied on the LEFT: g ← exp(h·φ(u))·g.

#include "prodint/curves.hpp"
#include "prodint/group.hpp"

#include <optional>
#include <vector>

namespace prodint {

enum class Scheme { left_euler, midpoint };

const char* scheme_name(Scheme scheme);
Scheme parse_scheme(std::string_view name);

struct StepperConfig {
  Scheme scheme = Scheme::midpoint;
  int steps_per_unit = 1024;
  // Every breakpoint of the integrand becomes a partition point.
  bool breakpoint_refinement = true;
};

// Partial products at partition points; times.front() = s, values.front() = e.
struct Trajectory {
  std::vector<double> times;
  std::vector<GroupElement> values;
};

struct EvolutionResult {
  GroupElement endpoint;
  std::optional<Trajectory> trajectory;
  std::vector<double> partition;
  Scheme scheme = Scheme::midpoint;
};

// Step nodes used by evolve for [s, t]. With refinement, each sub-interval
// between consecutive breakpoints gets ceil(length·steps_per_unit) uniform
// steps; without it, [s, t] is split uniformly and breakpoints are ignored.
std::vector<double> make_partition(const PiecewiseCurve& phi, double s, double t,
                                   const StepperConfig& cfg);

EvolutionResult evolve(const Group& group, const PiecewiseCurve& phi, double s, double t,
                       const StepperConfig& cfg, bool keep_trajectory = false);

// ⨏_s^• φ at every partition point of [s, φ.end()].
Trajectory evolve_curve(const Group& group, const PiecewiseCurve& phi, double s,
                        const StepperConfig& cfg);

// δ(μ)(t) = d_μR_{μ⁻¹}(μ̇(t)).
AlgebraElement log_derivative(const GroupCurve& mu, double t);

// δ(μ)(t) = Ω(κ(μ(t)), ∂_t(κ∘μ)(t)) with a central-difference ∂_t; requires
// μ(t) inside the chart domain.
AlgebraElement log_derivative_via_chart(const GroupCurve& mu, double t);

// Each residual is p∘κ(left⁻¹·right) at the end of the domain.

// ⨏φ·⨏ψ against ⨏(φ + Ad_{⨏_r^•φ}(ψ)).
double identity_a_residual(const Group& group, const PiecewiseCurve& phi, const PiecewiseCurve& psi,
                           const Seminorm& p, const StepperConfig& cfg);

// Same comparison with Ad_{[⨏_r^•φ]⁻¹}(ψ) as the right-hand integrand; kept to
// document that this variant does not hold.
double identity_a_inverse_ad_residual(const Group& group, const PiecewiseCurve& phi,
                                      const PiecewiseCurve& psi, const Seminorm& p,
                                      const StepperConfig& cfg);

// [⨏φ]⁻¹[⨏ψ] against ⨏ Ad_{[⨏_r^•φ]⁻¹}(ψ − φ).
double identity_b_residual(const Group& group, const PiecewiseCurve& phi, const PiecewiseCurve& psi,
                           const Seminorm& p, const StepperConfig& cfg);

// ⨏_r^{r'} φ against ⨏_{t_{n-1}}^{r'}φ · … · ⨏_r^{t_1}φ for the partition
// r = t₀ < … < t_n = r'. With refinement the partition points are inserted
// into φ's breakpoints, which makes both sides the same discrete product.
double identity_c_residual(const Group& group, const PiecewiseCurve& phi,
                           std::span<const double> partition, const Seminorm& p,
                           const StepperConfig& cfg);

// ⨏_r^{ϱ(ℓ')} φ against [⨏_ℓ^{ℓ'} ϱ̇·φ∘ϱ]·[⨏_r^{ϱ(ℓ)} φ].
double identity_d_residual(const Group& group, const PiecewiseCurve& phi,
                           const Reparametrization& rho, const Seminorm& p,
                           const StepperConfig& cfg);

struct ScalingCheck {
  // ⨏_0^{s·n} φ^n_X against exp(s·n·X)
  double scaled_residual = 0.0;
  // ⨏_0^n φ^n_X against exp(X)^n
  double power_residual = 0.0;
};

ScalingCheck exp_scaling_check(const Group& group, const AlgebraElement& x, double s, int n,
                               const Seminorm& p, const StepperConfig& cfg);

}  // namespace prodint
