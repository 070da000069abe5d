#include "prodint/evolution.hpp"

#include "prodint/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace prodint {

namespace {

double slack(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

int steps_for(double length, int steps_per_unit) {
  return std::max(1, static_cast<int>(std::ceil(length * steps_per_unit - 1e-9)));
}

void append_uniform(std::vector<double>& nodes, double a, double b, int steps) {
  for (int i = 1; i < steps; ++i) nodes.push_back(a + (b - a) * i / steps);
  nodes.push_back(b);
}

void require_interval(const PiecewiseCurve& phi, double s, double t) {
  if (!(s <= t)) throw DomainError("evolve needs s ≤ t (forward intervals only)");
  if (s < phi.begin() - slack(phi.begin()) || t > phi.end() + slack(phi.end())) {
    throw DomainError("[s, t] is not inside the curve domain");
  }
}

void require_curve_of(const Group& group, const PiecewiseCurve& phi) {
  if (phi.group_id() != group.id()) {
    throw ConfigurationError("curve of '" + phi.group_id() + "' evolved on '" + group.id() + "'");
  }
}

struct Step {
  double a;
  double b;
  std::ptrdiff_t piece;  // −1: evaluate with the left-convention lookup
};

std::vector<Step> make_steps(const PiecewiseCurve& phi, double s, double t, const StepperConfig& cfg) {
  const auto nodes = make_partition(phi, s, t, cfg);
  std::vector<Step> steps;
  steps.reserve(nodes.size());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const std::ptrdiff_t piece =
        cfg.breakpoint_refinement
            ? static_cast<std::ptrdiff_t>(phi.piece_index(0.5 * (nodes[i] + nodes[i + 1])))
            : -1;
    steps.push_back({nodes[i], nodes[i + 1], piece});
  }
  return steps;
}

ModelVector sample_step(const PiecewiseCurve& phi, const Step& step, Scheme scheme) {
  const double u = scheme == Scheme::left_euler ? step.a : 0.5 * (step.a + step.b);
  return step.piece >= 0 ? phi.eval_piece(static_cast<std::size_t>(step.piece), u) : phi(u);
}

// ⨏_r^u φ for u inside a step, from the stored value at the last partition
// point t_k ≤ u extended by one local midpoint step.
class TrajectoryLookup {
 public:
  TrajectoryLookup(const Group& group, PiecewiseCurve phi, Trajectory traj)
      : group_(group), phi_(std::move(phi)), traj_(std::move(traj)) {}

  GroupElement at(double u) const {
    const auto& times = traj_.times;
    auto it = std::upper_bound(times.begin(), times.end(), u);
    const std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    const double delta = u - times[k];
    if (delta <= 0.0) return traj_.values[k];
    const ModelVector rate = phi_(times[k] + 0.5 * delta);
    return group_.multiply(group_.exp({group_.id(), delta * rate}), traj_.values[k]);
  }

 private:
  const Group& group_;
  PiecewiseCurve phi_;
  Trajectory traj_;
};

enum class AdVariant { forward, inverse };

// Builds u ↦ integrand(u, ⨏_r^u φ) over the merged breakpoints of φ and ψ and
// returns it together with the refined copies of φ and ψ.
struct AdComposite {
  PiecewiseCurve phi;
  PiecewiseCurve psi;
  PiecewiseCurve composite;
};

template <class Integrand>
AdComposite build_ad_composite(const Group& group, const PiecewiseCurve& phi_in,
                               const PiecewiseCurve& psi_in, const StepperConfig& cfg,
                               Integrand integrand) {
  require_curve_of(group, phi_in);
  require_curve_of(group, psi_in);
  PiecewiseCurve phi = refine(phi_in, psi_in.breakpoints());
  PiecewiseCurve psi = refine(psi_in, phi_in.breakpoints());
  auto lookup = std::make_shared<const TrajectoryLookup>(
      group, phi, evolve_curve(group, phi, phi.begin(), cfg));
  std::vector<AlgebraFn> pieces;
  for (std::size_t p = 0; p < phi.piece_count(); ++p) {
    pieces.push_back([&group, lookup, fphi = phi.piece(p), fpsi = psi.piece(p), integrand](double u) {
      return integrand(group, lookup->at(u), fphi(u), fpsi(u));
    });
  }
  PiecewiseCurve composite(group.id(), group.space(), phi.breakpoints(), std::move(pieces));
  return {std::move(phi), std::move(psi), std::move(composite)};
}

double identity_a_impl(const Group& group, const PiecewiseCurve& phi_in, const PiecewiseCurve& psi_in,
                       const Seminorm& p, const StepperConfig& cfg, AdVariant variant) {
  auto parts = build_ad_composite(
      group, phi_in, psi_in, cfg,
      [variant](const Group& g, const GroupElement& flow, const Eigen::VectorXd& phi_u,
                const Eigen::VectorXd& psi_u) {
        const GroupElement conj = variant == AdVariant::forward ? flow : g.inverse(flow);
        const AlgebraElement moved = g.adjoint(conj, {g.id(), ModelVector(g.space(), psi_u)});
        return Eigen::VectorXd(phi_u + moved.coords.coords());
      });
  const double r = parts.phi.begin(), r1 = parts.phi.end();
  const GroupElement left = group.multiply(evolve(group, parts.phi, r, r1, cfg).endpoint,
                                           evolve(group, parts.psi, r, r1, cfg).endpoint);
  const GroupElement right = evolve(group, parts.composite, r, r1, cfg).endpoint;
  return chart_discrepancy(group, p, left, right);
}

}  // namespace

const char* scheme_name(Scheme scheme) {
  return scheme == Scheme::left_euler ? "left-euler" : "midpoint";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "left-euler") return Scheme::left_euler;
  if (name == "midpoint") return Scheme::midpoint;
  throw ConfigurationError("unknown scheme '" + std::string(name) + "'");
}

std::vector<double> make_partition(const PiecewiseCurve& phi, double s, double t,
                                   const StepperConfig& cfg) {
  require_interval(phi, s, t);
  if (cfg.steps_per_unit < 1) throw ConfigurationError("steps_per_unit must be ≥ 1");
  std::vector<double> nodes{s};
  if (s == t) return nodes;
  if (!cfg.breakpoint_refinement) {
    append_uniform(nodes, s, t, steps_for(t - s, cfg.steps_per_unit));
    return nodes;
  }
  std::vector<double> cuts{s};
  for (double b : phi.breakpoints()) {
    if (b > s && b < t) cuts.push_back(b);
  }
  cuts.push_back(t);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    append_uniform(nodes, cuts[i], cuts[i + 1], steps_for(cuts[i + 1] - cuts[i], cfg.steps_per_unit));
  }
  return nodes;
}

EvolutionResult evolve(const Group& group, const PiecewiseCurve& phi, double s, double t,
                       const StepperConfig& cfg, bool keep_trajectory) {
  require_curve_of(group, phi);
  const auto steps = make_steps(phi, s, t, cfg);
  EvolutionResult result{group.identity(), std::nullopt, {s}, cfg.scheme};
  result.partition.reserve(steps.size() + 1);
  Trajectory traj;
  if (keep_trajectory) {
    traj.times.push_back(s);
    traj.values.push_back(result.endpoint);
  }
  for (const auto& step : steps) {
    const ModelVector rate = sample_step(phi, step, cfg.scheme);
    const GroupElement factor = group.exp({group.id(), (step.b - step.a) * rate});
    result.endpoint = group.multiply(factor, result.endpoint);
    result.partition.push_back(step.b);
    if (keep_trajectory) {
      traj.times.push_back(step.b);
      traj.values.push_back(result.endpoint);
    }
  }
  if (keep_trajectory) result.trajectory = std::move(traj);
  return result;
}

Trajectory evolve_curve(const Group& group, const PiecewiseCurve& phi, double s,
                        const StepperConfig& cfg) {
  return *evolve(group, phi, s, phi.end(), cfg, true).trajectory;
}

AlgebraElement log_derivative(const GroupCurve& mu, double t) {
  if (mu.smoothness() != Smoothness::c1) {
    throw ContractError("log_derivative requires a C¹ curve");
  }
  return mu.group().right_log_derivative(mu(t), mu.derivative(t));
}

AlgebraElement log_derivative_via_chart(const GroupCurve& mu, double t) {
  if (mu.smoothness() != Smoothness::c1) {
    throw ContractError("log_derivative_via_chart requires a C¹ curve");
  }
  const Group& group = mu.group();
  const double h = finite_difference_step(t);
  auto chart_at = [&](double u) { return group.chart_forward(mu(u)); };
  ModelVector velocity = ModelVector::zero(group.space());
  if (t - h < mu.begin()) {
    velocity = (-3.0 * chart_at(t) + 4.0 * chart_at(t + h) - chart_at(t + 2 * h)) * (0.5 / h);
  } else if (t + h > mu.end()) {
    velocity = (3.0 * chart_at(t) - 4.0 * chart_at(t - h) + chart_at(t - 2 * h)) * (0.5 / h);
  } else {
    velocity = (chart_at(t + h) - chart_at(t - h)) * (0.5 / h);
  }
  return group.omega(chart_at(t), velocity);
}

double identity_a_residual(const Group& group, const PiecewiseCurve& phi, const PiecewiseCurve& psi,
                           const Seminorm& p, const StepperConfig& cfg) {
  return identity_a_impl(group, phi, psi, p, cfg, AdVariant::forward);
}

double identity_a_inverse_ad_residual(const Group& group, const PiecewiseCurve& phi,
                                      const PiecewiseCurve& psi, const Seminorm& p,
                                      const StepperConfig& cfg) {
  return identity_a_impl(group, phi, psi, p, cfg, AdVariant::inverse);
}

double identity_b_residual(const Group& group, const PiecewiseCurve& phi_in,
                           const PiecewiseCurve& psi_in, const Seminorm& p,
                           const StepperConfig& cfg) {
  auto parts = build_ad_composite(
      group, phi_in, psi_in, cfg,
      [](const Group& g, const GroupElement& flow, const Eigen::VectorXd& phi_u,
         const Eigen::VectorXd& psi_u) {
        return g.adjoint(g.inverse(flow), {g.id(), ModelVector(g.space(), psi_u - phi_u)})
            .coords.coords();
      });
  const double r = parts.phi.begin(), r1 = parts.phi.end();
  const GroupElement left = group.multiply(group.inverse(evolve(group, parts.phi, r, r1, cfg).endpoint),
                                           evolve(group, parts.psi, r, r1, cfg).endpoint);
  const GroupElement right = evolve(group, parts.composite, r, r1, cfg).endpoint;
  return chart_discrepancy(group, p, left, right);
}

double identity_c_residual(const Group& group, const PiecewiseCurve& phi,
                           std::span<const double> partition, const Seminorm& p,
                           const StepperConfig& cfg) {
  require_curve_of(group, phi);
  if (partition.size() < 2) throw DomainError("partition needs at least two points");
  for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
    if (!(partition[i] < partition[i + 1])) throw DomainError("partition must be increasing");
  }
  require_interval(phi, partition.front(), partition.back());
  const PiecewiseCurve curve = cfg.breakpoint_refinement ? refine(phi, partition) : phi;
  const GroupElement whole = evolve(group, curve, partition.front(), partition.back(), cfg).endpoint;
  GroupElement pieces = group.identity();
  for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
    pieces = group.multiply(evolve(group, curve, partition[i], partition[i + 1], cfg).endpoint, pieces);
  }
  return chart_discrepancy(group, p, whole, pieces);
}

double identity_d_residual(const Group& group, const PiecewiseCurve& phi,
                           const Reparametrization& rho, const Seminorm& p,
                           const StepperConfig& cfg) {
  require_curve_of(group, phi);
  const double r = phi.begin();
  const double start = rho.map(rho.begin), finish = rho.map(rho.end);
  if (start < r - slack(r) || finish < r - slack(r)) {
    throw DomainError("identity d) needs ϱ(ℓ), ϱ(ℓ') ≥ r");
  }
  const double split = std::max(start, r);
  const double stop = std::max(finish, r);
  const double split_point[] = {split};
  const PiecewiseCurve curve = cfg.breakpoint_refinement ? refine(phi, split_point) : phi;

  const GroupElement left = evolve(group, curve, r, stop, cfg).endpoint;
  const GroupElement head = evolve(group, curve, r, split, cfg).endpoint;

  StepperConfig matched = cfg;
  const double ratio = std::abs(finish - start) / (rho.end - rho.begin);
  matched.steps_per_unit =
      std::max(1, static_cast<int>(std::lround(cfg.steps_per_unit * ratio)));
  const PiecewiseCurve moved = reparametrize(curve, rho);
  const GroupElement tail = evolve(group, moved, rho.begin, rho.end, matched).endpoint;
  return chart_discrepancy(group, p, left, group.multiply(tail, head));
}

ScalingCheck exp_scaling_check(const Group& group, const AlgebraElement& x, double s, int n,
                               const Seminorm& p, const StepperConfig& cfg) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("exp_scaling_check needs s ∈ (0, 1]");
  if (n < 1) throw DomainError("exp_scaling_check needs n ≥ 1");
  group.require_member(x);
  const PiecewiseCurve stretched = constant_curve(x, 0.0, static_cast<double>(n));
  ScalingCheck check;
  const GroupElement scaled = evolve(group, stretched, 0.0, s * n, cfg).endpoint;
  check.scaled_residual = chart_discrepancy(group, p, scaled, group.exp({x.group_id, (s * n) * x.coords}));
  const GroupElement full = evolve(group, stretched, 0.0, static_cast<double>(n), cfg).endpoint;
  check.power_residual = chart_discrepancy(group, p, full, group.power(group.exp(x), n));
  return check;
}

}  // namespace prodint
