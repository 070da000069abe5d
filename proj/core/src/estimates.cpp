#include "prodint/estimates.hpp"

#include "prodint/error.hpp"
#include "prodint/format.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace prodint {

namespace {

// Midpoint sums of q(φ) accumulated along the evolution partition, so that the
// bound side uses exactly the sample points of the midpoint stepper.
std::vector<double> cumulative_integral(const Seminorm& q, const PiecewiseCurve& phi,
                                        std::span<const double> nodes) {
  std::vector<double> cum(nodes.size(), 0.0);
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double h = nodes[k + 1] - nodes[k];
    cum[k + 1] = cum[k] + q(phi(nodes[k] + 0.5 * h) * h);
  }
  return cum;
}

std::string at_time(double t, double value, double bound) {
  return "t=" + format_number(t) + " value=" + format_number(value) + " bound=" +
         format_number(bound);
}

bool in_chart(const Group& group, const GroupElement& g) {
  try {
    group.chart_forward(g);
    return true;
  } catch (const OutOfChartDomain&) {
    return false;
  }
}

}  // namespace

bool ProbeReport::is_violation(double bound, double value) {
  return bound - value < -(1e-10 * std::abs(bound) + 1e-13);
}

void ProbeReport::record_out_of_chart(const std::string& witness_text) {
  ++samples;
  ++violations;
  worst_margin = -std::numeric_limits<double>::infinity();
  witness = "out-of-chart: " + witness_text;
}

void ProbeReport::merge(const ProbeReport& other) {
  if (other.samples == 0) return;
  if (samples == 0 || other.worst_margin < worst_margin) {
    worst_margin = other.worst_margin;
    witness = other.witness;
  }
  samples += other.samples;
  violations += other.violations;
  hypothesis_failures += other.hypothesis_failures;
  input_scale = std::min(input_scale, other.input_scale);
}

std::string ProbeReport::csv_header() {
  return "probe,group,p,q,samples,violations,worst_margin,seed";
}

std::string ProbeReport::csv_row() const {
  return probe + "," + group + "," + p + "," + q + "," + std::to_string(samples) + "," +
         std::to_string(violations) + "," + format_number(worst_margin) + "," +
         std::to_string(seed);
}

ProbeReport mu_convexity_probe(const Group& group, const Seminorm& p, const Seminorm& q,
                               const SampleSpec& spec) {
  require_same_space(group.space(), p.space());
  require_same_space(group.space(), q.space());
  if (spec.max_factors < 1) throw ConfigurationError("max_factors must be ≥ 1");
  ProbeReport report{"mu_convexity", group.id(), p.id(), q.id()};
  report.seed = spec.seed;
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> factors(1, spec.max_factors);
  std::uniform_real_distribution<double> budget(0.0, 1.0);
  const std::size_t max_draws = 100 * spec.count + 100;
  std::size_t draws = 0;
  for (std::size_t i = 0; i < spec.count; ++i) {
    const int n = factors(rng);
    std::vector<ModelVector> xs;
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      xs.push_back(group.random_algebra(rng, spec.radius).coords);
      if (q(xs.back()) < p(xs.back()) * (1.0 - 1e-12)) {
        throw ContractError("mu_convexity_probe needs q ≥ p on samples");
      }
      total += q(xs.back());
    }
    const double target = 1.0 - budget(rng);  // (0, 1]
    const double scale = total > 0.0 ? target / total : 0.0;
    GroupElement product = group.identity();
    double bound = 0.0;
    bool in_image = true;
    for (auto& x : xs) {
      x = x * scale;
      bound += q(x);
      const GroupElement factor = group.chart_backward(x);
      in_image = in_image && in_chart(group, factor);
      product = group.multiply(product, factor);
    }
    // A factor outside the chart image is outside the inequality's hypothesis;
    // redraw the tuple.
    if (!in_image) {
      ++report.hypothesis_failures;
      if (++draws > max_draws) throw DomainError("mu_convexity_probe: chart image too small for the sample radius");
      --i;
      continue;
    }
    const std::string where = "sample=" + std::to_string(i) + " n=" + std::to_string(n);
    try {
      const double value = p(group.chart_forward(product));
      report.record(bound, value, [&] {
        return where + " value=" + format_number(value) + " bound=" + format_number(bound);
      });
    } catch (const OutOfChartDomain&) {
      report.record_out_of_chart(where);
    }
  }
  return report;
}

ProbeReport adjoint_domination_probe(const Group& group, const Seminorm& q, const Seminorm& m,
                                     std::span<const GroupElement> compact,
                                     const SampleSpec& spec) {
  ProbeReport report{"adjoint_domination", group.id(), q.id(), m.id()};
  report.seed = spec.seed;
  std::mt19937_64 rng(spec.seed);
  for (std::size_t gi = 0; gi < compact.size(); ++gi) {
    for (std::size_t i = 0; i < spec.count; ++i) {
      const AlgebraElement x = group.random_algebra(rng, spec.radius);
      const double bound = m(x.coords);
      const double value = q(group.adjoint(compact[gi], x).coords);
      report.record(bound, value, [&] {
        return "g=" + std::to_string(gi) + " sample=" + std::to_string(i) +
               " value=" + format_number(value) + " bound=" + format_number(bound);
      });
    }
  }
  return report;
}

std::vector<GroupElement> sample_group_ball(const Group& group, std::size_t count, double radius,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GroupElement> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(group.exp(group.random_algebra(rng, radius)));
  return out;
}

ProbeReport prop2_bound_check(const Group& group, const Seminorm& p, const Seminorm& q,
                              const PiecewiseCurve& phi_in, const StepperConfig& cfg) {
  ProbeReport report{"prop2", group.id(), p.id(), q.id()};
  const auto nodes = make_partition(phi_in, phi_in.begin(), phi_in.end(), cfg);
  auto cum = cumulative_integral(q, phi_in, nodes);
  PiecewiseCurve phi = phi_in;
  if (cum.back() > 1.0) {
    report.input_scale = 1.0 / cum.back();
    phi = scale_curve(report.input_scale, phi_in);
    cum = cumulative_integral(q, phi, nodes);
  }
  const Trajectory traj = evolve_curve(group, phi, phi.begin(), cfg);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    try {
      const double value = p(group.chart_forward(traj.values[k]));
      report.record(cum[k], value, [&] { return at_time(t, value, cum[k]); });
    } catch (const OutOfChartDomain&) {
      report.record_out_of_chart("t=" + format_number(t));
    }
  }
  return report;
}

ProbeReport two_curve_bound_check(const Group& group, const Seminorm& p, const Seminorm& m,
                                  const PiecewiseCurve& phi_in, const PiecewiseCurve& psi_in,
                                  const StepperConfig& cfg, double ball_radius) {
  ProbeReport report{"two_curve", group.id(), p.id(), m.id()};
  const PiecewiseCurve phi = refine(phi_in, psi_in.breakpoints());
  PiecewiseCurve psi = refine(psi_in, phi_in.breakpoints());
  PiecewiseCurve diff = subtract(psi, phi);
  const auto nodes = make_partition(phi, phi.begin(), phi.end(), cfg);
  auto cum = cumulative_integral(m, diff, nodes);
  if (cum.back() > 1.0) {
    report.input_scale = 1.0 / cum.back();
    psi = linear_combination(1.0, phi, report.input_scale, diff);
    diff = subtract(psi, phi);
    cum = cumulative_integral(m, diff, nodes);
  }
  const Trajectory flow_phi = evolve_curve(group, phi, phi.begin(), cfg);
  const Trajectory flow_psi = evolve_curve(group, psi, psi.begin(), cfg);
  if (flow_phi.times.size() != flow_psi.times.size() || flow_phi.times.size() != nodes.size()) {
    throw DomainError("two_curve_bound_check: partitions of φ and ψ differ");
  }
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!(group.distance_from_identity(flow_phi.values[k]) < ball_radius)) {
      ++report.hypothesis_failures;
    }
    const double t = nodes[k];
    try {
      const double value = chart_discrepancy(group, p, flow_phi.values[k], flow_psi.values[k]);
      report.record(cum[k], value, [&] { return at_time(t, value, cum[k]); });
    } catch (const OutOfChartDomain&) {
      report.record_out_of_chart("t=" + format_number(t));
    }
  }
  return report;
}

SearchResult seminorm_search(std::span<const Seminorm> candidates, const SeminormProbe& probe) {
  SearchResult result;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    result.reports.push_back(probe(candidates[i]));
    if (result.reports.back().passed()) {
      result.index = i;
      break;
    }
  }
  return result;
}

std::optional<double> seminorm_search(const Seminorm& p, std::span<const double> scales,
                                      const SeminormProbe& probe,
                                      std::vector<ProbeReport>* reports) {
  if (!std::is_sorted(scales.begin(), scales.end())) {
    throw ConfigurationError("seminorm_search needs an ascending scale grid");
  }
  std::vector<Seminorm> candidates;
  for (double c : scales) candidates.push_back(p.scaled(c));
  auto result = seminorm_search(std::span<const Seminorm>(candidates), probe);
  if (reports) *reports = std::move(result.reports);
  if (!result.index) return std::nullopt;
  return scales[*result.index];
}

}  // namespace prodint
