#pragma once

// Sampling probes for the seminorm inequalities behind local μ-convexity.
//
// A finite seminorm family cannot certify local μ-convexity; these probes
// search for counterexamples to the concrete inequalities and record the
// worst margin seen.

#include "prodint/curves.hpp"
#include "prodint/evolution.hpp"
#include "prodint/group.hpp"
#include "prodint/model_space.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace prodint {

struct ProbeReport {
  std::string probe;
  std::string group;
  std::string p;
  std::string q;
  std::size_t samples = 0;
  std::size_t violations = 0;
  // bound − value; negative means the inequality failed.
  double worst_margin = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  std::string witness;
  // Samples whose hypothesis (e.g. trajectory inside O) did not hold.
  std::size_t hypothesis_failures = 0;
  // Factor applied to the input curve to meet ∫q ≤ 1 (1 if untouched).
  double input_scale = 1.0;

  static bool is_violation(double bound, double value);

  // Adds one (bound, value) sample; witness_fn() is only called when the
  // sample becomes the new worst case.
  template <class WitnessFn>
  void record(double bound, double value, WitnessFn&& witness_fn) {
    ++samples;
    const double margin = bound - value;
    if (is_violation(bound, value)) ++violations;
    if (margin < worst_margin || samples == 1) {
      worst_margin = margin;
      witness = witness_fn();
    }
  }
  // A product that left the chart domain counts as a violation.
  void record_out_of_chart(const std::string& witness_text);
  void merge(const ProbeReport& other);

  bool passed() const { return violations == 0; }

  static std::string csv_header();
  std::string csv_row() const;
};

struct SampleSpec {
  std::size_t count = 10000;
  int max_factors = 8;
  // Radius of the uniform ball in algebra coefficients.
  double radius = 0.5;
  std::uint64_t seed = 42;
};

// (p∘κ)(κ⁻¹(X₁)·…·κ⁻¹(X_n)) ≤ q(X₁)+…+q(X_n) for random tuples with Σq(X_i) ≤ 1.
// Tuples with a factor κ⁻¹(X_i) outside the chart domain are redrawn and
// counted in hypothesis_failures.
ProbeReport mu_convexity_probe(const Group& group, const Seminorm& p, const Seminorm& q,
                               const SampleSpec& spec);

// q(Ad_g X) ≤ m(X) for g in the compact sample and random X (spec.count per g).
ProbeReport adjoint_domination_probe(const Group& group, const Seminorm& q, const Seminorm& m,
                                     std::span<const GroupElement> compact, const SampleSpec& spec);

// exp of uniform algebra-ball samples: a finite stand-in for a compact set.
std::vector<GroupElement> sample_group_ball(const Group& group, std::size_t count, double radius,
                                            std::uint64_t seed);

// (p∘κ)(⨏_r^t φ) ≤ ∫_r^t q(φ) at every partition point; φ is rescaled first
// when ∫q(φ) > 1.
ProbeReport prop2_bound_check(const Group& group, const Seminorm& p, const Seminorm& q,
                              const PiecewiseCurve& phi, const StepperConfig& cfg);

// (p∘κ)([⨏_r^tφ]⁻¹[⨏_r^tψ]) ≤ ∫_r^t m(ψ−φ) at every partition point; ψ − φ is
// rescaled (around φ) when its m-integral exceeds 1. hypothesis_failures
// counts partition points where ⨏_r^tφ lies outside the open ball O of the
// given radius around e (distance_from_identity).
ProbeReport two_curve_bound_check(const Group& group, const Seminorm& p, const Seminorm& m,
                                  const PiecewiseCurve& phi, const PiecewiseCurve& psi,
                                  const StepperConfig& cfg, double ball_radius);

struct SearchResult {
  // Index into the candidate list of the first passing seminorm.
  std::optional<std::size_t> index;
  std::vector<ProbeReport> reports;
};

using SeminormProbe = std::function<ProbeReport(const Seminorm&)>;

// First candidate (in the given order) whose probe reports zero violations.
SearchResult seminorm_search(std::span<const Seminorm> candidates, const SeminormProbe& probe);

// Candidates p.scaled(c) for the ascending scale grid; returns the smallest
// passing scale, or nullopt (NotFound).
std::optional<double> seminorm_search(const Seminorm& p, std::span<const double> scales,
                                      const SeminormProbe& probe,
                                      std::vector<ProbeReport>* reports = nullptr);

}  // namespace prodint
