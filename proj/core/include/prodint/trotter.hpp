#pragma once

// Executable form of the strong Trotter argument: the curves χ_{τ,n} and
// φ_{τ,n}, the power identity ⨏φ_{τ,n} = μ(τ/n)ⁿ, and uniform-convergence
// measurements of μ(τ/n)ⁿ → exp(τ·μ̇(0)).

#include "prodint/curves.hpp"
#include "prodint/evolution.hpp"
#include "prodint/group.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace prodint {

struct TrotterFamily {
  GroupCurve mu;            // C¹, μ(0) = e
  AlgebraElement generator;  // X = μ̇(0)
  double ell = 2.0;
  int m = 1;  // μ([0, ℓ/m]) lies in the chart domain
};

// Checks μ(0) = e, computes X = δ(μ)(0) and, unless given, picks the smallest
// m ≥ ⌈ℓ/len(dom μ)⌉ with κ(μ(t)) defined on a grid over [0, ℓ/m].
TrotterFamily make_trotter_family(GroupCurve mu, double ell, std::optional<int> m = std::nullopt);

// χ_{τ,n} = δ(μ_τ)|_{[0,1/n]} with μ_τ(t) = μ(τ·t) on [0, 1/m].
PiecewiseCurve build_chi(const TrotterFamily& fam, double tau, int n);

// n shifted copies of χ_{τ,n} on [0,1], breakpoints at p/n.
PiecewiseCurve build_phi_tau_n(const TrotterFamily& fam, double tau, int n);

// μ(τ/n)ⁿ by repeated multiplication of the evaluated element.
GroupElement trotter_power(const TrotterFamily& fam, double tau, int n);

// p∘κ((μ(τ/n)ⁿ)⁻¹ · ⨏φ_{τ,n}).
double verify_power_identity(const TrotterFamily& fam, double tau, int n, const Seminorm& p,
                             const StepperConfig& cfg);

// p∘κ(exp(τX)⁻¹ · μ(τ/n)ⁿ); +∞ when the discrepancy leaves the chart.
double trotter_error(const TrotterFamily& fam, double tau, int n, const Seminorm& p);

struct ConvergenceRow {
  int n = 0;
  double sup_error = 0.0;
  double argmax_tau = 0.0;
};

struct EpsilonThreshold {
  double eps = 0.0;
  std::optional<int> n;  // smallest listed n with sup_error ≤ eps
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::vector<EpsilonThreshold> thresholds;
  int tau_grid_size = 0;
  double ell = 0.0;
  std::string seminorm;
};

inline constexpr double kDefaultEpsilons[] = {1e-1, 1e-2, 1e-3};

ConvergenceTable uniform_trotter_sweep(const TrotterFamily& fam, int tau_grid_size,
                                       std::span<const int> n_list, const Seminorm& p,
                                       std::span<const double> epsilons = kDefaultEpsilons);

// Least-squares slope of log(err) against log(n), finite positive entries
// only. With top_decade set, only rows with n ≥ n_max/10 enter the fit.
double loglog_slope(std::span<const ConvergenceRow> rows, bool top_decade = true);

// True when each sup_error is at most (1 + slack) times its predecessor.
bool is_monotone_decreasing(std::span<const ConvergenceRow> rows, double slack = 0.1);

using GroupPath = std::function<GroupElement(double)>;

struct OneSidedSups {
  std::vector<double> right;  // sup_t p∘κ(μ(t)⁻¹·ν_n(t))
  std::vector<double> left;   // sup_t p∘κ(ν_n(t)·μ(t)⁻¹)
};

OneSidedSups uniform_convergence_check(const Group& group, std::span<const GroupPath> sequence,
                                       const GroupPath& limit, const Seminorm& p,
                                       std::span<const double> grid);

// τ ↦ μ(τ/n)ⁿ and τ ↦ exp(τX).
GroupPath trotter_sequence_path(const TrotterFamily& fam, int n);
GroupPath trotter_limit_path(const TrotterFamily& fam);

// Max chart distance between neighbouring values of (τ, t) ↦ ⨏_0^t τ·φ on
// nested uniform grids with 2^level + 1 points per axis, for level = 1..levels.
std::vector<double> continuity_probe(const Group& group, const PiecewiseCurve& phi, double tau_lo,
                                     double tau_hi, int levels, const Seminorm& p,
                                     const StepperConfig& cfg);

}  // namespace prodint
