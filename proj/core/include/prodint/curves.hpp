#pragma once

// Group-valued C¹ curves and piecewise-continuous algebra-valued curves (DP⁰).

#include "prodint/group.hpp"
#include "prodint/model_space.hpp"

#include <Eigen/Core>

#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace prodint {

// One continuous piece t ↦ φ[p](t), evaluated on its closed interval.
using AlgebraFn = std::function<Eigen::VectorXd(double)>;

class PiecewiseCurve {
 public:
  // breakpoints r = t₀ < … < t_n = r'; pieces.size() == n.
  PiecewiseCurve(std::string group_id, SpaceId space, std::vector<double> breakpoints,
                 std::vector<AlgebraFn> pieces);

  const std::string& group_id() const { return group_id_; }
  const SpaceId& space() const { return space_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  std::size_t piece_count() const { return pieces_.size(); }
  double begin() const { return breakpoints_.front(); }
  double end() const { return breakpoints_.back(); }

  // At an interior breakpoint the left piece is used.
  ModelVector operator()(double t) const;
  ModelVector eval_piece(std::size_t piece, double t) const;
  std::size_t piece_index(double t) const;
  const AlgebraFn& piece(std::size_t p) const { return pieces_[p]; }

 private:
  std::string group_id_;
  SpaceId space_;
  std::vector<double> breakpoints_;
  std::vector<AlgebraFn> pieces_;
};

PiecewiseCurve constant_curve(const AlgebraElement& x, double r, double r1);
PiecewiseCurve zero_curve(const Group& group, double r, double r1);

// Pointwise τ·φ, same breakpoints.
PiecewiseCurve scale_curve(double tau, const PiecewiseCurve& phi);

PiecewiseCurve restrict_to(const PiecewiseCurve& phi, double s, double t);

// φ₁ on [a,b] followed by φ₂ on [b,c].
PiecewiseCurve concatenate(const PiecewiseCurve& first, const PiecewiseCurve& second);

// Splits pieces at the given points (those strictly inside the domain).
// Evaluators are unchanged; only the partition grows.
PiecewiseCurve refine(const PiecewiseCurve& phi, std::span<const double> points);

// α·a + β·b on the merged breakpoints; a and b must share their domain.
PiecewiseCurve linear_combination(double alpha, const PiecewiseCurve& a, double beta,
                                  const PiecewiseCurve& b);

// ψ − φ
PiecewiseCurve subtract(const PiecewiseCurve& psi, const PiecewiseCurve& phi);

// Applies f(t, φ(t)) piecewise.
PiecewiseCurve transform_pointwise(
    const PiecewiseCurve& phi,
    std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> f);

// Sorted-unique union of both breakpoint lists.
std::vector<double> merge_breakpoints(std::span<const double> a, std::span<const double> b);

// A C¹ map ϱ: [begin, end] → ℝ with its derivative.
struct Reparametrization {
  double begin = 0.0;
  double end = 1.0;
  std::function<double(double)> map;
  std::function<double(double)> derivative;
  bool monotone = false;

  static Reparametrization affine(double begin, double end, double slope, double offset);
};

// t ↦ ϱ̇(t)·φ(ϱ(t)) on [ϱ.begin, ϱ.end], with breakpoints at the preimages
// of φ's interior breakpoints.
PiecewiseCurve reparametrize(const PiecewiseCurve& phi, const Reparametrization& rho);

// Uniform-grid samples of φ, for sup_seminorm and oscillation checks.
std::vector<ModelVector> sample_curve(const PiecewiseCurve& phi, std::size_t points);
double sup_seminorm(const Seminorm& p, const PiecewiseCurve& phi, std::size_t points);

// Composite-midpoint quadrature of s ↦ q(φ(s)), summed over pieces.
double l1_seminorm(const Seminorm& q, const PiecewiseCurve& phi, int steps_per_piece);

enum class Smoothness { c0, c1 };

// Returns the group-specific value representation (see GroupElement).
using GroupFn = std::function<Eigen::MatrixXd(double)>;

class GroupCurve {
 public:
  // An empty derivative means finite differences are used when asked.
  GroupCurve(GroupPtr group, double a, double b, GroupFn value, GroupFn derivative,
             Smoothness smoothness);

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  double begin() const { return a_; }
  double end() const { return b_; }
  Smoothness smoothness() const { return smoothness_; }
  bool has_closed_form_derivative() const { return static_cast<bool>(derivative_); }

  GroupElement operator()(double t) const;
  Eigen::MatrixXd value(double t) const;
  // μ̇(t) in the value representation; ContractError for C⁰ curves.
  Eigen::MatrixXd derivative(double t) const;
  // Always the finite-difference derivative, for consistency checks.
  Eigen::MatrixXd finite_difference_derivative(double t) const;

 private:
  void require_in_domain(double t) const;

  GroupPtr group_;
  double a_;
  double b_;
  GroupFn value_;
  GroupFn derivative_;
  Smoothness smoothness_;
};

// h = max(1e-6, 1e-8·|t|)
double finite_difference_step(double t);

// μ_τ: [0, 1/m] ∋ t ↦ μ(τ·t), derivative τ·μ̇(τ·t).
GroupCurve rescale_group_curve(const GroupCurve& mu, double tau, int m);

// t ↦ exp(t·X) with closed-form derivative X·exp(tX) (matrix groups) or the
// corresponding sequence-group form.
GroupCurve one_parameter_subgroup(GroupPtr group, const AlgebraElement& x, double a, double b);

// t ↦ exp(tX)·exp(t^k·Y).
GroupCurve exp_product_curve(GroupPtr group, const AlgebraElement& x, const AlgebraElement& y,
                             int k, double a, double b);

// Named curve constructors addressable from configs.
struct CurveSpec {
  std::string name;
  std::map<std::string, std::vector<double>> params;
};

// Algebra curves: "const" (X), "linear" (X + tY), "sin-axis" (sin(t)·X + cos(t)·Y),
// "exp-product" (its right logarithmic derivative X + k t^{k-1} Ad_{exp(tX)}Y).
PiecewiseCurve make_algebra_curve(const Group& group, const CurveSpec& spec, double r, double r1);

// Group curves: "const" (exp(tX)), "exp-product" (exp(tX)exp(t^k Y)).
GroupCurve make_group_curve(GroupPtr group, const CurveSpec& spec, double a, double b);

std::vector<std::string> registered_curve_names();

// Random trigonometric curve Σ_{j≤harmonics} a_j cos(jπt) + b_j sin(jπt),
// coefficients uniform in algebra balls so that sup p ≤ radius in the basis
// coefficient norm.
PiecewiseCurve random_trig_curve(const Group& group, std::mt19937_64& rng, double radius,
                                 double r, double r1, int harmonics = 2);

// Random polynomial curve of the given degree with coefficients in an algebra
// ball of the given radius, on [r, r1].
PiecewiseCurve random_polynomial_curve(const Group& group, std::mt19937_64& rng, double radius,
                                       double r, double r1, int degree = 3);

}  // namespace prodint
