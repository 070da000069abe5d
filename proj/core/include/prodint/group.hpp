#pragma once

// Lie group abstraction and the concrete desk-scale groups.
//
// The Lie algebra 𝔤 is identified with the model space E through d_eκ. All
// charts are centered (κ(e) = 0) and have d_eκ = id, so algebra elements and
// chart coordinates live in the same ModelVector space.

#include "prodint/model_space.hpp"

#include <Eigen/Core>

#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prodint {

// Matrix groups store their n×n matrix; (E,+) and the diagonal-operator
// group store a D×1 column.
struct GroupElement {
  std::string group_id;
  Eigen::MatrixXd value;
};

struct AlgebraElement {
  std::string group_id;
  ModelVector coords;
};

enum class ChartKind { exponential, cayley };

struct GroupTraits {
  bool has_closed_form_exp = false;
  bool is_abelian = false;
};

class Group {
 public:
  virtual ~Group() = default;

  const std::string& id() const { return id_; }
  const SpaceId& space() const { return space_; }
  GroupTraits traits() const { return traits_; }
  ChartKind chart_kind() const { return chart_; }
  // κ is defined on {g : distance_from_identity(g) < chart_radius()}.
  double chart_radius() const { return chart_radius_; }

  virtual GroupElement identity() const = 0;
  virtual GroupElement multiply(const GroupElement& g, const GroupElement& h) const = 0;
  virtual GroupElement inverse(const GroupElement& g) const = 0;
  virtual GroupElement exp(const AlgebraElement& x) const = 0;

  // κ; throws OutOfChartDomain outside the chart domain.
  virtual ModelVector chart_forward(const GroupElement& g) const = 0;
  // κ⁻¹
  virtual GroupElement chart_backward(const ModelVector& v) const = 0;

  virtual AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) const = 0;
  virtual AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) const = 0;

  // d_g R_{g⁻¹}(tangent): μ̇ μ⁻¹ for matrix groups.
  virtual AlgebraElement right_log_derivative(const GroupElement& g,
                                              const Eigen::MatrixXd& tangent) const = 0;

  // d_e R_g(x): the tangent at g whose right logarithmic derivative is x.
  virtual Eigen::MatrixXd right_translate(const AlgebraElement& x, const GroupElement& g) const = 0;

  // Violated membership invariants, empty when g is a valid element.
  virtual std::vector<std::string> validate(const GroupElement& g) const = 0;

  // The norm the chart radius refers to: ‖g − I‖_op for matrix groups,
  // max_j |d_j − 1| for the diagonal-operator group.
  virtual double distance_from_identity(const GroupElement& g) const = 0;

  // Basis of 𝔤 ⊆ E used for coefficient input and random sampling.
  virtual const std::vector<ModelVector>& algebra_basis() const = 0;

  AlgebraElement algebra(std::span<const double> coefficients) const;
  AlgebraElement algebra(const ModelVector& coords) const;
  AlgebraElement zero_algebra() const;
  // Uniform in the ball of the basis coefficients.
  AlgebraElement random_algebra(std::mt19937_64& rng, double radius) const;

  // g^n by repeated multiplication, n ≥ 0.
  GroupElement power(const GroupElement& g, int n) const;

  // Ω(x, X) = d_{κ⁻¹(x)}R_{κ⁻¹(x)⁻¹}(d_xκ⁻¹(X)); d_xκ⁻¹ by central differences.
  AlgebraElement omega(const ModelVector& x, const ModelVector& direction) const;

  void require_member(const GroupElement& g) const;
  void require_member(const AlgebraElement& x) const;

 protected:
  Group(std::string id, SpaceId space, GroupTraits traits, double chart_radius,
        ChartKind chart = ChartKind::exponential);

 private:
  std::string id_;
  SpaceId space_;
  GroupTraits traits_;
  double chart_radius_;
  ChartKind chart_;
};

using GroupPtr = std::shared_ptr<const Group>;

// Registry ids: "glN" (N ≤ 4), "so3", "se3", "heis3", "ut3", "abelian:D",
// "diagop:D". Cayley charts are available for matrix groups only.
GroupPtr make_group(std::string_view id, ChartKind chart = ChartKind::exponential);

// Canonical ids with a representative D, alphabetical.
std::vector<std::string> registered_group_ids();

// p∘κ(a⁻¹·b): the left-translated chart discrepancy used for every residual.
double chart_discrepancy(const Group& group, const Seminorm& p, const GroupElement& a,
                         const GroupElement& b);

namespace so3 {
// Skew matrix [ω]_× flattened, i.e. the algebra element with axis ω.
AlgebraElement hat(const Group& group, const Eigen::Vector3d& omega);
Eigen::Matrix3d rotation_z(double angle);
}  // namespace so3

}  // namespace prodint
