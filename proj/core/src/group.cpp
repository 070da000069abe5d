#include "prodint/group.hpp"

#include "prodint/error.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <charconv>
#include <cmath>
#include <limits>

namespace prodint {

namespace {

constexpr double kMembershipTol = 1e-10;
constexpr double kConditionLimit = 1e12;

double spectral_norm(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()[0];
}

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

Eigen::MatrixXd unit(int n, int i, int j) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

Eigen::Matrix3d skew(const Eigen::Vector3d& w) {
  Eigen::Matrix3d s;
  s << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return s;
}

enum class MatrixKind { gl, so3, se3, heis3, ut3 };

class MatrixGroup final : public Group {
 public:
  MatrixGroup(std::string id, MatrixKind kind, int n, ChartKind chart)
      : Group(std::move(id), SpaceId::matrix(n),
              GroupTraits{kind == MatrixKind::so3 || kind == MatrixKind::heis3, n == 1},
              1.0, chart),
        kind_(kind),
        n_(n) {
    switch (kind_) {
      case MatrixKind::gl:
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j) basis_.push_back(ModelVector::from_matrix(unit(n_, i, j)));
        break;
      case MatrixKind::so3:
        for (int i = 0; i < 3; ++i)
          basis_.push_back(ModelVector::from_matrix(skew(Eigen::Vector3d::Unit(i))));
        break;
      case MatrixKind::se3:
        for (int i = 0; i < 3; ++i) {
          Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
          m.topLeftCorner<3, 3>() = skew(Eigen::Vector3d::Unit(i));
          basis_.push_back(ModelVector::from_matrix(m));
        }
        for (int i = 0; i < 3; ++i) basis_.push_back(ModelVector::from_matrix(unit(4, i, 3)));
        break;
      case MatrixKind::heis3:
        basis_.push_back(ModelVector::from_matrix(unit(3, 0, 1)));
        basis_.push_back(ModelVector::from_matrix(unit(3, 1, 2)));
        basis_.push_back(ModelVector::from_matrix(unit(3, 0, 2)));
        break;
      case MatrixKind::ut3:
        for (int i = 0; i < 3; ++i)
          for (int j = i; j < 3; ++j) basis_.push_back(ModelVector::from_matrix(unit(3, i, j)));
        break;
    }
  }

  GroupElement identity() const override {
    return {id(), Eigen::MatrixXd::Identity(n_, n_)};
  }

  GroupElement multiply(const GroupElement& g, const GroupElement& h) const override {
    require_member(g);
    require_member(h);
    return {id(), g.value * h.value};
  }

  GroupElement inverse(const GroupElement& g) const override {
    require_member(g);
    return {id(), g.value.inverse()};
  }

  GroupElement exp(const AlgebraElement& x) const override {
    require_member(x);
    return {id(), x.coords.as_matrix().exp()};
  }

  ModelVector chart_forward(const GroupElement& g) const override {
    require_member(g);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n_, n_);
    const double dist = spectral_norm(g.value - eye);
    if (!(dist < chart_radius())) {
      throw OutOfChartDomain(id() + ": ‖g − I‖_op = " + std::to_string(dist) +
                             " outside chart radius");
    }
    if (chart_kind() == ChartKind::cayley) {
      return ModelVector::from_matrix(2.0 * (g.value - eye) * (g.value + eye).inverse());
    }
    return ModelVector::from_matrix(g.value.log());
  }

  GroupElement chart_backward(const ModelVector& v) const override {
    require_same_space(space(), v.space());
    const Eigen::MatrixXd x = v.as_matrix();
    if (chart_kind() == ChartKind::cayley) {
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n_, n_);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(eye - 0.5 * x);
      if (!lu.isInvertible()) throw OutOfChartDomain(id() + ": Cayley chart singular");
      return {id(), lu.solve(eye + 0.5 * x)};
    }
    return {id(), x.exp()};
  }

  AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) const override {
    require_member(g);
    require_member(x);
    const Eigen::MatrixXd m = g.value * x.coords.as_matrix() * g.value.inverse();
    return {id(), ModelVector::from_matrix(m)};
  }

  AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) const override {
    require_member(x);
    require_member(y);
    const Eigen::MatrixXd a = x.coords.as_matrix();
    const Eigen::MatrixXd b = y.coords.as_matrix();
    return {id(), ModelVector::from_matrix(a * b - b * a)};
  }

  AlgebraElement right_log_derivative(const GroupElement& g,
                                      const Eigen::MatrixXd& tangent) const override {
    require_member(g);
    return {id(), ModelVector::from_matrix(tangent * g.value.inverse())};
  }

  Eigen::MatrixXd right_translate(const AlgebraElement& x, const GroupElement& g) const override {
    require_member(x);
    require_member(g);
    return x.coords.as_matrix() * g.value;
  }

  std::vector<std::string> validate(const GroupElement& g) const override {
    std::vector<std::string> bad;
    if (g.group_id != id()) bad.emplace_back("group-id");
    if (g.value.rows() != n_ || g.value.cols() != n_) {
      bad.emplace_back("shape");
      return bad;
    }
    if (!all_finite(g.value)) {
      bad.emplace_back("non-finite");
      return bad;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(g.value);
    const auto& sv = svd.singularValues();
    if (sv[n_ - 1] == 0.0 || sv[0] / sv[n_ - 1] > kConditionLimit) bad.emplace_back("near-singular");

    auto check_rotation = [&](const Eigen::MatrixXd& r) {
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(r.rows(), r.cols());
      if ((r.transpose() * r - eye).norm() > kMembershipTol) bad.emplace_back("orthogonality");
      if (r.determinant() <= 0.0) bad.emplace_back("orientation");
    };
    switch (kind_) {
      case MatrixKind::gl:
        break;
      case MatrixKind::so3:
        check_rotation(g.value);
        break;
      case MatrixKind::se3: {
        check_rotation(g.value.topLeftCorner(3, 3));
        Eigen::RowVectorXd last(4);
        last << 0, 0, 0, 1;
        if ((g.value.row(3) - last).norm() > kMembershipTol) bad.emplace_back("affine-row");
        break;
      }
      case MatrixKind::heis3:
      case MatrixKind::ut3: {
        double lower = 0.0;
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < i; ++j) lower += std::abs(g.value(i, j));
        if (lower > kMembershipTol) bad.emplace_back("upper-triangular");
        if (kind_ == MatrixKind::heis3) {
          if ((g.value.diagonal().array() - 1.0).abs().maxCoeff() > kMembershipTol)
            bad.emplace_back("unit-diagonal");
        } else if ((g.value.diagonal().array() <= 0.0).any()) {
          bad.emplace_back("positive-diagonal");
        }
        break;
      }
    }
    return bad;
  }

  double distance_from_identity(const GroupElement& g) const override {
    require_member(g);
    return spectral_norm(g.value - Eigen::MatrixXd::Identity(n_, n_));
  }

  const std::vector<ModelVector>& algebra_basis() const override { return basis_; }

 private:
  MatrixKind kind_;
  int n_;
  std::vector<ModelVector> basis_;
};

// The additive group (E,+) of a truncated sequence space.
class AbelianGroup final : public Group {
 public:
  explicit AbelianGroup(int d)
      : Group("abelian:" + std::to_string(d), SpaceId::sequence(d), GroupTraits{true, true},
              std::numeric_limits<double>::infinity()),
        d_(d) {
    for (int j = 0; j < d_; ++j) basis_.push_back(ModelVector::basis(space(), j));
  }

  GroupElement identity() const override { return {id(), Eigen::MatrixXd::Zero(d_, 1)}; }
  GroupElement multiply(const GroupElement& g, const GroupElement& h) const override {
    require_member(g);
    require_member(h);
    return {id(), g.value + h.value};
  }
  GroupElement inverse(const GroupElement& g) const override {
    require_member(g);
    return {id(), -g.value};
  }
  GroupElement exp(const AlgebraElement& x) const override {
    require_member(x);
    return {id(), x.coords.coords()};
  }
  ModelVector chart_forward(const GroupElement& g) const override {
    require_member(g);
    return {space(), g.value.col(0)};
  }
  GroupElement chart_backward(const ModelVector& v) const override {
    require_same_space(space(), v.space());
    return {id(), v.coords()};
  }
  AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) const override {
    require_member(g);
    require_member(x);
    return x;
  }
  AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) const override {
    require_member(x);
    require_member(y);
    return zero_algebra();
  }
  AlgebraElement right_log_derivative(const GroupElement& g,
                                      const Eigen::MatrixXd& tangent) const override {
    require_member(g);
    return {id(), ModelVector(space(), tangent.col(0))};
  }
  Eigen::MatrixXd right_translate(const AlgebraElement& x, const GroupElement& g) const override {
    require_member(x);
    require_member(g);
    return x.coords.coords();
  }
  std::vector<std::string> validate(const GroupElement& g) const override {
    std::vector<std::string> bad;
    if (g.group_id != id()) bad.emplace_back("group-id");
    if (g.value.rows() != d_ || g.value.cols() != 1) bad.emplace_back("shape");
    else if (!all_finite(g.value)) bad.emplace_back("non-finite");
    return bad;
  }
  double distance_from_identity(const GroupElement& g) const override {
    require_member(g);
    return g.value.cwiseAbs().maxCoeff();
  }
  const std::vector<ModelVector>& algebra_basis() const override { return basis_; }

 private:
  int d_;
  std::vector<ModelVector> basis_;
};

// Invertible diagonal operators diag(d_j), d_j > 0, on the truncated sequence
// space; the chart is the componentwise log on |d_j − 1| < 1.
class DiagonalOperatorGroup final : public Group {
 public:
  explicit DiagonalOperatorGroup(int d)
      : Group("diagop:" + std::to_string(d), SpaceId::sequence(d), GroupTraits{true, true}, 1.0),
        d_(d) {
    for (int j = 0; j < d_; ++j) basis_.push_back(ModelVector::basis(space(), j));
  }

  GroupElement identity() const override { return {id(), Eigen::MatrixXd::Ones(d_, 1)}; }
  GroupElement multiply(const GroupElement& g, const GroupElement& h) const override {
    require_member(g);
    require_member(h);
    return {id(), g.value.cwiseProduct(h.value)};
  }
  GroupElement inverse(const GroupElement& g) const override {
    require_member(g);
    return {id(), g.value.cwiseInverse()};
  }
  GroupElement exp(const AlgebraElement& x) const override {
    require_member(x);
    return {id(), x.coords.coords().array().exp().matrix()};
  }
  ModelVector chart_forward(const GroupElement& g) const override {
    const double dist = distance_from_identity(g);
    if (!(dist < chart_radius())) {
      throw OutOfChartDomain(id() + ": max |d_j − 1| = " + std::to_string(dist) +
                             " outside chart radius");
    }
    return {space(), g.value.col(0).array().log().matrix()};
  }
  GroupElement chart_backward(const ModelVector& v) const override {
    require_same_space(space(), v.space());
    return {id(), v.coords().array().exp().matrix()};
  }
  AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) const override {
    require_member(g);
    require_member(x);
    return x;
  }
  AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) const override {
    require_member(x);
    require_member(y);
    return zero_algebra();
  }
  AlgebraElement right_log_derivative(const GroupElement& g,
                                      const Eigen::MatrixXd& tangent) const override {
    require_member(g);
    return {id(), ModelVector(space(), tangent.col(0).cwiseQuotient(g.value.col(0)))};
  }
  Eigen::MatrixXd right_translate(const AlgebraElement& x, const GroupElement& g) const override {
    require_member(x);
    require_member(g);
    return x.coords.coords().cwiseProduct(g.value.col(0));
  }
  std::vector<std::string> validate(const GroupElement& g) const override {
    std::vector<std::string> bad;
    if (g.group_id != id()) bad.emplace_back("group-id");
    if (g.value.rows() != d_ || g.value.cols() != 1) {
      bad.emplace_back("shape");
    } else if (!all_finite(g.value)) {
      bad.emplace_back("non-finite");
    } else if ((g.value.array() <= 0.0).any()) {
      bad.emplace_back("positive-diagonal");
    }
    return bad;
  }
  double distance_from_identity(const GroupElement& g) const override {
    require_member(g);
    return (g.value.array() - 1.0).abs().maxCoeff();
  }
  const std::vector<ModelVector>& algebra_basis() const override { return basis_; }

 private:
  int d_;
  std::vector<ModelVector> basis_;
};

int parse_positive(std::string_view text, std::string_view full_id) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1) {
    throw ConfigurationError("unknown group id '" + std::string(full_id) + "'");
  }
  return value;
}

}  // namespace

Group::Group(std::string id, SpaceId space, GroupTraits traits, double chart_radius,
             ChartKind chart)
    : id_(std::move(id)), space_(space), traits_(traits), chart_radius_(chart_radius),
      chart_(chart) {}

void Group::require_member(const GroupElement& g) const {
  if (g.group_id != id_) {
    throw ConfigurationError("group mismatch: element of '" + g.group_id + "' passed to '" +
                             id_ + "'");
  }
}

void Group::require_member(const AlgebraElement& x) const {
  if (x.group_id != id_) {
    throw ConfigurationError("group mismatch: algebra element of '" + x.group_id +
                             "' passed to '" + id_ + "'");
  }
  require_same_space(space_, x.coords.space());
}

AlgebraElement Group::algebra(std::span<const double> coefficients) const {
  const auto& basis = algebra_basis();
  if (coefficients.size() != basis.size()) {
    throw ConfigurationError(id_ + " expects " + std::to_string(basis.size()) +
                             " algebra coefficients, got " + std::to_string(coefficients.size()));
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(space_.dimension());
  for (std::size_t i = 0; i < basis.size(); ++i) v += coefficients[i] * basis[i].coords();
  return {id_, ModelVector(space_, std::move(v))};
}

AlgebraElement Group::algebra(const ModelVector& coords) const {
  require_same_space(space_, coords.space());
  return {id_, coords};
}

AlgebraElement Group::zero_algebra() const { return {id_, ModelVector::zero(space_)}; }

AlgebraElement Group::random_algebra(std::mt19937_64& rng, double radius) const {
  const auto dim = algebra_basis().size();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> c(dim);
  double norm2 = 0.0;
  for (auto& ci : c) {
    ci = gauss(rng);
    norm2 += ci * ci;
  }
  const double r = radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim));
  const double s = norm2 > 0.0 ? r / std::sqrt(norm2) : 0.0;
  for (auto& ci : c) ci *= s;
  return algebra(c);
}

GroupElement Group::power(const GroupElement& g, int n) const {
  if (n < 0) throw DomainError("negative group power");
  GroupElement out = identity();
  for (int i = 0; i < n; ++i) out = multiply(g, out);
  return out;
}

AlgebraElement Group::omega(const ModelVector& x, const ModelVector& direction) const {
  constexpr double h = 1e-6;
  const GroupElement plus = chart_backward(x + h * direction);
  const GroupElement minus = chart_backward(x - h * direction);
  const Eigen::MatrixXd tangent = (plus.value - minus.value) / (2.0 * h);
  return right_log_derivative(chart_backward(x), tangent);
}

GroupPtr make_group(std::string_view id, ChartKind chart) {
  const std::string full(id);
  auto matrix = [&](MatrixKind kind, int n) -> GroupPtr {
    return std::make_shared<MatrixGroup>(full, kind, n, chart);
  };
  auto sequence_only = [&] {
    if (chart != ChartKind::exponential) {
      throw ConfigurationError("group '" + full + "' supports only the exponential chart");
    }
  };
  if (id == "so3") return matrix(MatrixKind::so3, 3);
  if (id == "se3") return matrix(MatrixKind::se3, 4);
  if (id == "heis3") return matrix(MatrixKind::heis3, 3);
  if (id == "ut3") return matrix(MatrixKind::ut3, 3);
  if (id.starts_with("gl") && id.size() > 2) {
    const int n = parse_positive(id.substr(2), id);
    if (n > 4) throw ConfigurationError("unknown group id '" + full + "' (GL(n) needs n ≤ 4)");
    return matrix(MatrixKind::gl, n);
  }
  if (id.starts_with("abelian:")) {
    sequence_only();
    return std::make_shared<AbelianGroup>(parse_positive(id.substr(8), id));
  }
  if (id.starts_with("diagop:")) {
    sequence_only();
    return std::make_shared<DiagonalOperatorGroup>(parse_positive(id.substr(7), id));
  }
  throw ConfigurationError("unknown group id '" + full + "'");
}

std::vector<std::string> registered_group_ids() {
  return {"abelian:D", "diagop:D", "gl1", "gl2", "gl3", "gl4", "heis3", "se3", "so3", "ut3"};
}

double chart_discrepancy(const Group& group, const Seminorm& p, const GroupElement& a,
                         const GroupElement& b) {
  return p(group.chart_forward(group.multiply(group.inverse(a), b)));
}

namespace so3 {

AlgebraElement hat(const Group& group, const Eigen::Vector3d& omega) {
  return group.algebra(ModelVector::from_matrix(skew(omega)));
}

Eigen::Matrix3d rotation_z(double angle) {
  Eigen::Matrix3d r;
  const double c = std::cos(angle), s = std::sin(angle);
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

}  // namespace so3

}  // namespace prodint
