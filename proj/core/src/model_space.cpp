#include "prodint/model_space.hpp"

#include "prodint/error.hpp"
#include "prodint/format.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace prodint {

std::string SpaceId::name() const {
  return (kind == SpaceKind::matrix ? "mat" : "seq") + std::to_string(size);
}

void require_same_space(const SpaceId& a, const SpaceId& b) {
  if (!(a == b)) {
    throw ConfigurationError("model space mismatch: " + a.name() + " vs " + b.name());
  }
}

ModelVector::ModelVector(SpaceId space, Eigen::VectorXd coords)
    : space_(space), coords_(std::move(coords)) {
  if (coords_.size() != space_.dimension()) {
    throw ConfigurationError("vector of length " + std::to_string(coords_.size()) +
                             " does not belong to " + space_.name());
  }
}

ModelVector ModelVector::zero(SpaceId space) {
  return {space, Eigen::VectorXd::Zero(space.dimension())};
}

ModelVector ModelVector::basis(SpaceId space, int j) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(space.dimension());
  if (j < 0 || j >= v.size()) throw DomainError("basis index out of range");
  v[j] = 1.0;
  return {space, std::move(v)};
}

ModelVector ModelVector::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ConfigurationError("matrix must be square");
  const auto n = m.rows();
  Eigen::VectorXd v(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) v[i * n + j] = m(i, j);
  return {SpaceId::matrix(static_cast<int>(n)), std::move(v)};
}

Eigen::MatrixXd ModelVector::as_matrix() const {
  if (space_.kind != SpaceKind::matrix) {
    throw ConfigurationError("as_matrix on non-matrix space " + space_.name());
  }
  const int n = space_.size;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = coords_[i * n + j];
  return m;
}

ModelVector ModelVector::operator+(const ModelVector& other) const {
  require_same_space(space_, other.space_);
  return {space_, coords_ + other.coords_};
}

ModelVector ModelVector::operator-(const ModelVector& other) const {
  require_same_space(space_, other.space_);
  return {space_, coords_ - other.coords_};
}

ModelVector ModelVector::operator-() const { return {space_, -coords_}; }

ModelVector ModelVector::operator*(double c) const { return {space_, c * coords_}; }

Seminorm::Seminorm(SpaceId space, SeminormKind kind, double scale, int k, Ladder ladder)
    : space_(space), kind_(kind), scale_(scale), k_(k), ladder_(ladder) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigurationError("seminorm scale must be positive and finite");
  }
  if (k < 0) throw ConfigurationError("weight index must be nonnegative");
}

Seminorm Seminorm::frobenius(SpaceId space, double scale) {
  return {space, SeminormKind::frobenius, scale, 0, Ladder::polynomial};
}

Seminorm Seminorm::operator_norm(SpaceId space, double scale) {
  return {space, SeminormKind::operator_norm, scale, 0, Ladder::polynomial};
}

Seminorm Seminorm::weighted_sup(SpaceId space, int k, double scale, Ladder ladder) {
  return {space, SeminormKind::weighted_sup, scale, k, ladder};
}

Seminorm Seminorm::scaled(double c) const {
  return {space_, kind_, scale_ * c, k_, ladder_};
}

double Seminorm::weight(int j) const {
  if (ladder_ == Ladder::dyadic) return std::ldexp(1.0, j * k_);
  return std::pow(1.0 + j, k_);
}

double Seminorm::operator()(const ModelVector& v) const {
  require_same_space(space_, v.space());
  const auto& x = v.coords();
  double raw = 0.0;
  switch (kind_) {
    case SeminormKind::frobenius:
      raw = x.norm();
      break;
    case SeminormKind::operator_norm:
      if (space_.kind == SpaceKind::matrix) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(v.as_matrix());
        raw = svd.singularValues()[0];
      } else {
        raw = x.cwiseAbs().maxCoeff();
      }
      break;
    case SeminormKind::weighted_sup:
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        raw = std::max(raw, weight(static_cast<int>(j)) * std::abs(x[j]));
      }
      break;
  }
  return scale_ * raw;
}

std::string Seminorm::id() const {
  std::string base;
  switch (kind_) {
    case SeminormKind::frobenius:
      base = "frobenius";
      break;
    case SeminormKind::operator_norm:
      base = "operator";
      break;
    case SeminormKind::weighted_sup:
      base = std::string(ladder_ == Ladder::dyadic ? "dyadic-sup[" : "weighted-sup[") +
             std::to_string(k_) + "]";
      break;
  }
  return base + "*" + format_number(scale_, 6);
}

double seminorm_eval(const Seminorm& p, const ModelVector& v) { return p(v); }

double sup_seminorm(const Seminorm& p, std::span<const ModelVector> samples) {
  if (samples.empty()) throw DomainError("sup_seminorm of an empty curve");
  double best = 0.0;
  for (const auto& v : samples) best = std::max(best, p(v));
  return best;
}

SeminormFamily::SeminormFamily(SpaceId space, std::vector<Seminorm> members)
    : space_(space), members_(std::move(members)) {
  for (const auto& m : members_) require_same_space(space_, m.space());
}

SeminormFamily SeminormFamily::weighted_ladder(SpaceId space, int k_max, Ladder ladder) {
  std::vector<Seminorm> members;
  for (int k = 0; k <= k_max; ++k) members.push_back(Seminorm::weighted_sup(space, k, 1.0, ladder));
  return {space, std::move(members)};
}

bool SeminormFamily::dominated_on(std::size_t lower, std::size_t upper,
                                  std::span<const ModelVector> samples) const {
  const auto& lo = members_.at(lower);
  const auto& hi = members_.at(upper);
  return std::all_of(samples.begin(), samples.end(),
                     [&](const ModelVector& v) { return lo(v) <= hi(v) * (1.0 + 1e-12); });
}

}  // namespace prodint
