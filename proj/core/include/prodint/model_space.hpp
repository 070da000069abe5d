#pragma once

// Model-space vectors and the seminorm calculus.
//
// Every group in this library is modeled over a finite-dimensional space E:
// either the algebra of n×n real matrices (flattened row-major) or a
// truncation of a weighted sequence space to length D. A Seminorm is one
// member of the family 𝔖 of continuous seminorms on E.

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace prodint {

enum class SpaceKind { matrix, sequence };

struct SpaceId {
  SpaceKind kind = SpaceKind::sequence;
  int size = 0;  // matrix side n, or sequence length D

  static SpaceId matrix(int n) { return {SpaceKind::matrix, n}; }
  static SpaceId sequence(int d) { return {SpaceKind::sequence, d}; }

  int dimension() const { return kind == SpaceKind::matrix ? size * size : size; }
  std::string name() const;

  bool operator==(const SpaceId&) const = default;
};

class ModelVector {
 public:
  ModelVector(SpaceId space, Eigen::VectorXd coords);

  static ModelVector zero(SpaceId space);
  static ModelVector basis(SpaceId space, int j);
  // Row-major flattening of a square matrix.
  static ModelVector from_matrix(const Eigen::MatrixXd& m);

  const SpaceId& space() const { return space_; }
  const Eigen::VectorXd& coords() const { return coords_; }
  double operator[](Eigen::Index j) const { return coords_[j]; }
  Eigen::Index dimension() const { return coords_.size(); }

  // Inverse of from_matrix; only for matrix spaces.
  Eigen::MatrixXd as_matrix() const;

  ModelVector operator+(const ModelVector& other) const;
  ModelVector operator-(const ModelVector& other) const;
  ModelVector operator-() const;
  ModelVector operator*(double c) const;
  friend ModelVector operator*(double c, const ModelVector& v) { return v * c; }

 private:
  SpaceId space_;
  Eigen::VectorXd coords_;
};

void require_same_space(const SpaceId& a, const SpaceId& b);

enum class SeminormKind { operator_norm, frobenius, weighted_sup };

// Weight ladders for weighted-sup seminorms: polynomial w_j = (1+j)^k,
// dyadic w_j = 2^(j·k).
enum class Ladder { polynomial, dyadic };

class Seminorm {
 public:
  static Seminorm frobenius(SpaceId space, double scale = 1.0);
  // Spectral norm of the matrix; on sequence spaces the sup norm (operator
  // norm of the diagonal operator).
  static Seminorm operator_norm(SpaceId space, double scale = 1.0);
  static Seminorm weighted_sup(SpaceId space, int k, double scale = 1.0,
                               Ladder ladder = Ladder::polynomial);

  double operator()(const ModelVector& v) const;

  // Same kind, scale multiplied by c > 0.
  Seminorm scaled(double c) const;

  const SpaceId& space() const { return space_; }
  SeminormKind kind() const { return kind_; }
  double scale() const { return scale_; }
  int weight_index() const { return k_; }
  Ladder ladder() const { return ladder_; }
  double weight(int j) const;

  // Stable textual id, e.g. "frobenius*1.25" or "weighted-sup[3]*1".
  std::string id() const;

 private:
  Seminorm(SpaceId space, SeminormKind kind, double scale, int k, Ladder ladder);

  SpaceId space_;
  SeminormKind kind_;
  double scale_;
  int k_ = 0;
  Ladder ladder_ = Ladder::polynomial;
};

double seminorm_eval(const Seminorm& p, const ModelVector& v);

// Grid approximation of p_∞(φ) = sup_t p(φ(t)) over already sampled values.
double sup_seminorm(const Seminorm& p, std::span<const ModelVector> samples);

class SeminormFamily {
 public:
  SeminormFamily(SpaceId space, std::vector<Seminorm> members);

  // weighted-sup seminorms k = 0..k_max on one space.
  static SeminormFamily weighted_ladder(SpaceId space, int k_max,
                                        Ladder ladder = Ladder::polynomial);

  const SpaceId& space() const { return space_; }
  const std::vector<Seminorm>& members() const { return members_; }

  // Checks members_[lower] ≤ members_[upper] on the given samples.
  bool dominated_on(std::size_t lower, std::size_t upper,
                    std::span<const ModelVector> samples) const;

 private:
  SpaceId space_;
  std::vector<Seminorm> members_;
};

}  // namespace prodint
