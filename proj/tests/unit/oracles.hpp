#pragma once

// Closed forms used as independent references; none of them go through
// Eigen's MatrixFunctions.

#include <Eigen/Dense>

#include <cmath>

namespace oracle {

// exp of the skew matrix [w]_x.
inline Eigen::Matrix3d rodrigues(const Eigen::Vector3d& w) {
  const double theta = w.norm();
  Eigen::Matrix3d k;
  k << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  if (theta < 1e-12) return Eigen::Matrix3d::Identity() + k;
  return Eigen::Matrix3d::Identity() + std::sin(theta) / theta * k +
         (1 - std::cos(theta)) / (theta * theta) * k * k;
}

// exp of a real 2x2 matrix via Cayley-Hamilton on the traceless part.
inline Eigen::Matrix2d exp2x2(const Eigen::Matrix2d& a) {
  const double half = 0.5 * a.trace();
  const Eigen::Matrix2d b = a - half * Eigen::Matrix2d::Identity();
  const double d = -b.determinant();  // b² = d·I
  double c, s;
  if (d > 1e-300) {
    const double r = std::sqrt(d);
    c = std::cosh(r);
    s = std::sinh(r) / r;
  } else if (d < -1e-300) {
    const double r = std::sqrt(-d);
    c = std::cos(r);
    s = std::sin(r) / r;
  } else {
    c = 1.0;
    s = 1.0;
  }
  return std::exp(half) * (c * Eigen::Matrix2d::Identity() + s * b);
}

// exp of [[0,a,c],[0,0,b],[0,0,0]].
inline Eigen::Matrix3d heisenberg_exp(double a, double b, double c) {
  Eigen::Matrix3d g = Eigen::Matrix3d::Identity();
  g(0, 1) = a;
  g(1, 2) = b;
  g(0, 2) = c + 0.5 * a * b;
  return g;
}

// Least-squares slope of log(y) against log(x).
template <class Xs, class Ys>
double loglog_slope(const Xs& xs, const Ys& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = std::log(xs[i]), y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
