#include "prodint/curves.hpp"

#include "prodint/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace prodint {

namespace {

double slack(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

bool same_point(double a, double b) { return std::abs(a - b) <= slack(a) + slack(b); }

// Index of the piece whose interval contains the midpoint of [a, b].
std::size_t piece_for_cell(const PiecewiseCurve& phi, double a, double b) {
  return phi.piece_index(0.5 * (a + b));
}

std::vector<double> breakpoints_within(std::span<const double> points, double s, double t) {
  std::vector<double> out{s};
  for (double x : points) {
    if (x > s + slack(s) && x < t - slack(t)) out.push_back(x);
  }
  out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const std::vector<double>& param(const CurveSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    throw ConfigurationError("curve '" + spec.name + "' is missing parameter curve.params." + key);
  }
  return it->second;
}

int integer_param(const CurveSpec& spec, const std::string& key, int fallback) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) return fallback;
  if (it->second.size() != 1 || it->second[0] != std::floor(it->second[0]) || it->second[0] < 1) {
    throw ConfigurationError("curve.params." + key + " must be a single positive integer");
  }
  return static_cast<int>(it->second[0]);
}

}  // namespace

PiecewiseCurve::PiecewiseCurve(std::string group_id, SpaceId space, std::vector<double> breakpoints,
                               std::vector<AlgebraFn> pieces)
    : group_id_(std::move(group_id)),
      space_(space),
      breakpoints_(std::move(breakpoints)),
      pieces_(std::move(pieces)) {
  if (breakpoints_.size() < 2) throw DomainError("a curve needs at least one piece");
  if (pieces_.size() + 1 != breakpoints_.size()) {
    throw DomainError("piece count does not match breakpoints");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] < breakpoints_[i + 1]) || !std::isfinite(breakpoints_[i + 1])) {
      throw DomainError("breakpoints must be finite and strictly increasing");
    }
  }
  for (const auto& f : pieces_) {
    if (!f) throw DomainError("empty piece evaluator");
  }
}

std::size_t PiecewiseCurve::piece_index(double t) const {
  if (t < begin() - slack(begin()) || t > end() + slack(end()) || std::isnan(t)) {
    throw DomainError("t = " + std::to_string(t) + " outside curve domain");
  }
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto k = static_cast<std::ptrdiff_t>(it - breakpoints_.begin()) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, pieces_.size() - 1));
}

ModelVector PiecewiseCurve::eval_piece(std::size_t piece, double t) const {
  return {space_, pieces_.at(piece)(t)};
}

ModelVector PiecewiseCurve::operator()(double t) const { return eval_piece(piece_index(t), t); }

PiecewiseCurve constant_curve(const AlgebraElement& x, double r, double r1) {
  if (!(r < r1)) throw DomainError("constant_curve needs r < r'");
  Eigen::VectorXd v = x.coords.coords();
  return {x.group_id, x.coords.space(), {r, r1}, {[v](double) { return v; }}};
}

PiecewiseCurve zero_curve(const Group& group, double r, double r1) {
  return constant_curve(group.zero_algebra(), r, r1);
}

PiecewiseCurve scale_curve(double tau, const PiecewiseCurve& phi) {
  return transform_pointwise(phi, [tau](double, const Eigen::VectorXd& v) {
    return Eigen::VectorXd(tau * v);
  });
}

PiecewiseCurve transform_pointwise(
    const PiecewiseCurve& phi, std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> f) {
  std::vector<AlgebraFn> pieces;
  pieces.reserve(phi.piece_count());
  for (std::size_t p = 0; p < phi.piece_count(); ++p) {
    pieces.push_back([inner = phi.piece(p), f](double t) { return f(t, inner(t)); });
  }
  return {phi.group_id(), phi.space(), phi.breakpoints(), std::move(pieces)};
}

PiecewiseCurve restrict_to(const PiecewiseCurve& phi, double s, double t) {
  if (!(s < t)) throw DomainError("restrict_to needs s < t");
  if (s < phi.begin() - slack(phi.begin()) || t > phi.end() + slack(phi.end())) {
    throw DomainError("restriction interval leaves the curve domain");
  }
  auto bps = breakpoints_within(phi.breakpoints(), s, t);
  std::vector<AlgebraFn> pieces;
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    pieces.push_back(phi.piece(piece_for_cell(phi, bps[i], bps[i + 1])));
  }
  return {phi.group_id(), phi.space(), std::move(bps), std::move(pieces)};
}

PiecewiseCurve concatenate(const PiecewiseCurve& first, const PiecewiseCurve& second) {
  if (first.group_id() != second.group_id()) throw ConfigurationError("concatenate: group mismatch");
  require_same_space(first.space(), second.space());
  if (!same_point(first.end(), second.begin())) {
    throw DomainError("concatenate: domains are not adjacent");
  }
  std::vector<double> bps = first.breakpoints();
  bps.insert(bps.end(), second.breakpoints().begin() + 1, second.breakpoints().end());
  std::vector<AlgebraFn> pieces;
  for (std::size_t p = 0; p < first.piece_count(); ++p) pieces.push_back(first.piece(p));
  for (std::size_t p = 0; p < second.piece_count(); ++p) pieces.push_back(second.piece(p));
  return {first.group_id(), first.space(), std::move(bps), std::move(pieces)};
}

std::vector<double> merge_breakpoints(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  std::vector<double> unique;
  for (double x : out) {
    if (unique.empty() || !same_point(unique.back(), x)) unique.push_back(x);
  }
  return unique;
}

PiecewiseCurve refine(const PiecewiseCurve& phi, std::span<const double> points) {
  auto bps = merge_breakpoints(phi.breakpoints(), breakpoints_within(points, phi.begin(), phi.end()));
  bps.front() = phi.begin();
  bps.back() = phi.end();
  std::vector<AlgebraFn> pieces;
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    pieces.push_back(phi.piece(piece_for_cell(phi, bps[i], bps[i + 1])));
  }
  return {phi.group_id(), phi.space(), std::move(bps), std::move(pieces)};
}

PiecewiseCurve linear_combination(double alpha, const PiecewiseCurve& a, double beta,
                                  const PiecewiseCurve& b) {
  if (a.group_id() != b.group_id()) throw ConfigurationError("curve group mismatch");
  require_same_space(a.space(), b.space());
  if (!same_point(a.begin(), b.begin()) || !same_point(a.end(), b.end())) {
    throw DomainError("curves must share their domain");
  }
  auto bps = merge_breakpoints(a.breakpoints(), b.breakpoints());
  std::vector<AlgebraFn> pieces;
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    const auto& fa = a.piece(piece_for_cell(a, bps[i], bps[i + 1]));
    const auto& fb = b.piece(piece_for_cell(b, bps[i], bps[i + 1]));
    pieces.push_back([fa, fb, alpha, beta](double t) {
      return Eigen::VectorXd(alpha * fa(t) + beta * fb(t));
    });
  }
  return {a.group_id(), a.space(), std::move(bps), std::move(pieces)};
}

PiecewiseCurve subtract(const PiecewiseCurve& psi, const PiecewiseCurve& phi) {
  return linear_combination(1.0, psi, -1.0, phi);
}

Reparametrization Reparametrization::affine(double begin, double end, double slope, double offset) {
  return {begin, end, [slope, offset](double t) { return slope * t + offset; },
          [slope](double) { return slope; }, true};
}

PiecewiseCurve reparametrize(const PiecewiseCurve& phi, const Reparametrization& rho) {
  if (!(rho.begin < rho.end) || !rho.map || !rho.derivative) {
    throw DomainError("reparametrize needs a C¹ map on a proper interval");
  }
  constexpr int kGrid = 1024;
  std::vector<double> grid(kGrid + 1), image(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) {
    grid[i] = i == kGrid ? rho.end : rho.begin + (rho.end - rho.begin) * i / kGrid;
    image[i] = rho.map(grid[i]);
    if (image[i] < phi.begin() - slack(phi.begin()) || image[i] > phi.end() + slack(phi.end())) {
      throw DomainError("reparametrization range leaves the curve domain");
    }
  }

  // Preimages of interior breakpoints: sign changes on the grid (the whole
  // interval for monotone maps), then bisection.
  std::vector<double> cuts;
  const auto& bps = phi.breakpoints();
  for (std::size_t k = 1; k + 1 < bps.size(); ++k) {
    const double b = bps[k];
    auto bisect = [&](double lo, double hi) {
      double flo = rho.map(lo) - b;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = rho.map(mid) - b;
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      cuts.push_back(0.5 * (lo + hi));
    };
    if (rho.monotone) {
      const double f0 = rho.map(rho.begin) - b, f1 = rho.map(rho.end) - b;
      if (f0 * f1 < 0) bisect(rho.begin, rho.end);
      continue;
    }
    for (int i = 0; i < kGrid; ++i) {
      const double f0 = image[i] - b, f1 = image[i + 1] - b;
      if (f0 == 0.0 && i > 0) cuts.push_back(grid[i]);
      if (f0 * f1 < 0) bisect(grid[i], grid[i + 1]);
    }
  }
  auto new_bps = breakpoints_within(cuts, rho.begin, rho.end);
  new_bps = merge_breakpoints(new_bps, {});

  std::vector<AlgebraFn> pieces;
  for (std::size_t i = 0; i + 1 < new_bps.size(); ++i) {
    const std::size_t p = phi.piece_index(rho.map(0.5 * (new_bps[i] + new_bps[i + 1])));
    const double lo = bps[p], hi = bps[p + 1];
    pieces.push_back([inner = phi.piece(p), map = rho.map, deriv = rho.derivative, lo, hi](double t) {
      return Eigen::VectorXd(deriv(t) * inner(std::clamp(map(t), lo, hi)));
    });
  }
  return {phi.group_id(), phi.space(), std::move(new_bps), std::move(pieces)};
}

std::vector<ModelVector> sample_curve(const PiecewiseCurve& phi, std::size_t points) {
  if (points == 0) throw DomainError("sample_curve needs at least one point");
  std::vector<ModelVector> out;
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? phi.begin()
                                 : phi.begin() + (phi.end() - phi.begin()) * static_cast<double>(i) /
                                                     static_cast<double>(points - 1);
    out.push_back(phi(std::min(t, phi.end())));
  }
  return out;
}

double sup_seminorm(const Seminorm& p, const PiecewiseCurve& phi, std::size_t points) {
  const auto samples = sample_curve(phi, points);
  return sup_seminorm(p, std::span<const ModelVector>(samples));
}

double l1_seminorm(const Seminorm& q, const PiecewiseCurve& phi, int steps_per_piece) {
  if (steps_per_piece < 1) throw DomainError("steps_per_piece must be ≥ 1");
  double total = 0.0;
  for (std::size_t p = 0; p < phi.piece_count(); ++p) {
    const double a = phi.breakpoints()[p];
    const double h = (phi.breakpoints()[p + 1] - a) / steps_per_piece;
    double sum = 0.0;
    for (int i = 0; i < steps_per_piece; ++i) sum += q(phi.eval_piece(p, a + (i + 0.5) * h));
    total += sum * h;
  }
  return total;
}

double finite_difference_step(double t) { return std::max(1e-6, 1e-8 * std::abs(t)); }

GroupCurve::GroupCurve(GroupPtr group, double a, double b, GroupFn value, GroupFn derivative,
                       Smoothness smoothness)
    : group_(std::move(group)),
      a_(a),
      b_(b),
      value_(std::move(value)),
      derivative_(std::move(derivative)),
      smoothness_(smoothness) {
  if (!group_) throw ConfigurationError("GroupCurve without a group");
  if (!(a_ < b_)) throw DomainError("GroupCurve needs a < b");
  if (!value_) throw DomainError("GroupCurve without an evaluator");
}

void GroupCurve::require_in_domain(double t) const {
  if (t < a_ - slack(a_) || t > b_ + slack(b_) || std::isnan(t)) {
    throw DomainError("t = " + std::to_string(t) + " outside group curve domain");
  }
}

Eigen::MatrixXd GroupCurve::value(double t) const {
  require_in_domain(t);
  return value_(t);
}

GroupElement GroupCurve::operator()(double t) const { return {group_->id(), value(t)}; }

Eigen::MatrixXd GroupCurve::derivative(double t) const {
  if (smoothness_ != Smoothness::c1) throw ContractError("derivative requested of a C⁰ curve");
  require_in_domain(t);
  if (derivative_) return derivative_(t);
  return finite_difference_derivative(t);
}

Eigen::MatrixXd GroupCurve::finite_difference_derivative(double t) const {
  require_in_domain(t);
  const double h = finite_difference_step(t);
  if (t - h < a_) {
    return (-3.0 * value_(t) + 4.0 * value_(t + h) - value_(t + 2 * h)) / (2.0 * h);
  }
  if (t + h > b_) {
    return (3.0 * value_(t) - 4.0 * value_(t - h) + value_(t - 2 * h)) / (2.0 * h);
  }
  return (value_(t + h) - value_(t - h)) / (2.0 * h);
}

GroupCurve rescale_group_curve(const GroupCurve& mu, double tau, int m) {
  if (m < 1) throw DomainError("rescale_group_curve needs m ≥ 1");
  const double far = tau / m;
  const double lo = std::min(0.0, far), hi = std::max(0.0, far);
  if (lo < mu.begin() - slack(mu.begin()) || hi > mu.end() + slack(mu.end())) {
    throw DomainError("[0, τ/m] is not inside the curve domain");
  }
  GroupFn value = [mu, tau](double t) { return mu.value(tau * t); };
  GroupFn derivative;
  if (mu.smoothness() == Smoothness::c1) {
    derivative = [mu, tau](double t) { return Eigen::MatrixXd(tau * mu.derivative(tau * t)); };
  }
  return {mu.group_ptr(), 0.0, 1.0 / m, std::move(value), std::move(derivative), mu.smoothness()};
}

GroupCurve one_parameter_subgroup(GroupPtr group, const AlgebraElement& x, double a, double b) {
  group->require_member(x);
  const Group* g = group.get();
  GroupFn value = [g, x](double t) {
    return g->exp({x.group_id, t * x.coords}).value;
  };
  GroupFn derivative = [g, x](double t) {
    return g->right_translate(x, g->exp({x.group_id, t * x.coords}));
  };
  return {std::move(group), a, b, std::move(value), std::move(derivative), Smoothness::c1};
}

GroupCurve exp_product_curve(GroupPtr group, const AlgebraElement& x, const AlgebraElement& y,
                             int k, double a, double b) {
  group->require_member(x);
  group->require_member(y);
  if (k < 1) throw ConfigurationError("exp-product exponent k must be ≥ 1");
  const Group* g = group.get();
  auto element = [g, x, y, k](double t) {
    return g->multiply(g->exp({x.group_id, t * x.coords}),
                       g->exp({y.group_id, std::pow(t, k) * y.coords}));
  };
  GroupFn value = [element](double t) { return element(t).value; };
  // δμ = X + Ad_{exp(tX)}(k t^{k−1} Y)
  GroupFn derivative = [g, x, y, k, element](double t) {
    const AlgebraElement scaled_y{y.group_id, (k * std::pow(t, k - 1)) * y.coords};
    const AlgebraElement drift = g->adjoint(g->exp({x.group_id, t * x.coords}), scaled_y);
    const AlgebraElement velocity{x.group_id, x.coords + drift.coords};
    return g->right_translate(velocity, element(t));
  };
  return {std::move(group), a, b, std::move(value), std::move(derivative), Smoothness::c1};
}

PiecewiseCurve make_algebra_curve(const Group& group, const CurveSpec& spec, double r, double r1) {
  if (!(r < r1)) throw DomainError("curve domain must satisfy r < r'");
  auto single = [&](AlgebraFn f) {
    return PiecewiseCurve(group.id(), group.space(), {r, r1}, {std::move(f)});
  };
  if (spec.name == "const") {
    return constant_curve(group.algebra(param(spec, "X")), r, r1);
  }
  if (spec.name == "linear") {
    const Eigen::VectorXd x = group.algebra(param(spec, "X")).coords.coords();
    const Eigen::VectorXd y = group.algebra(param(spec, "Y")).coords.coords();
    return single([x, y](double t) { return Eigen::VectorXd(x + t * y); });
  }
  if (spec.name == "sin-axis") {
    const Eigen::VectorXd x = group.algebra(param(spec, "X")).coords.coords();
    const Eigen::VectorXd y = group.algebra(param(spec, "Y")).coords.coords();
    return single([x, y](double t) { return Eigen::VectorXd(std::sin(t) * x + std::cos(t) * y); });
  }
  if (spec.name == "exp-product") {
    const AlgebraElement x = group.algebra(param(spec, "X"));
    const AlgebraElement y = group.algebra(param(spec, "Y"));
    const int k = integer_param(spec, "k", 2);
    const Group* g = &group;
    return single([g, x, y, k](double t) {
      const AlgebraElement scaled_y{y.group_id, (k * std::pow(t, k - 1)) * y.coords};
      return Eigen::VectorXd(x.coords.coords() +
                             g->adjoint(g->exp({x.group_id, t * x.coords}), scaled_y).coords.coords());
    });
  }
  throw ConfigurationError("unknown curve '" + spec.name + "'");
}

GroupCurve make_group_curve(GroupPtr group, const CurveSpec& spec, double a, double b) {
  if (spec.name == "const") {
    const AlgebraElement x = group->algebra(param(spec, "X"));
    return one_parameter_subgroup(std::move(group), x, a, b);
  }
  if (spec.name == "exp-product") {
    const AlgebraElement x = group->algebra(param(spec, "X"));
    const AlgebraElement y = group->algebra(param(spec, "Y"));
    return exp_product_curve(std::move(group), x, y, integer_param(spec, "k", 2), a, b);
  }
  if (spec.name == "linear" || spec.name == "sin-axis") {
    throw ConfigurationError("curve '" + spec.name + "' has no group-curve form");
  }
  throw ConfigurationError("unknown curve '" + spec.name + "'");
}

std::vector<std::string> registered_curve_names() {
  return {"const", "exp-product", "linear", "sin-axis"};
}

PiecewiseCurve random_trig_curve(const Group& group, std::mt19937_64& rng, double radius, double r,
                                 double r1, int harmonics) {
  if (harmonics < 0) throw DomainError("harmonics must be ≥ 0");
  const double each = radius / (2.0 * (harmonics + 1));
  std::vector<Eigen::VectorXd> cos_terms, sin_terms;
  for (int j = 0; j <= harmonics; ++j) {
    cos_terms.push_back(group.random_algebra(rng, each).coords.coords());
    sin_terms.push_back(group.random_algebra(rng, each).coords.coords());
  }
  const double len = r1 - r;
  AlgebraFn f = [cos_terms, sin_terms, r, len](double t) {
    const double s = std::numbers::pi * (t - r) / len;
    Eigen::VectorXd v = cos_terms[0];
    for (std::size_t j = 1; j < cos_terms.size(); ++j) {
      v += std::cos(j * s) * cos_terms[j] + std::sin(j * s) * sin_terms[j];
    }
    return v;
  };
  return {group.id(), group.space(), {r, r1}, {std::move(f)}};
}

PiecewiseCurve random_polynomial_curve(const Group& group, std::mt19937_64& rng, double radius,
                                       double r, double r1, int degree) {
  if (degree < 0) throw DomainError("degree must be ≥ 0");
  std::vector<Eigen::VectorXd> coeffs;
  for (int j = 0; j <= degree; ++j) {
    coeffs.push_back(group.random_algebra(rng, radius / (degree + 1)).coords.coords());
  }
  const double len = r1 - r;
  AlgebraFn f = [coeffs, r, len](double t) {
    const double s = (t - r) / len;
    Eigen::VectorXd v = coeffs.back();
    for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) v = (s * v + *it).eval();
    return v;
  };
  return {group.id(), group.space(), {r, r1}, {std::move(f)}};
}

}  // namespace prodint
