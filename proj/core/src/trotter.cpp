#include "prodint/trotter.hpp"

#include "prodint/error.hpp"
#include "prodint/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace prodint {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_tau(const TrotterFamily& fam, double tau) {
  if (!(tau >= 0.0 && tau <= fam.ell * (1.0 + 1e-12))) {
    throw DomainError("τ = " + std::to_string(tau) + " outside [0, ℓ]");
  }
}

void require_n(const TrotterFamily& fam, int n) {
  if (n < fam.m) {
    throw DomainError("n = " + std::to_string(n) + " below m = " + std::to_string(fam.m));
  }
}

bool chart_covers(const GroupCurve& mu, double upto) {
  constexpr int kGrid = 100;
  for (int i = 0; i <= kGrid; ++i) {
    try {
      mu.group().chart_forward(mu(upto * i / kGrid));
    } catch (const OutOfChartDomain&) {
      return false;
    }
  }
  return true;
}

double safe_discrepancy(const Group& group, const Seminorm& p, const GroupElement& a,
                        const GroupElement& b) {
  try {
    return chart_discrepancy(group, p, a, b);
  } catch (const OutOfChartDomain&) {
    return kInf;
  }
}

}  // namespace

TrotterFamily make_trotter_family(GroupCurve mu, double ell, std::optional<int> m) {
  if (!(ell > 0.0)) throw DomainError("ℓ must be positive");
  if (mu.begin() != 0.0) throw DomainError("Trotter curves start at t = 0");
  if (mu.smoothness() != Smoothness::c1) throw ContractError("Trotter curves must be C¹");
  const Group& group = mu.group();
  if (group.distance_from_identity(mu(0.0)) > 1e-12) throw ContractError("μ(0) must be e");

  const int m_min = std::max(1, static_cast<int>(std::ceil(ell / mu.end() - 1e-12)));
  int chosen = 0;
  if (m) {
    if (*m < m_min) throw DomainError("m too small: [0, ℓ/m] leaves the curve domain");
    if (!chart_covers(mu, ell / *m)) throw OutOfChartDomain("μ([0, ℓ/m]) leaves the chart");
    chosen = *m;
  } else {
    for (chosen = m_min; !chart_covers(mu, ell / chosen); ++chosen) {
      if (chosen > 1'000'000) throw OutOfChartDomain("no m keeps μ([0, ℓ/m]) in the chart");
    }
  }
  AlgebraElement x = log_derivative(mu, 0.0);
  return {std::move(mu), std::move(x), ell, chosen};
}

PiecewiseCurve build_chi(const TrotterFamily& fam, double tau, int n) {
  require_tau(fam, tau);
  require_n(fam, n);
  const GroupCurve mu_tau = rescale_group_curve(fam.mu, tau, fam.m);
  const Group& group = fam.mu.group();
  AlgebraFn chi = [mu_tau](double t) { return log_derivative(mu_tau, t).coords.coords(); };
  return {group.id(), group.space(), {0.0, 1.0 / n}, {std::move(chi)}};
}

PiecewiseCurve build_phi_tau_n(const TrotterFamily& fam, double tau, int n) {
  const PiecewiseCurve chi = build_chi(fam, tau, n);
  const double width = 1.0 / n;
  std::vector<double> bps(static_cast<std::size_t>(n) + 1);
  std::vector<AlgebraFn> pieces;
  pieces.reserve(static_cast<std::size_t>(n));
  for (int p = 0; p <= n; ++p) bps[p] = p == n ? 1.0 : static_cast<double>(p) / n;
  for (int p = 0; p < n; ++p) {
    const double shift = bps[p];
    pieces.push_back([f = chi.piece(0), shift, width](double t) {
      return f(std::clamp(t - shift, 0.0, width));
    });
  }
  return {chi.group_id(), chi.space(), std::move(bps), std::move(pieces)};
}

GroupElement trotter_power(const TrotterFamily& fam, double tau, int n) {
  if (n < 1) throw DomainError("n must be ≥ 1");
  return fam.mu.group().power(fam.mu(tau / n), n);
}

double verify_power_identity(const TrotterFamily& fam, double tau, int n, const Seminorm& p,
                             const StepperConfig& cfg) {
  const PiecewiseCurve phi = build_phi_tau_n(fam, tau, n);
  const Group& group = fam.mu.group();
  const GroupElement integral = evolve(group, phi, 0.0, 1.0, cfg).endpoint;
  return chart_discrepancy(group, p, trotter_power(fam, tau, n), integral);
}

double trotter_error(const TrotterFamily& fam, double tau, int n, const Seminorm& p) {
  require_tau(fam, tau);
  const Group& group = fam.mu.group();
  const GroupElement limit = group.exp({fam.generator.group_id, tau * fam.generator.coords});
  return safe_discrepancy(group, p, limit, trotter_power(fam, tau, n));
}

ConvergenceTable uniform_trotter_sweep(const TrotterFamily& fam, int tau_grid_size,
                                       std::span<const int> n_list, const Seminorm& p,
                                       std::span<const double> epsilons) {
  if (tau_grid_size < 2) throw DomainError("τ grid needs at least two points");
  if (n_list.empty()) throw DomainError("empty n list");
  for (std::size_t i = 0; i + 1 < n_list.size(); ++i) {
    if (!(n_list[i] < n_list[i + 1])) throw DomainError("n list must be strictly increasing");
  }
  ConvergenceTable table;
  table.tau_grid_size = tau_grid_size;
  table.ell = fam.ell;
  table.seminorm = p.id();
  std::vector<double> taus(static_cast<std::size_t>(tau_grid_size));
  for (int i = 0; i < tau_grid_size; ++i) {
    taus[i] = i + 1 == tau_grid_size ? fam.ell : fam.ell * i / (tau_grid_size - 1);
  }
  for (int n : n_list) {
    const auto errors =
        parallel_map(taus.size(), [&](std::size_t i) { return trotter_error(fam, taus[i], n, p); });
    ConvergenceRow row{n, errors[0], taus[0]};
    for (std::size_t i = 1; i < errors.size(); ++i) {
      if (errors[i] > row.sup_error) {
        row.sup_error = errors[i];
        row.argmax_tau = taus[i];
      }
    }
    table.rows.push_back(row);
  }
  for (double eps : epsilons) {
    EpsilonThreshold th{eps, std::nullopt};
    for (const auto& row : table.rows) {
      if (row.sup_error <= eps) {
        th.n = row.n;
        break;
      }
    }
    table.thresholds.push_back(th);
  }
  return table;
}

double loglog_slope(std::span<const ConvergenceRow> rows, bool top_decade) {
  int n_max = 0;
  for (const auto& r : rows) n_max = std::max(n_max, r.n);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& r : rows) {
    if (!std::isfinite(r.sup_error) || r.sup_error <= 0.0) continue;
    if (top_decade && r.n * 10.0 < n_max) continue;
    const double x = std::log(static_cast<double>(r.n)), y = std::log(r.sup_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

bool is_monotone_decreasing(std::span<const ConvergenceRow> rows, double slack) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].sup_error > (1.0 + slack) * rows[i - 1].sup_error) return false;
  }
  return true;
}

OneSidedSups uniform_convergence_check(const Group& group, std::span<const GroupPath> sequence,
                                       const GroupPath& limit, const Seminorm& p,
                                       std::span<const double> grid) {
  if (grid.empty()) throw DomainError("empty grid");
  std::vector<GroupElement> limits;
  limits.reserve(grid.size());
  for (double t : grid) limits.push_back(limit(t));
  OneSidedSups sups;
  for (const auto& nu : sequence) {
    double right = 0.0, left = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const GroupElement value = nu(grid[i]);
      right = std::max(right, safe_discrepancy(group, p, limits[i], value));
      // ν·μ⁻¹ = (μ·ν⁻¹)⁻¹·e, written as a left-translated discrepancy.
      left = std::max(left, safe_discrepancy(group, p, group.multiply(limits[i], group.inverse(value)),
                                             group.identity()));
    }
    sups.right.push_back(right);
    sups.left.push_back(left);
  }
  return sups;
}

GroupPath trotter_sequence_path(const TrotterFamily& fam, int n) {
  return [fam, n](double tau) { return trotter_power(fam, tau, n); };
}

GroupPath trotter_limit_path(const TrotterFamily& fam) {
  return [fam](double tau) {
    return fam.mu.group().exp({fam.generator.group_id, tau * fam.generator.coords});
  };
}

std::vector<double> continuity_probe(const Group& group, const PiecewiseCurve& phi, double tau_lo,
                                     double tau_hi, int levels, const Seminorm& p,
                                     const StepperConfig& cfg) {
  if (!(tau_lo < tau_hi)) throw DomainError("continuity_probe needs a proper τ interval");
  if (levels < 1) throw DomainError("continuity_probe needs at least one level");
  std::vector<double> oscillation;
  for (int level = 1; level <= levels; ++level) {
    const int cells = 1 << level;
    std::vector<double> ts(cells + 1);
    for (int k = 0; k <= cells; ++k) {
      ts[k] = k == cells ? phi.end() : phi.begin() + (phi.end() - phi.begin()) * k / cells;
    }
    // values[i][k] = Φ(τ_i, t_k)
    auto values = parallel_map(static_cast<std::size_t>(cells) + 1, [&](std::size_t i) {
      const double tau = i == static_cast<std::size_t>(cells)
                             ? tau_hi
                             : tau_lo + (tau_hi - tau_lo) * static_cast<double>(i) / cells;
      const PiecewiseCurve scaled = scale_curve(tau, phi);
      std::vector<GroupElement> row{group.identity()};
      for (int k = 0; k < cells; ++k) {
        row.push_back(group.multiply(evolve(group, scaled, ts[k], ts[k + 1], cfg).endpoint, row.back()));
      }
      return row;
    });
    double worst = 0.0;
    for (int i = 0; i <= cells; ++i) {
      for (int k = 0; k <= cells; ++k) {
        if (i < cells) worst = std::max(worst, safe_discrepancy(group, p, values[i][k], values[i + 1][k]));
        if (k < cells) worst = std::max(worst, safe_discrepancy(group, p, values[i][k], values[i][k + 1]));
      }
    }
    oscillation.push_back(worst);
  }
  return oscillation;
}

}  // namespace prodint
