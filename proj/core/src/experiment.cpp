#include "prodint/experiment.hpp"

#include "prodint/error.hpp"
#include "prodint/estimates.hpp"
#include "prodint/format.hpp"
#include "prodint/parallel.hpp"
#include "prodint/trotter.hpp"
#include "prodint/version.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

namespace prodint {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "kind",         "group",         "chart",       "curve",        "curve2",
    "seminorm",     "stepper",       "output",      "seed",         "ell",
    "tau_grid",     "n_list",        "eps",         "max_slope",    "monotone_slack",
    "random_curves", "curve_radius", "residual_tol", "scale_grid",  "samples",
    "sample_radius", "probe_curves", "ball_radius", "control",      "levels",
    "tau_lo",       "tau_hi"};

template <class T>
T get(const json& doc, const std::string& key, const T& fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigurationError("key '" + key + "': " + e.what());
  }
}

CurveSpec parse_curve(const json& node, const std::string& key) {
  if (!node.is_object() || !node.contains("name")) {
    throw ConfigurationError("key '" + key + "' needs an object with a 'name'");
  }
  CurveSpec spec;
  spec.name = get<std::string>(node, "name", "");
  const auto names = registered_curve_names();
  if (std::find(names.begin(), names.end(), spec.name) == names.end()) {
    throw ConfigurationError("key '" + key + ".name': unknown curve '" + spec.name + "'");
  }
  if (node.contains("params")) {
    for (const auto& [name, value] : node.at("params").items()) {
      try {
        spec.params[name] =
            value.is_array() ? value.get<std::vector<double>>() : std::vector<double>{value.get<double>()};
      } catch (const json::exception& e) {
        throw ConfigurationError("key '" + key + ".params." + name + "': " + e.what());
      }
    }
  }
  return spec;
}

json curve_json(const CurveSpec& spec) {
  json params = json::object();
  for (const auto& [k, v] : spec.params) params[k] = v;
  return {{"name", spec.name}, {"params", params}};
}

ExperimentKind parse_kind(const std::string& name) {
  for (auto kind : {ExperimentKind::identities, ExperimentKind::estimates, ExperimentKind::trotter,
                    ExperimentKind::convergence, ExperimentKind::continuity}) {
    if (name == kind_name(kind)) return kind;
  }
  throw ConfigurationError("key 'kind': unknown experiment kind '" + name + "'");
}

ChartKind parse_chart(const std::string& name) {
  if (name == "exponential") return ChartKind::exponential;
  if (name == "cayley") return ChartKind::cayley;
  throw ConfigurationError("key 'chart': unknown chart '" + name + "'");
}

GroupPtr group_of(const ExperimentConfig& cfg) {
  try {
    return make_group(cfg.group, parse_chart(cfg.chart));
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(std::string("key 'group': ") + e.what());
  }
}

const CurveSpec& require_curve(const ExperimentConfig& cfg) {
  if (!cfg.curve) {
    throw ConfigurationError(std::string("key 'curve' is required for kind '") + kind_name(cfg.kind) + "'");
  }
  return *cfg.curve;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::string header) { out_ << header << '\n'; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  void raw(const std::string& line) { out_ << line << '\n'; }
  std::filesystem::path write(const std::filesystem::path& dir, const std::string& name) const {
    const auto path = dir / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigurationError("key 'output': cannot write " + path.string());
    file << out_.str();
    return path;
  }

 private:
  std::ostringstream out_;
};

RunOutcome run_identities(const ExperimentConfig& cfg) {
  const GroupPtr group = group_of(cfg);
  const Seminorm p = cfg.seminorm.build(group->space());
  std::mt19937_64 rng(cfg.seed);

  struct Case {
    std::string name;
    PiecewiseCurve phi;
    PiecewiseCurve psi;
  };
  std::vector<Case> cases;
  if (cfg.curve) {
    PiecewiseCurve phi = make_algebra_curve(*group, *cfg.curve, 0.0, 1.0);
    PiecewiseCurve psi = cfg.curve2 ? make_algebra_curve(*group, *cfg.curve2, 0.0, 1.0)
                                    : random_trig_curve(*group, rng, cfg.curve_radius, 0.0, 1.0);
    cases.push_back({"configured", std::move(phi), std::move(psi)});
  }
  for (int i = 0; i < cfg.random_curves; ++i) {
    PiecewiseCurve phi = random_trig_curve(*group, rng, cfg.curve_radius, 0.0, 1.0);
    PiecewiseCurve psi = random_trig_curve(*group, rng, cfg.curve_radius, 0.0, 1.0);
    cases.push_back({"random-" + std::to_string(i), std::move(phi), std::move(psi)});
  }

  const double partition[] = {0.0, 0.3, 0.55, 1.0};
  // Affine ϱ maps matched step grids one-to-one, so d) is exact up to roundoff
  // on abelian groups.
  const Reparametrization affine = Reparametrization::affine(0.0, 1.0, 0.5, 0.25);
  const auto residuals = parallel_map(cases.size(), [&](std::size_t i) {
    const auto& c = cases[i];
    const AlgebraElement x = group->algebra(c.phi(0.0));
    const ScalingCheck scaling = exp_scaling_check(*group, x, 0.5, 3, p, cfg.stepper);
    return std::vector<std::pair<std::string, double>>{
        {"a", identity_a_residual(*group, c.phi, c.psi, p, cfg.stepper)},
        {"b", identity_b_residual(*group, c.phi, c.psi, p, cfg.stepper)},
        {"c", identity_c_residual(*group, c.phi, partition, p, cfg.stepper)},
        {"d", identity_d_residual(*group, c.phi, affine, p, cfg.stepper)},
        {"exp-scaling", scaling.scaled_residual},
        {"exp-power", scaling.power_residual}};
  });

  RunOutcome outcome;
  CsvWriter csv("identity,group,seminorm,scheme,steps_per_unit,case,residual");
  double worst = 0.0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    for (const auto& [name, value] : residuals[i]) {
      csv.row({name, group->id(), p.id(), scheme_name(cfg.stepper.scheme),
               std::to_string(cfg.stepper.steps_per_unit), cases[i].name, format_number(value)});
      worst = std::max(worst, value);
    }
  }
  outcome.outputs.push_back(csv.write(cfg.output, "identities.csv"));
  outcome.summary.push_back("identities: worst residual " + format_number(worst));
  if (cfg.residual_tol && !(worst <= *cfg.residual_tol)) {
    outcome.exit_code = 2;
    outcome.summary.push_back("identities: residual gate " + format_number(*cfg.residual_tol) + " failed");
  }
  return outcome;
}

RunOutcome run_estimates(const ExperimentConfig& cfg) {
  const GroupPtr group = group_of(cfg);
  const Group& g = *group;
  const Seminorm p = cfg.seminorm.build(g.space());
  const SampleSpec spec{cfg.samples, 8, cfg.sample_radius, cfg.seed};

  std::mt19937_64 rng(cfg.seed);
  std::vector<PiecewiseCurve> curves, partners;
  for (int i = 0; i < cfg.probe_curves; ++i) {
    curves.push_back(random_trig_curve(g, rng, cfg.curve_radius, 0.0, 1.0));
    partners.push_back(random_trig_curve(g, rng, cfg.curve_radius, 0.0, 1.0));
  }
  const auto compact = sample_group_ball(g, 20, cfg.sample_radius, cfg.seed);

  auto over_curves = [&](auto&& one) {
    return [&, one](const Seminorm& q) {
      const auto reports = parallel_map(curves.size(), [&](std::size_t i) { return one(q, i); });
      ProbeReport merged = reports.front();
      for (std::size_t i = 1; i < reports.size(); ++i) merged.merge(reports[i]);
      merged.seed = cfg.seed;
      return merged;
    };
  };

  struct Named {
    std::string label;
    SeminormProbe probe;
  };
  const std::vector<Named> probes = {
      {"mu_convexity", [&](const Seminorm& q) { return mu_convexity_probe(g, p, q, spec); }},
      {"adjoint_domination",
       [&](const Seminorm& m) { return adjoint_domination_probe(g, p, m, compact, SampleSpec{50, 1, cfg.sample_radius, cfg.seed}); }},
      {"prop2", over_curves([&](const Seminorm& q, std::size_t i) {
         return prop2_bound_check(g, p, q, curves[i], cfg.stepper);
       })},
      {"two_curve", over_curves([&](const Seminorm& m, std::size_t i) {
         return two_curve_bound_check(g, p, m, curves[i], partners[i], cfg.stepper, cfg.ball_radius);
       })},
  };

  RunOutcome outcome;
  CsvWriter csv(ProbeReport::csv_header());
  for (const auto& [label, probe] : probes) {
    std::vector<ProbeReport> reports;
    const auto scale = seminorm_search(p, cfg.scale_grid, probe, &reports);
    const ProbeReport& chosen = reports.back();
    csv.raw(chosen.csv_row());
    if (!chosen.passed()) outcome.exit_code = 2;
    outcome.summary.push_back(label + ": smallest passing scale " +
                              (scale ? format_number(*scale) : std::string("not found")) +
                              (chosen.hypothesis_failures
                                   ? " (hypothesis failures: " + std::to_string(chosen.hypothesis_failures) + ")"
                                   : std::string()));
  }

  if (cfg.control) {
    // Half-strength seminorm against constant curves with ∫weak = 0.4: the
    // trajectories stay in the chart and p grows twice as fast as the bound.
    const Seminorm weak = p.scaled(0.5 * cfg.scale_grid.front());
    ProbeReport prop2_control;
    ProbeReport two_curve_control;
    for (int i = 0; i < 10; ++i) {
      const AlgebraElement x = g.random_algebra(rng, 1.0);
      const PiecewiseCurve big = constant_curve({g.id(), x.coords * (0.4 / std::max(weak(x.coords), 1e-300))}, 0.0, 1.0);
      prop2_control.merge(prop2_bound_check(g, p, weak, big, cfg.stepper));
      two_curve_control.merge(
          two_curve_bound_check(g, p, weak, zero_curve(g, 0.0, 1.0), big, cfg.stepper, cfg.ball_radius));
    }
    prop2_control.probe = "prop2_control";
    two_curve_control.probe = "two_curve_control";
    for (auto* r : {&prop2_control, &two_curve_control}) {
      r->group = g.id();
      r->p = p.id();
      r->q = weak.id();
      r->seed = cfg.seed;
      csv.raw(r->csv_row());
      outcome.summary.push_back(r->probe + ": " + std::to_string(r->violations) +
                                " violations (expected ≥ 1)");
    }
  }
  outcome.outputs.push_back(csv.write(cfg.output, "estimates.csv"));
  return outcome;
}

TrotterFamily family_of(const ExperimentConfig& cfg, const GroupPtr& group) {
  return make_trotter_family(make_group_curve(group, require_curve(cfg), 0.0, 1.0), cfg.ell);
}

RunOutcome run_trotter(const ExperimentConfig& cfg) {
  const GroupPtr group = group_of(cfg);
  const Seminorm p = cfg.seminorm.build(group->space());
  const TrotterFamily fam = family_of(cfg, group);
  std::vector<int> ns;
  for (int n : cfg.n_list) {
    if (n < fam.m) throw ConfigurationError("key 'n_list': n = " + std::to_string(n) + " below m = " + std::to_string(fam.m));
    ns.push_back(n);
  }
  const ConvergenceTable table = uniform_trotter_sweep(fam, cfg.tau_grid, ns, p, cfg.eps);

  std::string header = "group,curve,seminorm,scheme,n,sup_error,argmax_tau";
  for (double e : cfg.eps) header += ",n_eps_" + format_number(e);
  CsvWriter csv(header);
  for (const auto& row : table.rows) {
    std::vector<std::string> cells{group->id(), cfg.curve->name, p.id(), scheme_name(cfg.stepper.scheme),
                                   std::to_string(row.n), format_number(row.sup_error),
                                   format_number(row.argmax_tau)};
    for (const auto& th : table.thresholds) cells.push_back(th.n ? std::to_string(*th.n) : "none");
    csv.row(cells);
  }
  RunOutcome outcome;
  outcome.outputs.push_back(csv.write(cfg.output, "trotter.csv"));
  const double slope = loglog_slope(table.rows);
  const bool monotone = is_monotone_decreasing(table.rows, cfg.monotone_slack);
  outcome.summary.push_back("trotter: m = " + std::to_string(fam.m) + ", top-decade slope " +
                            format_number(slope, 4) + (monotone ? ", monotone" : ", NOT monotone"));
  if (!monotone || !(slope <= cfg.max_slope)) {
    outcome.exit_code = 2;
    outcome.summary.push_back("trotter: decay gate failed (max_slope " + format_number(cfg.max_slope) + ")");
  }
  return outcome;
}

RunOutcome run_convergence(const ExperimentConfig& cfg) {
  const GroupPtr group = group_of(cfg);
  const Seminorm p = cfg.seminorm.build(group->space());
  const TrotterFamily fam = family_of(cfg, group);
  std::vector<GroupPath> sequence;
  for (int n : cfg.n_list) sequence.push_back(trotter_sequence_path(fam, n));
  std::vector<double> grid(static_cast<std::size_t>(cfg.tau_grid));
  for (int i = 0; i < cfg.tau_grid; ++i) {
    grid[i] = i + 1 == cfg.tau_grid ? cfg.ell : cfg.ell * i / (cfg.tau_grid - 1);
  }
  const OneSidedSups sups = uniform_convergence_check(*group, sequence, trotter_limit_path(fam), p, grid);

  CsvWriter csv("group,curve,seminorm,n,right_sup,left_sup");
  RunOutcome outcome;
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    csv.row({group->id(), cfg.curve->name, p.id(), std::to_string(cfg.n_list[i]),
             format_number(sups.right[i]), format_number(sups.left[i])});
    if (sups.right[i] <= 1e-3 && sups.left[i] > 1e-2) {
      outcome.exit_code = 2;
      outcome.summary.push_back("convergence: one-sided gate failed at n = " + std::to_string(cfg.n_list[i]));
    }
  }
  outcome.outputs.push_back(csv.write(cfg.output, "convergence.csv"));
  outcome.summary.push_back("convergence: final right/left sups " + format_number(sups.right.back()) +
                            " / " + format_number(sups.left.back()));
  return outcome;
}

RunOutcome run_continuity(const ExperimentConfig& cfg) {
  const GroupPtr group = group_of(cfg);
  const Seminorm p = cfg.seminorm.build(group->space());
  const PiecewiseCurve phi = make_algebra_curve(*group, require_curve(cfg), 0.0, 1.0);
  const auto osc = continuity_probe(*group, phi, cfg.tau_lo, cfg.tau_hi, cfg.levels, p, cfg.stepper);
  CsvWriter csv("group,curve,seminorm,level,grid_points,oscillation");
  for (std::size_t i = 0; i < osc.size(); ++i) {
    const int level = static_cast<int>(i) + 1;
    csv.row({group->id(), cfg.curve->name, p.id(), std::to_string(level),
             std::to_string((1 << level) + 1), format_number(osc[i])});
  }
  RunOutcome outcome;
  outcome.outputs.push_back(csv.write(cfg.output, "continuity.csv"));
  outcome.summary.push_back("continuity: finest oscillation " + format_number(osc.back()));
  return outcome;
}

}  // namespace

Seminorm SeminormSpec::build(const SpaceId& space) const {
  if (kind == "frobenius") return Seminorm::frobenius(space, scale);
  if (kind == "operator") return Seminorm::operator_norm(space, scale);
  if (kind == "weighted-sup") {
    if (ladder != "polynomial" && ladder != "dyadic") {
      throw ConfigurationError("key 'seminorm.ladder': unknown ladder '" + ladder + "'");
    }
    return Seminorm::weighted_sup(space, k, scale,
                                  ladder == "dyadic" ? Ladder::dyadic : Ladder::polynomial);
  }
  throw ConfigurationError("key 'seminorm.kind': unknown seminorm '" + kind + "'");
}

const char* kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::identities:
      return "identities";
    case ExperimentKind::estimates:
      return "estimates";
    case ExperimentKind::trotter:
      return "trotter";
    case ExperimentKind::convergence:
      return "convergence";
    case ExperimentKind::continuity:
      return "continuity";
  }
  return "?";
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigurationError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kKnownKeys.contains(key)) throw ConfigurationError("unknown key '" + key + "'");
  }
  for (const char* key : {"kind", "group", "output"}) {
    if (!doc.contains(key)) throw ConfigurationError(std::string("missing key '") + key + "'");
  }
  ExperimentConfig cfg;
  cfg.kind = parse_kind(get<std::string>(doc, "kind", ""));
  cfg.group = get<std::string>(doc, "group", "");
  cfg.chart = get<std::string>(doc, "chart", cfg.chart);
  group_of(cfg);
  if (doc.contains("curve")) cfg.curve = parse_curve(doc.at("curve"), "curve");
  if (doc.contains("curve2")) cfg.curve2 = parse_curve(doc.at("curve2"), "curve2");
  if (doc.contains("seminorm")) {
    const json& s = doc.at("seminorm");
    cfg.seminorm.kind = get<std::string>(s, "kind", cfg.seminorm.kind);
    cfg.seminorm.scale = get<double>(s, "scale", cfg.seminorm.scale);
    cfg.seminorm.k = get<int>(s, "k", cfg.seminorm.k);
    cfg.seminorm.ladder = get<std::string>(s, "ladder", cfg.seminorm.ladder);
  }
  try {
    cfg.seminorm.build(group_of(cfg)->space());
  } catch (const ConfigurationError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigurationError(std::string("key 'seminorm': ") + e.what());
  }
  if (doc.contains("stepper")) {
    const json& s = doc.at("stepper");
    try {
      cfg.stepper.scheme = parse_scheme(get<std::string>(s, "scheme", scheme_name(cfg.stepper.scheme)));
    } catch (const ConfigurationError& e) {
      throw ConfigurationError(std::string("key 'stepper.scheme': ") + e.what());
    }
    cfg.stepper.steps_per_unit = get<int>(s, "steps_per_unit", cfg.stepper.steps_per_unit);
    cfg.stepper.breakpoint_refinement =
        get<bool>(s, "breakpoint_refinement", cfg.stepper.breakpoint_refinement);
    if (cfg.stepper.steps_per_unit < 1) throw ConfigurationError("key 'stepper.steps_per_unit' must be ≥ 1");
  }
  cfg.output = get<std::string>(doc, "output", "");
  cfg.seed = get<std::uint64_t>(doc, "seed", cfg.seed);
  cfg.ell = get<double>(doc, "ell", cfg.ell);
  cfg.tau_grid = get<int>(doc, "tau_grid", cfg.tau_grid);
  cfg.n_list = get<std::vector<int>>(doc, "n_list", cfg.n_list);
  cfg.eps = get<std::vector<double>>(doc, "eps", cfg.eps);
  cfg.max_slope = get<double>(doc, "max_slope", cfg.max_slope);
  cfg.monotone_slack = get<double>(doc, "monotone_slack", cfg.monotone_slack);
  cfg.random_curves = get<int>(doc, "random_curves", cfg.random_curves);
  cfg.curve_radius = get<double>(doc, "curve_radius", cfg.curve_radius);
  if (doc.contains("residual_tol")) cfg.residual_tol = get<double>(doc, "residual_tol", 0.0);
  cfg.scale_grid = get<std::vector<double>>(doc, "scale_grid", cfg.scale_grid);
  cfg.samples = get<std::size_t>(doc, "samples", cfg.samples);
  cfg.sample_radius = get<double>(doc, "sample_radius", cfg.sample_radius);
  cfg.probe_curves = get<int>(doc, "probe_curves", cfg.probe_curves);
  cfg.ball_radius = get<double>(doc, "ball_radius", cfg.ball_radius);
  cfg.control = get<bool>(doc, "control", cfg.control);
  cfg.levels = get<int>(doc, "levels", cfg.levels);
  cfg.tau_lo = get<double>(doc, "tau_lo", cfg.tau_lo);
  cfg.tau_hi = get<double>(doc, "tau_hi", cfg.tau_hi);

  if (cfg.output.empty()) throw ConfigurationError("key 'output' must be a non-empty path");
  if (cfg.n_list.empty()) throw ConfigurationError("key 'n_list' must be nonempty");
  if (cfg.eps.empty()) throw ConfigurationError("key 'eps' must be nonempty");
  if (cfg.scale_grid.empty() || !std::is_sorted(cfg.scale_grid.begin(), cfg.scale_grid.end())) {
    throw ConfigurationError("key 'scale_grid' must be nonempty and ascending");
  }
  if (cfg.tau_grid < 2) throw ConfigurationError("key 'tau_grid' must be ≥ 2");
  if (cfg.probe_curves < 1) throw ConfigurationError("key 'probe_curves' must be ≥ 1");
  if (cfg.random_curves < 0) throw ConfigurationError("key 'random_curves' must be ≥ 0");
  if (cfg.levels < 1) throw ConfigurationError("key 'levels' must be ≥ 1");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigurationError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json doc = {
      {"kind", kind_name(cfg.kind)},
      {"group", cfg.group},
      {"chart", cfg.chart},
      {"seminorm",
       {{"kind", cfg.seminorm.kind}, {"scale", cfg.seminorm.scale}, {"k", cfg.seminorm.k},
        {"ladder", cfg.seminorm.ladder}}},
      {"stepper",
       {{"scheme", scheme_name(cfg.stepper.scheme)},
        {"steps_per_unit", cfg.stepper.steps_per_unit},
        {"breakpoint_refinement", cfg.stepper.breakpoint_refinement}}},
      {"output", cfg.output.string()},
      {"seed", cfg.seed},
      {"ell", cfg.ell},
      {"tau_grid", cfg.tau_grid},
      {"n_list", cfg.n_list},
      {"eps", cfg.eps},
      {"max_slope", cfg.max_slope},
      {"monotone_slack", cfg.monotone_slack},
      {"random_curves", cfg.random_curves},
      {"curve_radius", cfg.curve_radius},
      {"scale_grid", cfg.scale_grid},
      {"samples", cfg.samples},
      {"sample_radius", cfg.sample_radius},
      {"probe_curves", cfg.probe_curves},
      {"ball_radius", cfg.ball_radius},
      {"control", cfg.control},
      {"levels", cfg.levels},
      {"tau_lo", cfg.tau_lo},
      {"tau_hi", cfg.tau_hi},
  };
  if (cfg.curve) doc["curve"] = curve_json(*cfg.curve);
  if (cfg.curve2) doc["curve2"] = curve_json(*cfg.curve2);
  if (cfg.residual_tol) doc["residual_tol"] = *cfg.residual_tol;
  return doc;
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output, ec);
  if (ec) throw ConfigurationError("key 'output': cannot create " + cfg.output.string());
  switch (cfg.kind) {
    case ExperimentKind::identities:
      return run_identities(cfg);
    case ExperimentKind::estimates:
      return run_estimates(cfg);
    case ExperimentKind::trotter:
      return run_trotter(cfg);
    case ExperimentKind::convergence:
      return run_convergence(cfg);
    case ExperimentKind::continuity:
      return run_continuity(cfg);
  }
  throw ConfigurationError("unhandled experiment kind");
}

int run(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  RunOutcome outcome;
  try {
    cfg = load_config(config_path);
    outcome = run_experiment(cfg);
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  json manifest = {{"version", kVersion},
                   {"config", to_json(cfg)},
                   {"exit_code", outcome.exit_code},
                   {"wall_time_seconds", wall}};
  for (const auto& path : outcome.outputs) manifest["outputs"].push_back(path.filename().string());
  std::ofstream(cfg.output / "manifest.json") << manifest.dump(2) << '\n';
  for (const auto& line : outcome.summary) out << line << '\n';
  for (const auto& path : outcome.outputs) out << "wrote " << path.string() << '\n';
  return outcome.exit_code;
}

std::string list_registry() {
  std::ostringstream out;
  auto section = [&](const std::string& title, std::vector<std::string> items) {
    std::sort(items.begin(), items.end());
    out << title << ":\n";
    for (const auto& item : items) out << "  " << item << '\n';
  };
  section("groups", registered_group_ids());
  section("curves", registered_curve_names());
  section("seminorms", {"frobenius", "operator", "weighted-sup"});
  section("schemes", {"left-euler", "midpoint"});
  section("kinds", {"continuity", "convergence", "estimates", "identities", "trotter"});
  section("charts", {"cayley", "exponential"});
  return out.str();
}

}  // namespace prodint
