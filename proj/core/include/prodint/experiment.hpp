#pragma once

// Batch experiment runner behind the `prodint` command line tool.
//
// A run reads one JSON config, writes one CSV table per experiment kind plus
// a manifest.json (resolved config, library version, wall time) into the
// output directory, and returns an exit code: 0 success, 1 configuration
// error, 2 a probe violation or a failed convergence gate.

#include "prodint/curves.hpp"
#include "prodint/evolution.hpp"
#include "prodint/group.hpp"
#include "prodint/model_space.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace prodint {

enum class ExperimentKind { identities, estimates, trotter, convergence, continuity };

struct SeminormSpec {
  std::string kind = "frobenius";  // frobenius | operator | weighted-sup
  double scale = 1.0;
  int k = 0;
  std::string ladder = "polynomial";  // polynomial | dyadic

  Seminorm build(const SpaceId& space) const;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::trotter;
  std::string group;
  std::string chart = "exponential";
  std::optional<CurveSpec> curve;
  std::optional<CurveSpec> curve2;
  SeminormSpec seminorm;
  StepperConfig stepper;
  std::filesystem::path output;
  std::uint64_t seed = 42;

  // trotter / convergence
  double ell = 2.0;
  int tau_grid = 41;
  std::vector<int> n_list{16, 32, 64, 128, 256, 512, 1024};
  std::vector<double> eps{1e-1, 1e-2, 1e-3};
  double max_slope = -0.8;
  double monotone_slack = 0.1;

  // identities
  int random_curves = 4;
  double curve_radius = 1.0;
  std::optional<double> residual_tol;

  // estimates
  std::vector<double> scale_grid{1.0, 1.25, 1.5, 2.0};
  std::size_t samples = 10000;
  double sample_radius = 0.5;
  int probe_curves = 100;
  double ball_radius = 2.0;
  bool control = true;

  // continuity
  int levels = 5;
  double tau_lo = 0.0;
  double tau_hi = 2.0;
};

const char* kind_name(ExperimentKind kind);

// Throws ConfigurationError naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

struct RunOutcome {
  int exit_code = 0;
  std::vector<std::filesystem::path> outputs;
  std::vector<std::string> summary;
};

// Runs a parsed config; configuration problems surface as ConfigurationError.
RunOutcome run_experiment(const ExperimentConfig& cfg);

// Full `prodint run` behaviour: load, run, write the manifest, report.
int run(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

// Alphabetical listing of groups, curves, seminorms, schemes and kinds.
std::string list_registry();

// Runs the built-in trivial-example suite; 0 when every check passes.
int selftest(std::ostream& out);

}  // namespace prodint
