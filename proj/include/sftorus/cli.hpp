#pragma once

// Command-line driver: configuration, model catalog and the subcommands
// validate, sdi, cycles, sweep, basin and knots.

#include <sftorus/integrate.hpp>
#include <sftorus/model.hpp>
#include <sftorus/report.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sftorus::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kAssumptionFailure = 3,
  kDetectionFailure = 4,
};

struct ExperimentConfig {
  std::string command;
  /// diagonal, diagonal-cosine, sine-link, odd-contact, graph or trig.
  std::string model = "diagonal";
  int m = 1;
  int k = 1;
  int l = 1;
  std::string slow = "unit";
  std::string phi = "q:1,s1:1";
  /// JSON file with trigonometric coefficient matrices (model "trig").
  std::string model_file;
  std::vector<double> eps{0.05};
  int grid = 20;
  bool relaxed = false;
  std::uint64_t seed = 0;
  /// Multi-seed restarts per detected cycle (cycles command).
  int restarts = 0;
  std::string out = "out";
  std::vector<std::string> formats{"csv", "json"};
  SolverOptions solver{1e-11, 1e-13, 5.0, 1e7};
  int workers = 0;

  bool wants(const std::string& format) const;
};

/// Overlays the keys present in a JSON document onto cfg.
void apply_json(ExperimentConfig& cfg, const json& doc);
json to_json(const ExperimentConfig& cfg);

/// Throws Error(InvalidArgument) on out-of-range values.
void validate_config(const ExperimentConfig& cfg);

Model build_model(const ExperimentConfig& cfg);

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sftorus::cli
