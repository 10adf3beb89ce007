#pragma once
// Experiment presets: parameterized runs that reproduce the model's provable
// qualitative behavior (conservation, relaxation, monotone/exponential decay,
// spectral accuracy in the chaos order, hydrodynamic closure) and grade
// themselves. Each preset writes series CSVs, a summary.json echoing the
// configuration, and SVG plots under <out_root>/<preset>_<timestamp>/.

#include <string>
#include <vector>

#include "nsvfp/config_file.hpp"

namespace nsvfp {

struct ExperimentPlan {
  std::string preset;
  std::string out_root = "runs";
  int threads = 1;          // worker pool width for independent sweep points
  bool emit_plots = true;
  bool fixed_dirname = false;  // tests: <preset>_000000 instead of a timestamp
  RunConfig config;            // start from preset_config(preset), then override
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured quantity the check gates on
  double threshold = 0.0;  // pass bound on value (direction given by `detail`)
  std::string detail;
};

struct ExperimentSummary {
  std::string preset;
  std::string out_dir;
  bool pass = false;  // conjunction of all checks
  std::vector<CheckResult> checks;
};

std::vector<std::string> preset_names();
// Defaults for a named preset; throws std::invalid_argument on unknown names.
RunConfig preset_config(const std::string& preset);

ExperimentSummary run_experiment(const ExperimentPlan& plan);

}  // namespace nsvfp
