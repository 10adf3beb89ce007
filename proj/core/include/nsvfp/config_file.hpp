#pragma once
// Flat key=value run configuration ('#' starts a comment; keys documented in
// the README). Unknown keys are an error: silent typos in a sweep config are
// worse than a hard stop.

#include <string>
#include <vector>

#include "nsvfp/initial.hpp"
#include "nsvfp/params.hpp"

namespace nsvfp {

struct RunConfig {
  ModelParams params;
  SpectralGrid grid;
  InitialSpec initial;

  double t_end = 10.0;
  double dt = 0.0;        // 0: pick default_dt(t_end)
  int s_order = 2;        // Sobolev order of every reported norm
  int sample_stride = 0;  // steps between CSV rows; 0: preset default
  int gpc_order = 5;      // K
  int gpc_quad = 0;       // Q; 0: basis default 2K
  std::string measure = "uniform";  // uniform | chebyshev

  std::vector<double> eps_list;  // sweep overrides; empty: preset default
  std::vector<int> k_list;
};

// Parses the file and applies it on top of `base`. Throws
// std::invalid_argument naming every unknown key or malformed value.
RunConfig load_run_config(const std::string& path, RunConfig base = RunConfig{});

// Applies already-split key/value pairs (the file loader and CLI overrides
// both funnel through here).
void apply_config_entry(RunConfig& rc, const std::string& key, const std::string& value);

}  // namespace nsvfp
