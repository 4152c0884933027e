#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mcflab/entropy.hpp"
#include "mcflab/flow.hpp"
#include "mcflab/meshgen.hpp"

namespace mcflab {

// Fully-resolved run description. Round-trips losslessly through JSON; every
// run echoes it into the manifest next to the outputs.
struct ExperimentConfig {
  std::string command;  // gen|verify|entropy|flow|audit|plot

  // surface source: generated, read from disk, or analytic catalog
  MeshGenSpec gen;
  std::string input;     // mesh path, when given
  std::string analytic;  // "cylinder:n,k" | "plane" | "grim_reaper" | "bowl"
  std::array<double, 3> plane_normal{0, 0, 1};
  double plane_offset = 0;
  int grid = 64;  // analytic sample grid (per axis)

  // operation parameters
  std::string identity = "LH";     // LH|LVn|simons|lfrak_w|lfrak_A2
  std::string residual = "";       // shrinker|translator (verify)
  std::string audit_kind = "thm1"; // thm1|graph|translator|cutoff|scan|growth
  double R = 8.0;
  double delta = 0.5;
  double rho = 2.0;
  std::array<double, 3> V{0, 0, 1};
  std::array<double, 3> x0{0, 0, 0};
  std::vector<double> R_sweep;
  double user_C = 0;  // 0: not supplied
  double collar = 1.0;
  double h_floor = 1e-6;
  bool experimental = false;

  FlowConfig flow;
  EntropySearchConfig search;

  // plot
  std::string plot_kind = "series";  // refine|profile|sweep|series
  std::vector<std::string> plot_inputs;

  // io
  std::string output;        // gen: mesh path; plot: svg path/prefix
  std::string outdir;        // reports directory (flag > MCFLAB_OUT > ".")
  std::string formats = "json,csv";
  int mesh_precision = 17;
  bool strict = false;

  std::string to_json_string() const;
  static ExperimentConfig from_json_string(const std::string& text);
};

// manifest: config echo, output list, tool version and a timestamp (the only
// nondeterministic field, quarantined here on purpose)
std::string manifest_json(const ExperimentConfig& config,
                          const std::vector<std::string>& outputs,
                          const std::string& timestamp);

}  // namespace mcflab
