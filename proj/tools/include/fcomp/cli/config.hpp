#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "fcomp/grid.hpp"
#include "fcomp/radar.hpp"
#include "fcomp/signal_model.hpp"
#include "fcomp/solvers.hpp"

namespace fcomp::cli {

/// Flat `key = value` experiment description. `#` starts a comment; `target`
/// may repeat (one target per line, "r, v, alpha_re, alpha_im"); every other
/// key may appear once. Unknown keys are rejected.
///
///   radar:     f0, B, Ts, Tc (default Ms*Ts), Ms, Mc
///   grid:      Nr, Nv, normalization (grid_step | resolution)
///   solver:    K, algorithm, index_selection (simplified | full),
///              correction_max_iters, correction_tolerance, clamp_deviations
///   synthesis: model (exact | factorized), noise_sigma, seed, target
///   sweep:     Nstar (comma list), algorithms (comma list), trials, threads
///   output:    out
struct ExperimentConfig {
  RadarConfig radar = RadarConfig::k_band(16, 16);
  Index range_bins = 32;
  Index speed_bins = 32;
  Normalization normalization = Normalization::grid_step;
  SolverOptions solver;
  bool target_count_set = false;
  std::optional<Algorithm> algorithm;
  SynthesisModel model = SynthesisModel::exact;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  Scene scene;
  std::vector<int> nstar;
  std::vector<Algorithm> algorithms;
  int trials = 200;
  int threads = 0;
  std::optional<std::string> out;

  /// Number of targets a solver extracts: K if given, else the scene size.
  int target_count() const;

  /// Checks every module precondition; throws ValidationError.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

std::string_view to_string(Normalization n);
std::string_view to_string(SynthesisModel m);
std::string_view to_string(IndexSelection s);

}  // namespace fcomp::cli
