#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fcomp/dictionary.hpp"
#include "fcomp/grid.hpp"
#include "fcomp/radar.hpp"
#include "fcomp/signal_model.hpp"
#include "fcomp/solvers.hpp"

namespace fcomp {

struct Point2 {
  double r = 0.0;
  double v = 0.0;
};

/// Normalized error sqrt(((r^ - r)/rho_r)^2 + ((v^ - v)/rho_v)^2).
double error_ek(const RadarConfig& cfg, const Point2& truth, const Point2& estimate);

/// A target is missed when its error exceeds this value.
inline constexpr double kMissThreshold = 1.0;

/// One-to-one association minimizing (miss count, total error)
/// lexicographically. Returns perm with estimate perm[k] assigned to truth k.
std::vector<int> associate(const RadarConfig& cfg, std::span<const Point2> truths,
                           std::span<const Point2> estimates);

struct TrialMetrics {
  std::vector<double> per_target_error;  // E_k in truth order
  std::vector<bool> miss_flags;
  double miss_rate = 0.0;
  std::optional<double> avg_hit_error;  // empty when every target was missed
  double solve_time = 0.0;

  /// Equality of every field but solve_time.
  bool same_outcome(const TrialMetrics& other) const;
};

TrialMetrics compute_metrics(const RadarConfig& cfg, std::span<const Point2> truths,
                             std::span<const Point2> estimates);

/// K targets with alpha ~ CN(0, 1), r ~ U(0, max_range], v ~ U(-max_speed, max_speed].
struct SceneDistribution {
  int target_count = 5;
  std::uint64_t seed = 0;

  Scene sample(const RadarConfig& cfg) const;
};

/// Stateless 64-bit mixer used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Radar configuration and grid shared by every trial at one sweep point.
struct SweepPoint {
  RadarConfig cfg;
  Index range_bins = 16;
  Index speed_bins = 16;
  int nstar = 0;  // reporting label (N* = Nr = Nv), 0 when not square
};

/// Dictionaries of one sweep point, built once and shared read-only.
class TrialContext {
 public:
  TrialContext(const SweepPoint& point, Normalization normalization, bool need_exact,
               bool need_factorized);

  const RadarConfig& config() const { return point_.cfg; }
  const SweepPoint& point() const { return point_; }
  const ParamGrid& grid() const { return grid_; }
  const VectorDictionary& exact() const;
  const FactorizedDictionary& factorized() const;

 private:
  SweepPoint point_;
  ParamGrid grid_;
  std::optional<VectorDictionary> exact_;
  std::optional<FactorizedDictionary> factorized_;
};

struct TrialSettings {
  int target_count = 5;
  SynthesisModel model = SynthesisModel::exact;
  double noise_sigma = 0.0;
  SolverOptions solver;  // target_count is overwritten with `target_count`
};

/// Sample a scene from trial_seed, synthesize, solve (timed), score.
TrialMetrics run_trial(const TrialContext& ctx, const TrialSettings& settings,
                       Algorithm algorithm, std::uint64_t trial_seed);

/// Convenience overload building the dictionaries for a single trial.
TrialMetrics run_trial(const SweepPoint& point, Normalization normalization,
                       const TrialSettings& settings, Algorithm algorithm,
                       std::uint64_t trial_seed);

struct AggregateStats {
  int trials = 0;
  int ahe_trials = 0;  // trials with at least one hit
  double mean_mr = 0.0;
  double se_mr = 0.0;
  std::optional<double> mean_ahe;
  std::optional<double> se_ahe;
  double mean_time = 0.0;
  double se_time = 0.0;
};

struct SweepSpec {
  std::vector<SweepPoint> points;
  std::vector<Algorithm> algorithms;
  Normalization normalization = Normalization::grid_step;
  TrialSettings settings;
  int trials = 200;
  std::uint64_t base_seed = 1;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
};

/// Results keyed by (algorithm, point index).
struct AggregateResult {
  std::map<std::pair<Algorithm, std::size_t>, AggregateStats> stats;

  const AggregateStats& at(Algorithm a, std::size_t point) const {
    return stats.at({a, point});
  }
};

/// Aggregate per-trial metrics. Trials are combined in the given order, so
/// results do not depend on how trials were scheduled.
AggregateStats aggregate(std::span<const TrialMetrics> trials);

/// Seed of trial `trial` at sweep point `point`.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t point, int trial);

AggregateResult run_sweep(const SweepSpec& spec);

}  // namespace fcomp
