#include "fcomp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "fcomp/assignment.hpp"
#include "fcomp/errors.hpp"

namespace fcomp {

double error_ek(const RadarConfig& cfg, const Point2& truth, const Point2& estimate) {
  return std::hypot((estimate.r - truth.r) / cfg.range_resolution(),
                    (estimate.v - truth.v) / cfg.speed_resolution());
}

std::vector<int> associate(const RadarConfig& cfg, std::span<const Point2> truths,
                           std::span<const Point2> estimates) {
  if (truths.size() != estimates.size())
    throw ValidationError("associate: truth and estimate counts differ");
  const Index k = static_cast<Index>(truths.size());
  Eigen::MatrixXd error(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      error(i, j) = error_ek(cfg, truths[static_cast<std::size_t>(i)], estimates[static_cast<std::size_t>(j)]);
  if (k == 0) return {};
  if (!error.allFinite()) throw ValidationError("associate: non-finite estimate");

  // A miss outweighs any total error, making the objective lexicographic.
  const double miss_cost = static_cast<double>(k) * error.maxCoeff() + 1.0;
  Eigen::MatrixXd cost = error;
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      if (error(i, j) > kMissThreshold) cost(i, j) += miss_cost;
  return solve_assignment(cost);
}

bool TrialMetrics::same_outcome(const TrialMetrics& other) const {
  return per_target_error == other.per_target_error && miss_flags == other.miss_flags &&
         miss_rate == other.miss_rate && avg_hit_error == other.avg_hit_error;
}

TrialMetrics compute_metrics(const RadarConfig& cfg, std::span<const Point2> truths,
                             std::span<const Point2> estimates) {
  const std::vector<int> perm = associate(cfg, truths, estimates);
  TrialMetrics m;
  double hit_sum = 0.0;
  int hits = 0;
  for (std::size_t k = 0; k < truths.size(); ++k) {
    const double e = error_ek(cfg, truths[k], estimates[static_cast<std::size_t>(perm[k])]);
    const bool miss = e > kMissThreshold;
    m.per_target_error.push_back(e);
    m.miss_flags.push_back(miss);
    if (!miss) {
      hit_sum += e;
      ++hits;
    }
  }
  if (!truths.empty())
    m.miss_rate = static_cast<double>(truths.size() - static_cast<std::size_t>(hits)) /
                  static_cast<double>(truths.size());
  if (hits > 0) m.avg_hit_error = hit_sum / hits;
  return m;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a combined state.
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Scene SceneDistribution::sample(const RadarConfig& cfg) const {
  if (target_count < 0) throw ValidationError("scene distribution: K must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0 / std::numbers::sqrt2);
  Scene scene;
  for (int k = 0; k < target_count; ++k) {
    Target t;
    // 1 - U[0, 1) lies in (0, 1], matching the half-open domains.
    t.r = cfg.max_range() * (1.0 - unit(rng));
    t.v = -cfg.max_speed() + 2.0 * cfg.max_speed() * (1.0 - unit(rng));
    const double re = normal(rng);
    const double im = normal(rng);
    t.alpha = Complex(re, im);
    scene.push_back(t);
  }
  return scene;
}

TrialContext::TrialContext(const SweepPoint& point, Normalization normalization, bool need_exact,
                           bool need_factorized)
    : point_(point), grid_(build_grid(point.cfg, point.range_bins, point.speed_bins, normalization)) {
  if (need_exact) exact_.emplace(VectorDictionary::exact(point_.cfg, grid_));
  if (need_factorized) factorized_.emplace(point_.cfg, grid_);
}

const VectorDictionary& TrialContext::exact() const {
  if (!exact_) throw ValidationError("trial context: exact dictionary was not built");
  return *exact_;
}

const FactorizedDictionary& TrialContext::factorized() const {
  if (!factorized_) throw ValidationError("trial context: factorized dictionary was not built");
  return *factorized_;
}

TrialMetrics run_trial(const TrialContext& ctx, const TrialSettings& settings, Algorithm algorithm,
                       std::uint64_t trial_seed) {
  const RadarConfig& cfg = ctx.config();
  const Scene scene = SceneDistribution{settings.target_count, trial_seed}.sample(cfg);
  const Measurement y =
      synthesize(cfg, scene, settings.model, settings.noise_sigma, mix_seed(trial_seed, 0x6e6f697365ULL));

  SolverOptions options = settings.solver;
  options.target_count = settings.target_count;
  const SolverReport report = is_factorized(algorithm) ? solve(y, ctx.factorized(), options, algorithm)
                                                       : solve(y, ctx.exact(), options, algorithm);

  std::vector<Point2> truths, estimates;
  for (const Target& t : scene) truths.push_back({t.r, t.v});
  for (const Estimate& e : report.estimates) estimates.push_back({e.r_hat, e.v_hat});
  TrialMetrics m = compute_metrics(cfg, truths, estimates);
  m.solve_time = report.wall_time;
  return m;
}

TrialMetrics run_trial(const SweepPoint& point, Normalization normalization, const TrialSettings& settings,
                       Algorithm algorithm, std::uint64_t trial_seed) {
  TrialContext ctx(point, normalization, !is_factorized(algorithm), is_factorized(algorithm));
  return run_trial(ctx, settings, algorithm, trial_seed);
}

namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& values) {
  MeanSe out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double x : values) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

}  // namespace

AggregateStats aggregate(std::span<const TrialMetrics> trials) {
  std::vector<double> mr, ahe, time;
  for (const TrialMetrics& t : trials) {
    mr.push_back(t.miss_rate);
    time.push_back(t.solve_time);
    if (t.avg_hit_error) ahe.push_back(*t.avg_hit_error);
  }
  AggregateStats s;
  s.trials = static_cast<int>(trials.size());
  s.ahe_trials = static_cast<int>(ahe.size());
  const MeanSe m = mean_and_se(mr), t = mean_and_se(time);
  s.mean_mr = m.mean;
  s.se_mr = m.se;
  s.mean_time = t.mean;
  s.se_time = t.se;
  if (!ahe.empty()) {
    const MeanSe a = mean_and_se(ahe);
    s.mean_ahe = a.mean;
    s.se_ahe = a.se;
  }
  return s;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t point, int trial) {
  return mix_seed(mix_seed(base_seed, point), static_cast<std::uint64_t>(trial));
}

void SweepSpec::validate() const {
  if (points.empty()) throw ValidationError("sweep: no sweep points");
  if (algorithms.empty()) throw ValidationError("sweep: no algorithms");
  if (trials < 1) throw ValidationError("sweep: trials must be at least 1");
  if (threads < 0) throw ValidationError("sweep: threads must be non-negative");
  if (settings.target_count < 1) throw ValidationError("sweep: K must be at least 1");
  SolverOptions probe = settings.solver;
  probe.target_count = settings.target_count;
  probe.validate();
  for (const SweepPoint& p : points) {
    p.cfg.validate();
    if (p.range_bins < 2 || p.speed_bins < 2) throw ValidationError("sweep: Nr and Nv must be at least 2");
    const int per_pick = std::any_of(algorithms.begin(), algorithms.end(), is_continuous) ? kTaylorInterpolants : 1;
    if (Index{settings.target_count} * per_pick > p.cfg.sample_count())
      throw ValidationError("sweep: K * I exceeds the number of samples");
    if (settings.target_count > p.range_bins * p.speed_bins)
      throw ValidationError("sweep: K exceeds the number of grid nodes");
  }
}

AggregateResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const bool need_exact = std::any_of(spec.algorithms.begin(), spec.algorithms.end(),
                                      [](Algorithm a) { return !is_factorized(a); });
  const bool need_factorized = std::any_of(spec.algorithms.begin(), spec.algorithms.end(), is_factorized);
  unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1U, static_cast<unsigned>(spec.trials));

  AggregateResult result;
  for (std::size_t p = 0; p < spec.points.size(); ++p) {
    const TrialContext ctx(spec.points[p], spec.normalization, need_exact, need_factorized);
    for (Algorithm algorithm : spec.algorithms) {
      // Each trial writes its own slot; aggregation runs in trial order afterwards.
      std::vector<TrialMetrics> metrics(static_cast<std::size_t>(spec.trials));
      std::vector<std::exception_ptr> failures(workers);
      auto work = [&](unsigned worker) {
        try {
          for (int t = static_cast<int>(worker); t < spec.trials; t += static_cast<int>(workers))
            metrics[static_cast<std::size_t>(t)] =
                run_trial(ctx, spec.settings, algorithm, trial_seed(spec.base_seed, p, t));
        } catch (...) {
          failures[worker] = std::current_exception();
        }
      };
      if (workers == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (std::thread& th : pool) th.join();
      }
      for (const std::exception_ptr& failure : failures)
        if (failure) std::rethrow_exception(failure);
      result.stats[{algorithm, p}] = aggregate(metrics);
    }
  }
  return result;
}

}  // namespace fcomp
