#pragma once

// Independent reference computations shared by the unit tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fcomp/dictionary.hpp"
#include "fcomp/evaluation.hpp"
#include "fcomp/radar.hpp"

namespace oracle {

using fcomp::Complex;
using fcomp::Index;
using fcomp::RadarConfig;

// Phase of the exact atom at (ms, mc), written out term by term in long double.
inline long double atom_phase(const RadarConfig& cfg, double r, double v, int ms, int mc) {
  const long double pi = std::numbers::pi_v<long double>;
  const long double c = fcomp::kSpeedOfLight;
  const long double B = cfg.bandwidth, f0 = cfg.f0, Ts = cfg.ts, Tc = cfg.tc;
  const long double Ms = cfg.ms_count;
  const long double R = r, V = v;
  const long double gamma = f0 * Ms * Ts / B;
  const long double t = mc * Tc + ms * Ts;
  const long double psi = -2 * pi * (B / Ms) * (2 * (R + gamma * V) / c) * ms;
  const long double phi = -2 * pi * f0 * Tc * (2 * V / c) * mc;
  const long double theta1 = -(2 * pi / c) * (B / Ms) * (R / (c * Ts) + ms) * V * t;
  const long double theta2 = pi * (B / (Ms * Ts)) * (V * V / (c * c)) * t * t;
  return psi + phi + theta1 + theta2;
}

inline Eigen::VectorXcd atom(const RadarConfig& cfg, double r, double v) {
  Eigen::VectorXcd a(cfg.sample_count());
  for (int mc = 0; mc < cfg.mc_count; ++mc)
    for (int ms = 0; ms < cfg.ms_count; ++ms) {
      const long double p = atom_phase(cfg, r, v, ms, mc);
      a[mc * cfg.ms_count + ms] = Complex(static_cast<double>(std::cos(p)), static_cast<double>(std::sin(p)));
    }
  return a;
}

inline double rel_error(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

inline double rel_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

inline Eigen::VectorXcd random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd x(n);
  for (Index i = 0; i < n; ++i) x[i] = Complex(g(rng), g(rng));
  return x;
}

inline Eigen::MatrixXcd random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  Eigen::VectorXcd x = random_vector(rows * cols, rng);
  return Eigen::Map<Eigen::MatrixXcd>(x.data(), rows, cols);
}

// Columns of every picked node's first `count` interpolants, side by side.
inline Eigen::MatrixXcd stacked(const fcomp::VectorDictionary& dict, const std::vector<Index>& picks, int count) {
  Eigen::MatrixXcd a(dict.signal_size(), static_cast<Index>(picks.size()) * count);
  for (std::size_t k = 0; k < picks.size(); ++k)
    a.middleCols(static_cast<Index>(k) * count, count) = dict.interpolants(picks[k]).leftCols(count);
  return a;
}

// Dense least squares through a pivoted QR of the tall system.
inline Eigen::VectorXcd dense_ls(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y) {
  return a.colPivHouseholderQr().solve(y);
}

struct AssignmentScore {
  int misses = 0;
  double total = 0.0;
};

inline AssignmentScore score(const RadarConfig& cfg, const std::vector<fcomp::Point2>& truths,
                             const std::vector<fcomp::Point2>& estimates, const std::vector<int>& perm) {
  AssignmentScore s;
  for (std::size_t k = 0; k < truths.size(); ++k) {
    const double e = fcomp::error_ek(cfg, truths[k], estimates[static_cast<std::size_t>(perm[k])]);
    s.misses += e > fcomp::kMissThreshold;
    s.total += e;
  }
  return s;
}

// Lexicographic (misses, total error) minimum over all permutations.
inline AssignmentScore best_assignment(const RadarConfig& cfg, const std::vector<fcomp::Point2>& truths,
                                       const std::vector<fcomp::Point2>& estimates) {
  std::vector<int> perm(truths.size());
  std::iota(perm.begin(), perm.end(), 0);
  AssignmentScore best{static_cast<int>(truths.size()) + 1, 0.0};
  do {
    const AssignmentScore s = score(cfg, truths, estimates, perm);
    if (s.misses < best.misses || (s.misses == best.misses && s.total < best.total)) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace oracle
