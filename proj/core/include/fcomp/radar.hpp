#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace fcomp {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Speed of light in vacuum (m/s).
inline constexpr double kSpeedOfLight = 299'792'458.0;

/// FMCW chirp and sampling parameters.
///
/// Samples are acquired `ms_count` per chirp at period `ts` over `mc_count`
/// chirps of period `tc`; `tc` may exceed `ms_count * ts` (time gaps between
/// chirps). All derived constants are computed on demand.
struct RadarConfig {
  double f0 = 24e9;     // carrier start frequency (Hz)
  double bandwidth = 200e6;  // sweep bandwidth (Hz)
  double ts = 5e-6;     // sample period (s)
  double tc = 80e-6;    // chirp period (s)
  int ms_count = 16;    // samples per chirp
  int mc_count = 16;    // number of chirps

  /// Reference K-band system with `tc = ms * ts`.
  static RadarConfig k_band(int ms, int mc);

  /// Throws ValidationError when an invariant does not hold.
  void validate() const;

  Index sample_count() const { return Index{ms_count} * Index{mc_count}; }

  /// Range/speed coupling of the first sub-atom, r' = r + gamma * v (s).
  double gamma() const { return f0 * ms_count * ts / bandwidth; }
  double range_resolution() const { return kSpeedOfLight / (2.0 * bandwidth); }
  double speed_resolution() const {
    return kSpeedOfLight / (4.0 * f0 * mc_count * tc);
  }
  /// Range domain is (0, max_range()].
  double max_range() const { return ms_count * kSpeedOfLight / (2.0 * bandwidth); }
  /// Speed domain is (-max_speed(), max_speed()].
  double max_speed() const { return kSpeedOfLight / (4.0 * f0 * tc); }

  bool range_in_domain(double r) const { return r > 0.0 && r <= max_range(); }
  bool speed_in_domain(double v) const {
    return v > -max_speed() && v <= max_speed();
  }

  bool operator==(const RadarConfig&) const = default;
};

struct Target {
  double r = 0.0;  // range (m)
  double v = 0.0;  // radial speed (m/s)
  Complex alpha{1.0, 0.0};
};

using Scene = std::vector<Target>;

/// Pairs of scene indices (i < j) sharing the same (r, v).
using DuplicateTargets = std::vector<std::pair<std::size_t, std::size_t>>;

/// Throws TargetDomainError naming the first target outside the domain.
/// Duplicate (r, v) pairs are legal; they are returned so callers can flag them.
DuplicateTargets validate_scene(const RadarConfig& cfg, const Scene& scene);

/// Complex sample vector of length Ms*Mc with a column-major Ms x Mc view:
/// matrix()(ms, mc) == samples()[mc * Ms + ms].
class Measurement {
 public:
  Measurement(Index ms, Index mc);
  Measurement(Index ms, Index mc, Eigen::VectorXcd samples);

  static Measurement from_matrix(const Eigen::MatrixXcd& y);

  Index ms() const { return ms_; }
  Index mc() const { return mc_; }
  Index size() const { return samples_.size(); }

  const Eigen::VectorXcd& samples() const { return samples_; }
  Eigen::VectorXcd& samples() { return samples_; }

  Eigen::Map<const Eigen::MatrixXcd> matrix() const {
    return {samples_.data(), ms_, mc_};
  }
  Eigen::Map<Eigen::MatrixXcd> matrix() { return {samples_.data(), ms_, mc_}; }

 private:
  Index ms_;
  Index mc_;
  Eigen::VectorXcd samples_;
};

}  // namespace fcomp
