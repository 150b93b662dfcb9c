#include "fcomp/radar.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "fcomp/errors.hpp"

namespace fcomp {

RadarConfig RadarConfig::k_band(int ms, int mc) {
  RadarConfig cfg;
  cfg.ms_count = ms;
  cfg.mc_count = mc;
  cfg.tc = ms * cfg.ts;
  return cfg;
}

void RadarConfig::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("radar config: " + what); };
  if (!(std::isfinite(f0) && f0 > 0.0)) fail("f0 must be positive");
  if (!(std::isfinite(bandwidth) && bandwidth > 0.0)) fail("bandwidth must be positive");
  if (!(std::isfinite(ts) && ts > 0.0)) fail("Ts must be positive");
  if (ms_count < 1) fail("Ms must be at least 1");
  if (mc_count < 1) fail("Mc must be at least 1");
  // Relative slack so that tc = ms * ts computed in floating point passes.
  if (!(std::isfinite(tc) && tc >= ms_count * ts * (1.0 - 1e-12)))
    fail("Tc must be at least Ms * Ts");
}

DuplicateTargets validate_scene(const RadarConfig& cfg, const Scene& scene) {
  for (std::size_t k = 0; k < scene.size(); ++k) {
    const Target& t = scene[k];
    if (!cfg.range_in_domain(t.r) || !cfg.speed_in_domain(t.v)) {
      std::ostringstream os;
      os << "target " << k << " at (r=" << t.r << ", v=" << t.v
         << ") is outside the domain (0, " << cfg.max_range() << "] x ("
         << -cfg.max_speed() << ", " << cfg.max_speed() << "]";
      throw TargetDomainError(k, os.str());
    }
    if (!std::isfinite(t.alpha.real()) || !std::isfinite(t.alpha.imag())) {
      throw TargetDomainError(k, "target " + std::to_string(k) + " has a non-finite alpha");
    }
  }
  DuplicateTargets duplicates;
  for (std::size_t i = 0; i < scene.size(); ++i)
    for (std::size_t j = i + 1; j < scene.size(); ++j)
      if (scene[i].r == scene[j].r && scene[i].v == scene[j].v) duplicates.emplace_back(i, j);
  return duplicates;
}

Measurement::Measurement(Index ms, Index mc)
    : ms_(ms), mc_(mc), samples_(Eigen::VectorXcd::Zero(ms * mc)) {
  if (ms < 1 || mc < 1) throw ValidationError("measurement: Ms and Mc must be positive");
}

Measurement::Measurement(Index ms, Index mc, Eigen::VectorXcd samples)
    : ms_(ms), mc_(mc), samples_(std::move(samples)) {
  if (ms < 1 || mc < 1) throw ValidationError("measurement: Ms and Mc must be positive");
  if (samples_.size() != ms * mc) {
    throw ValidationError("measurement: expected " + std::to_string(ms * mc) +
                          " samples, got " + std::to_string(samples_.size()));
  }
}

Measurement Measurement::from_matrix(const Eigen::MatrixXcd& y) {
  Measurement m(y.rows(), y.cols());
  m.matrix() = y;
  return m;
}

}  // namespace fcomp
