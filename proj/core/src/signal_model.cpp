#include "fcomp/signal_model.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "fcomp/errors.hpp"

namespace fcomp {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double c = kSpeedOfLight;

// Phase slope of psi per unit r' and per sample index.
double psi_rate(const RadarConfig& cfg) { return kTwoPi * (cfg.bandwidth / cfg.ms_count) * 2.0 / c; }
// Phase slope of phi per unit v and per chirp index.
double phi_rate(const RadarConfig& cfg) { return kTwoPi * cfg.f0 * cfg.tc * 2.0 / c; }

// Phase of theta(r, v) at (ms, mc).
double theta_phase(const RadarConfig& cfg, double r, double v, int ms, int mc) {
  const double t = mc * cfg.tc + ms * cfg.ts;
  const double slope = cfg.bandwidth / cfg.ms_count;
  return -(kTwoPi / c) * slope * (r / (c * cfg.ts) + ms) * v * t +
         std::numbers::pi * (slope / cfg.ts) * (v * v / (c * c)) * t * t;
}

// Total phase of the exact atom at (ms, mc).
double atom_phase(const RadarConfig& cfg, double r, double v, int ms, int mc) {
  return -psi_rate(cfg) * (r + cfg.gamma() * v) * ms - phi_rate(cfg) * v * mc +
         theta_phase(cfg, r, v, ms, mc);
}

Complex unit(double phase) { return std::polar(1.0, phase); }

}  // namespace

Eigen::VectorXcd sub_atom_psi(const RadarConfig& cfg, double r_prime) {
  const double rate = psi_rate(cfg) * r_prime;
  Eigen::VectorXcd psi(cfg.ms_count);
  for (int ms = 0; ms < cfg.ms_count; ++ms) psi[ms] = unit(-rate * ms);
  return psi;
}

Eigen::VectorXcd sub_atom_phi(const RadarConfig& cfg, double v) {
  const double rate = phi_rate(cfg) * v;
  Eigen::VectorXcd phi(cfg.mc_count);
  for (int mc = 0; mc < cfg.mc_count; ++mc) phi[mc] = unit(-rate * mc);
  return phi;
}

Eigen::VectorXcd sub_atom_psi_derivative(const RadarConfig& cfg, double r_prime) {
  Eigen::VectorXcd d = sub_atom_psi(cfg, r_prime);
  const double rate = psi_rate(cfg);
  for (int ms = 0; ms < cfg.ms_count; ++ms) d[ms] *= Complex(0.0, -rate * ms);
  return d;
}

Eigen::VectorXcd sub_atom_phi_derivative(const RadarConfig& cfg, double v) {
  Eigen::VectorXcd d = sub_atom_phi(cfg, v);
  const double rate = phi_rate(cfg);
  for (int mc = 0; mc < cfg.mc_count; ++mc) d[mc] *= Complex(0.0, -rate * mc);
  return d;
}

Eigen::MatrixXcd distortion_theta(const RadarConfig& cfg, double r, double v) {
  Eigen::MatrixXcd theta(cfg.ms_count, cfg.mc_count);
  for (int mc = 0; mc < cfg.mc_count; ++mc)
    for (int ms = 0; ms < cfg.ms_count; ++ms) theta(ms, mc) = unit(theta_phase(cfg, r, v, ms, mc));
  return theta;
}

Eigen::VectorXcd exact_atom(const RadarConfig& cfg, double r, double v) {
  Eigen::VectorXcd a(cfg.sample_count());
  Index m = 0;
  for (int mc = 0; mc < cfg.mc_count; ++mc)
    for (int ms = 0; ms < cfg.ms_count; ++ms) a[m++] = unit(atom_phase(cfg, r, v, ms, mc));
  return a;
}

AtomGradient exact_atom_gradient(const RadarConfig& cfg, double r, double v) {
  // a = exp(j Phi(r, v)), so da/dx = j (dPhi/dx) a.
  const double kr = psi_rate(cfg);
  const double kv = phi_rate(cfg);
  const double slope = cfg.bandwidth / cfg.ms_count;
  const double gamma = cfg.gamma();

  AtomGradient g{Eigen::VectorXcd(cfg.sample_count()), Eigen::VectorXcd(cfg.sample_count())};
  Index m = 0;
  for (int mc = 0; mc < cfg.mc_count; ++mc) {
    for (int ms = 0; ms < cfg.ms_count; ++ms, ++m) {
      const double t = mc * cfg.tc + ms * cfg.ts;
      const Complex a = unit(atom_phase(cfg, r, v, ms, mc));
      const double dphase_dr = -kr * ms - (kTwoPi / c) * slope * v * t / (c * cfg.ts);
      const double dphase_dv = -kr * gamma * ms - kv * mc -
                               (kTwoPi / c) * slope * (r / (c * cfg.ts) + ms) * t +
                               kTwoPi * (slope / cfg.ts) * v * t * t / (c * c);
      g.d_range[m] = Complex(0.0, dphase_dr) * a;
      g.d_speed[m] = Complex(0.0, dphase_dv) * a;
    }
  }
  return g;
}

Eigen::MatrixXcd factorized_atom(const RadarConfig& cfg, double r, double v) {
  return sub_atom_psi(cfg, r + cfg.gamma() * v) * sub_atom_phi(cfg, v).transpose();
}

Measurement synthesize(const RadarConfig& cfg, const Scene& scene, SynthesisModel model,
                       double noise_sigma, std::uint64_t seed) {
  cfg.validate();
  validate_scene(cfg, scene);
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw ValidationError("synthesize: noise sigma must be finite and non-negative");

  Measurement y(cfg.ms_count, cfg.mc_count);
  for (const Target& t : scene) {
    if (model == SynthesisModel::exact) {
      y.samples() += t.alpha * exact_atom(cfg, t.r, t.v);
    } else {
      y.matrix() += t.alpha * factorized_atom(cfg, t.r, t.v);
    }
  }
  if (noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, noise_sigma / std::numbers::sqrt2);
    for (Index m = 0; m < y.size(); ++m) {
      const double re = normal(rng);
      const double im = normal(rng);
      y.samples()[m] += Complex(re, im);
    }
  }
  return y;
}

}  // namespace fcomp
