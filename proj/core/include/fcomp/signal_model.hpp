#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "fcomp/radar.hpp"

namespace fcomp {

// Sampled FMCW baseband atoms. The exact atom is the product psi * phi * theta;
// the r-dependent constant phase of the demodulated signal is absorbed into
// the scattering coefficient.

/// Range sub-atom psi(r') of length Ms; entry ms = exp(-j 2pi (B/Ms)(2 r'/c) ms).
Eigen::VectorXcd sub_atom_psi(const RadarConfig& cfg, double r_prime);

/// Speed sub-atom phi(v) of length Mc; entry mc = exp(-j 2pi f0 Tc (2 v/c) mc).
Eigen::VectorXcd sub_atom_phi(const RadarConfig& cfg, double v);

/// Ms x Mc distortion term neglected by the factorized model.
Eigen::MatrixXcd distortion_theta(const RadarConfig& cfg, double r, double v);

/// Exact atom a(r, v), length M, indexed mc * Ms + ms.
Eigen::VectorXcd exact_atom(const RadarConfig& cfg, double r, double v);

/// Partial derivatives of the exact atom with respect to r and v.
struct AtomGradient {
  Eigen::VectorXcd d_range;
  Eigen::VectorXcd d_speed;
};
AtomGradient exact_atom_gradient(const RadarConfig& cfg, double r, double v);

/// Rank-1 factorized atom psi(r + gamma v) phi(v)^T, shape Ms x Mc.
Eigen::MatrixXcd factorized_atom(const RadarConfig& cfg, double r, double v);

/// d psi / d r' and d phi / d v.
Eigen::VectorXcd sub_atom_psi_derivative(const RadarConfig& cfg, double r_prime);
Eigen::VectorXcd sub_atom_phi_derivative(const RadarConfig& cfg, double v);

enum class SynthesisModel { exact, factorized };

/// y = sum_k alpha_k atom(r_k, v_k) + noise, with noise i.i.d. CN(0, sigma^2).
/// Deterministic for a given (scene, model, noise_sigma, seed); no random
/// numbers are drawn when noise_sigma == 0.
Measurement synthesize(const RadarConfig& cfg, const Scene& scene,
                       SynthesisModel model, double noise_sigma = 0.0,
                       std::uint64_t seed = 0);

}  // namespace fcomp
