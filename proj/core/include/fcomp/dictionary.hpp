#pragma once

#include <array>
#include <functional>

#include <Eigen/Core>

#include "fcomp/grid.hpp"
#include "fcomp/radar.hpp"

namespace fcomp {

/// Number of interpolants per node for the order-1 Taylor scheme.
inline constexpr int kTaylorInterpolants = 3;

/// Interpolants at one exact-path node: atom, R~ da/dr, V~ da/dv.
using ExactInterpolants = std::array<Eigen::VectorXcd, kTaylorInterpolants>;

ExactInterpolants exact_interpolants(const RadarConfig& cfg, const ParamGrid& grid,
                                     Index n);

/// Sub-atom interpolants at a factorized node (nr on the r' axis, nv).
/// xi[0] == xi[2] == psi(r_nr); eta[0] == eta[1] == phi(v_nv);
/// xi[1] = R~ psi'(r_nr); eta[2] = V~ phi'(v_nv).
struct FactorizedInterpolants {
  std::array<Eigen::VectorXcd, kTaylorInterpolants> xi;
  std::array<Eigen::VectorXcd, kTaylorInterpolants> eta;
};

FactorizedInterpolants factorized_interpolants(const RadarConfig& cfg,
                                               const ParamGrid& grid, Index nr,
                                               Index nv);

/// Interpolated dictionary over vectorized (length M) atoms.
///
/// The first-order atoms of every node are materialized as an M x N matrix
/// for the correlation scan; the full interpolant set of a node is produced
/// on demand. The standard instance is the exact Taylor dictionary, but any
/// interpolant generator can be plugged in (e.g. the vectorized factorized
/// dictionary used to cross-check the factorized kernels).
class VectorDictionary {
 public:
  /// Returns the M x I interpolant matrix of node n; column 0 must equal
  /// column n of `atoms`.
  using InterpolantFn = std::function<Eigen::MatrixXcd(Index n)>;

  VectorDictionary(ParamGrid grid, Eigen::MatrixXcd atoms, int interpolant_count,
                   InterpolantFn interpolants);

  /// Order-1 Taylor dictionary on exact atoms.
  static VectorDictionary exact(const RadarConfig& cfg, const ParamGrid& grid);

  const ParamGrid& grid() const { return grid_; }
  Index signal_size() const { return atoms_.rows(); }
  Index size() const { return atoms_.cols(); }
  int interpolant_count() const { return interpolant_count_; }

  /// M x N first-order atoms d1[n].
  const Eigen::MatrixXcd& atoms() const { return atoms_; }

  /// M x I matrix (d1[n], ..., dI[n]).
  Eigen::MatrixXcd interpolants(Index n) const;

 private:
  ParamGrid grid_;
  Eigen::MatrixXcd atoms_;
  int interpolant_count_;
  InterpolantFn interpolants_;
};

/// Factorized Taylor dictionary. The range axis holds r' = r + gamma v; its
/// bins reuse the range grid, which spans exactly one period of psi in r'.
class FactorizedDictionary {
 public:
  FactorizedDictionary(const RadarConfig& cfg, ParamGrid grid);

  const RadarConfig& config() const { return cfg_; }
  const ParamGrid& grid() const { return grid_; }
  Index ms() const { return psi_.rows(); }
  Index mc() const { return phi_.rows(); }

  /// Ms x Nr matrix whose columns are xi^(i)[nr], i in {0, 1, 2}.
  const Eigen::MatrixXcd& xi(int i) const { return i == 1 ? dpsi_ : psi_; }
  /// Mc x Nv matrix whose columns are eta^(i)[nv], i in {0, 1, 2}.
  const Eigen::MatrixXcd& eta(int i) const { return i == 2 ? dphi_ : phi_; }

  /// D^(i)[nr, nv] = xi^(i)[nr] eta^(i)[nv]^T (Ms x Mc).
  Eigen::MatrixXcd interpolant_matrix(int i, Index nr, Index nv) const;

  /// The same dictionary with every D^(i) vectorized, for equivalence checks.
  VectorDictionary vectorized() const;

 private:
  RadarConfig cfg_;
  ParamGrid grid_;
  Eigen::MatrixXcd psi_;
  Eigen::MatrixXcd dpsi_;
  Eigen::MatrixXcd phi_;
  Eigen::MatrixXcd dphi_;
};

}  // namespace fcomp
