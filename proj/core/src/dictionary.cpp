#include "fcomp/dictionary.hpp"

#include <utility>

#include "fcomp/errors.hpp"
#include "fcomp/signal_model.hpp"

namespace fcomp {

ExactInterpolants exact_interpolants(const RadarConfig& cfg, const ParamGrid& grid, Index n) {
  grid.check_index(n);
  const double r = grid.range_at(n);
  const double v = grid.speed_at(n);
  AtomGradient g = exact_atom_gradient(cfg, r, v);
  return {exact_atom(cfg, r, v), grid.range_norm() * g.d_range, grid.speed_norm() * g.d_speed};
}

FactorizedInterpolants factorized_interpolants(const RadarConfig& cfg, const ParamGrid& grid,
                                               Index nr, Index nv) {
  if (nr < 0 || nr >= grid.range_count() || nv < 0 || nv >= grid.speed_count())
    throw ValidationError("factorized interpolants: sub-grid index out of range");
  const double r = grid.range_bins()[static_cast<std::size_t>(nr)];
  const double v = grid.speed_bins()[static_cast<std::size_t>(nv)];
  FactorizedInterpolants out;
  out.xi[0] = sub_atom_psi(cfg, r);
  out.xi[1] = grid.range_norm() * sub_atom_psi_derivative(cfg, r);
  out.xi[2] = out.xi[0];
  out.eta[0] = sub_atom_phi(cfg, v);
  out.eta[1] = out.eta[0];
  out.eta[2] = grid.speed_norm() * sub_atom_phi_derivative(cfg, v);
  return out;
}

VectorDictionary::VectorDictionary(ParamGrid grid, Eigen::MatrixXcd atoms, int interpolant_count,
                                   InterpolantFn interpolants)
    : grid_(std::move(grid)),
      atoms_(std::move(atoms)),
      interpolant_count_(interpolant_count),
      interpolants_(std::move(interpolants)) {
  if (atoms_.cols() != grid_.size())
    throw ValidationError("dictionary: atom count does not match the grid size");
  if (interpolant_count_ < 1) throw ValidationError("dictionary: need at least one interpolant");
  if (!interpolants_) throw ValidationError("dictionary: missing interpolant generator");
}

VectorDictionary VectorDictionary::exact(const RadarConfig& cfg, const ParamGrid& grid) {
  cfg.validate();
  Eigen::MatrixXcd atoms(cfg.sample_count(), grid.size());
  for (Index n = 0; n < grid.size(); ++n) atoms.col(n) = exact_atom(cfg, grid.range_at(n), grid.speed_at(n));

  auto generate = [cfg, grid](Index n) {
    ExactInterpolants d = exact_interpolants(cfg, grid, n);
    Eigen::MatrixXcd out(cfg.sample_count(), kTaylorInterpolants);
    for (int i = 0; i < kTaylorInterpolants; ++i) out.col(i) = std::move(d[static_cast<std::size_t>(i)]);
    return out;
  };
  return VectorDictionary(grid, std::move(atoms), kTaylorInterpolants, generate);
}

Eigen::MatrixXcd VectorDictionary::interpolants(Index n) const {
  grid_.check_index(n);
  Eigen::MatrixXcd d = interpolants_(n);
  if (d.rows() != signal_size() || d.cols() != interpolant_count_)
    throw ValidationError("dictionary: interpolant generator returned a wrongly shaped block");
  return d;
}

FactorizedDictionary::FactorizedDictionary(const RadarConfig& cfg, ParamGrid grid)
    : cfg_(cfg), grid_(std::move(grid)) {
  cfg_.validate();
  psi_.resize(cfg_.ms_count, grid_.range_count());
  dpsi_.resize(cfg_.ms_count, grid_.range_count());
  phi_.resize(cfg_.mc_count, grid_.speed_count());
  dphi_.resize(cfg_.mc_count, grid_.speed_count());
  for (Index nr = 0; nr < grid_.range_count(); ++nr) {
    const double r = grid_.range_bins()[static_cast<std::size_t>(nr)];
    psi_.col(nr) = sub_atom_psi(cfg_, r);
    dpsi_.col(nr) = grid_.range_norm() * sub_atom_psi_derivative(cfg_, r);
  }
  for (Index nv = 0; nv < grid_.speed_count(); ++nv) {
    const double v = grid_.speed_bins()[static_cast<std::size_t>(nv)];
    phi_.col(nv) = sub_atom_phi(cfg_, v);
    dphi_.col(nv) = grid_.speed_norm() * sub_atom_phi_derivative(cfg_, v);
  }
}

Eigen::MatrixXcd FactorizedDictionary::interpolant_matrix(int i, Index nr, Index nv) const {
  if (i < 0 || i >= kTaylorInterpolants) throw ValidationError("dictionary: interpolant order out of range");
  return xi(i).col(nr) * eta(i).col(nv).transpose();
}

VectorDictionary FactorizedDictionary::vectorized() const {
  const Index m = ms() * mc();
  Eigen::MatrixXcd atoms(m, grid_.size());
  for (Index n = 0; n < grid_.size(); ++n) {
    auto [nr, nv] = grid_.split(n);
    Eigen::MatrixXcd a = interpolant_matrix(0, nr, nv);
    atoms.col(n) = Eigen::Map<const Eigen::VectorXcd>(a.data(), m);
  }
  FactorizedDictionary self = *this;
  auto generate = [self, m](Index n) {
    auto [nr, nv] = self.grid().split(n);
    Eigen::MatrixXcd out(m, kTaylorInterpolants);
    for (int i = 0; i < kTaylorInterpolants; ++i) {
      Eigen::MatrixXcd d = self.interpolant_matrix(i, nr, nv);
      out.col(i) = Eigen::Map<const Eigen::VectorXcd>(d.data(), m);
    }
    return out;
  };
  return VectorDictionary(grid_, std::move(atoms), kTaylorInterpolants, generate);
}

}  // namespace fcomp
