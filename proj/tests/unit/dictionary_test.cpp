#include <doctest.h>

#include <random>

#include "fcomp/dictionary.hpp"
#include "fcomp/errors.hpp"
#include "fcomp/signal_model.hpp"
#include "oracles.hpp"

using namespace fcomp;

namespace {

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()); }

// Mean over nodes of |a(node + h) - taylor(h)| at 0.10 cells divided by the same at 0.05 cells.
double taylor_ratio(const RadarConfig& cfg, const ParamGrid& grid, const std::vector<Index>& nodes,
                    double dir_r, double dir_v) {
  double sum = 0.0;
  for (Index n : nodes) {
    const ExactInterpolants d = exact_interpolants(cfg, grid, n);
    auto err = [&](double h) {
      const double r = grid.range_at(n) + h * dir_r * grid.range_step();
      const double v = grid.speed_at(n) + h * dir_v * grid.speed_step();
      const auto c = mapping_coefficients(grid, n, r, v);
      return (exact_atom(cfg, r, v) - (c[0] * d[0] + c[1] * d[1] + c[2] * d[2])).norm();
    };
    sum += err(0.10) / err(0.05);
  }
  return sum / static_cast<double>(nodes.size());
}

}  // namespace

TEST_SUITE("dictionary") {

TEST_CASE("exact interpolants are the atom and its scaled gradient") {
  const RadarConfig cfg = RadarConfig::k_band(16, 16);
  const ParamGrid grid = build_grid(cfg, 24, 20);
  const VectorDictionary dict = VectorDictionary::exact(cfg, grid);
  CHECK(dict.size() == 480);
  CHECK(dict.signal_size() == 256);
  CHECK(dict.interpolant_count() == 3);
  for (Index n : {Index{0}, Index{77}, Index{479}}) {
    const double r = grid.range_at(n), v = grid.speed_at(n);
    const Eigen::MatrixXcd d = dict.interpolants(n);
    const AtomGradient g = exact_atom_gradient(cfg, r, v);
    CHECK(oracle::rel_error(Eigen::VectorXcd(d.col(0)), oracle::atom(cfg, r, v)) < 1e-11);
    CHECK(d.col(0) == dict.atoms().col(n));
    CHECK(oracle::rel_error(Eigen::VectorXcd(d.col(1)), Eigen::VectorXcd(grid.range_step() * g.d_range)) < 1e-15);
    CHECK(oracle::rel_error(Eigen::VectorXcd(d.col(2)), Eigen::VectorXcd(grid.speed_step() * g.d_speed)) < 1e-15);
  }
  CHECK_THROWS_AS(dict.interpolants(480), ValidationError);
}

TEST_CASE("factorized interpolant structure") {
  const RadarConfig cfg = RadarConfig::k_band(8, 16);
  const ParamGrid grid = build_grid(cfg, 12, 20);
  const FactorizedDictionary fd(cfg, grid);
  CHECK(fd.ms() == 8);
  CHECK(fd.mc() == 16);
  const FactorizedInterpolants f = factorized_interpolants(cfg, grid, 5, 9);
  CHECK(f.xi[0] == f.xi[2]);
  CHECK(f.eta[0] == f.eta[1]);
  for (int i = 0; i < 3; ++i) {
    CHECK(oracle::rel_error(Eigen::VectorXcd(fd.xi(i).col(5)), f.xi[static_cast<std::size_t>(i)]) < 1e-15);
    CHECK(oracle::rel_error(Eigen::VectorXcd(fd.eta(i).col(9)), f.eta[static_cast<std::size_t>(i)]) < 1e-15);
    CHECK(oracle::rel_error(fd.interpolant_matrix(i, 5, 9),
                            Eigen::MatrixXcd(f.xi[static_cast<std::size_t>(i)] *
                                             f.eta[static_cast<std::size_t>(i)].transpose())) < 1e-15);
  }
  const double r = grid.range_bins()[5], v = grid.speed_bins()[9];
  CHECK(oracle::rel_error(f.xi[1], Eigen::VectorXcd(grid.range_step() * sub_atom_psi_derivative(cfg, r))) < 1e-15);
  CHECK(oracle::rel_error(f.eta[2], Eigen::VectorXcd(grid.speed_step() * sub_atom_phi_derivative(cfg, v))) < 1e-15);

  const VectorDictionary vd = fd.vectorized();
  const Index n = grid.linear_index(5, 9);
  for (int i = 0; i < 3; ++i)
    CHECK(oracle::rel_error(Eigen::VectorXcd(vd.interpolants(n).col(i)), vec(fd.interpolant_matrix(i, 5, 9))) < 1e-15);
  CHECK(vd.atoms().col(n) == vd.interpolants(n).col(0));
}

TEST_CASE("factorized and exact interpolants agree on the zero-speed row") {
  const RadarConfig cfg = RadarConfig::k_band(16, 16);
  const ParamGrid grid = build_grid(cfg, 16, 15);  // odd Nv puts a bin at v = 0
  REQUIRE(std::abs(grid.speed_bins()[7]) < 1e-12);
  const FactorizedDictionary fd(cfg, grid);
  for (Index nr = 0; nr < 16; ++nr) {
    const ExactInterpolants d = exact_interpolants(cfg, grid, grid.linear_index(nr, 7));
    CHECK(oracle::rel_error(vec(fd.interpolant_matrix(0, nr, 7)), d[0]) < 1e-10);
    CHECK(oracle::rel_error(vec(fd.interpolant_matrix(1, nr, 7)), d[1]) < 1e-10);
    // The speed derivative of the exact atom also moves r' and theta; the factorized one does not.
    CHECK(oracle::rel_error(vec(fd.interpolant_matrix(2, nr, 7)), d[2]) > 1e-3);
  }
}

TEST_CASE("critical grid sub-atoms are orthogonal") {
  for (int m : {8, 16, 32}) {
    const RadarConfig cfg = RadarConfig::k_band(m, m);
    const FactorizedDictionary fd(cfg, build_grid(cfg, m, m));
    const Eigen::MatrixXcd gx = fd.xi(0).adjoint() * fd.xi(0);
    const Eigen::MatrixXcd ge = fd.eta(0).adjoint() * fd.eta(0);
    CHECK((gx - m * Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((ge - m * Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("taylor remainder decays quadratically") {
  const RadarConfig cfg = RadarConfig::k_band(16, 16);
  const ParamGrid grid = build_grid(cfg, 32, 32);
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<Index> pick(0, grid.size() - 1);
  std::vector<Index> nodes;
  for (int i = 0; i < 20; ++i) nodes.push_back(pick(rng));
  for (auto [dr, dv] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{1.0, 1.0}}) {
    const double ratio = taylor_ratio(cfg, grid, nodes, dr, dv);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}

TEST_CASE("custom vector dictionaries are validated") {
  const ParamGrid grid = build_grid(RadarConfig::k_band(4, 4), 2, 2);
  const Eigen::MatrixXcd atoms = Eigen::MatrixXcd::Identity(16, 4);
  auto gen = [atoms](Index n) { return Eigen::MatrixXcd(atoms.col(n)); };
  CHECK_THROWS_AS(VectorDictionary(grid, Eigen::MatrixXcd::Zero(16, 3), 1, gen), ValidationError);
  CHECK_THROWS_AS(VectorDictionary(grid, atoms, 0, gen), ValidationError);
  CHECK_THROWS_AS(VectorDictionary(grid, atoms, 1, nullptr), ValidationError);
  const VectorDictionary wrong(grid, atoms, 2, gen);
  CHECK_THROWS_AS(wrong.interpolants(0), ValidationError);
}

}  // TEST_SUITE
