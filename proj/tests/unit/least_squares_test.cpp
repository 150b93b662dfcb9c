#include <doctest.h>

#include <random>

#include "fcomp/errors.hpp"
#include "fcomp/solvers.hpp"
#include "oracles.hpp"

using namespace fcomp;

namespace {

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()); }

Eigen::VectorXcd flatten(const JointLsResult& r) {
  Index total = 0;
  for (const auto& b : r.betas) total += b.size();
  Eigen::VectorXcd x(total);
  Index at = 0;
  for (const auto& b : r.betas) {
    x.segment(at, b.size()) = b;
    at += b.size();
  }
  return x;
}

}  // namespace

TEST_SUITE("least_squares") {

TEST_CASE("exact joint least squares known answers") {
  const RadarConfig cfg = RadarConfig::k_band(8, 8);
  const VectorDictionary dict = VectorDictionary::exact(cfg, build_grid(cfg, 16, 16));
  const std::vector<Index> one{40};
  const JointLsResult r = joint_ls_exact(2.0 * dict.atoms().col(40), dict, one);
  REQUIRE(r.betas.size() == 1);
  CHECK(std::abs(r.betas[0][0] - 2.0) < 1e-10);
  CHECK(std::abs(r.betas[0][1]) < 1e-10);
  CHECK(std::abs(r.betas[0][2]) < 1e-10);
  CHECK_FALSE(r.regularized);

  // y in the span of all picked columns is reproduced exactly.
  const std::vector<Index> picks{3, 100, 201};
  std::mt19937_64 rng(40);
  const Eigen::VectorXcd coef = oracle::random_vector(9, rng);
  const Eigen::MatrixXcd a = oracle::stacked(dict, picks, 3);
  const Eigen::VectorXcd y = a * coef;
  const JointLsResult s = joint_ls_exact(y, dict, picks);
  CHECK((y - a * flatten(s)).norm() < 1e-9 * y.norm());
}

TEST_CASE("exact joint least squares matches a dense QR solve") {
  const RadarConfig cfg = RadarConfig::k_band(8, 16);
  const VectorDictionary dict = VectorDictionary::exact(cfg, build_grid(cfg, 16, 32));
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<Index> node(0, dict.size() - 1);
  for (int i = 0; i < 30; ++i) {
    std::vector<Index> picks{node(rng), node(rng)};
    if (picks[0] == picks[1]) continue;
    for (int count : {1, 3}) {
      const Eigen::VectorXcd y = oracle::random_vector(128, rng);
      const JointLsResult r = joint_ls_exact(y, dict, picks, count);
      const Eigen::VectorXcd ref = oracle::dense_ls(oracle::stacked(dict, picks, count), y);
      CHECK(oracle::rel_error(flatten(r), ref) < 1e-9);
    }
  }
}

TEST_CASE("factorized joint least squares matches the vectorized path") {
  std::mt19937_64 rng(42);
  for (auto [ms, mc] : {std::pair{8, 8}, std::pair{8, 16}, std::pair{16, 8}}) {
    const RadarConfig cfg = RadarConfig::k_band(ms, mc);
    const FactorizedDictionary fd(cfg, build_grid(cfg, 2 * ms, 2 * mc));
    const VectorDictionary vd = fd.vectorized();
    std::uniform_int_distribution<Index> node(0, vd.size() - 1);
    for (int i = 0; i < 20; ++i) {
      std::vector<Index> picks{node(rng), node(rng), node(rng)};
      std::sort(picks.begin(), picks.end());
      if (std::adjacent_find(picks.begin(), picks.end()) != picks.end()) continue;
      const Eigen::MatrixXcd y = oracle::random_matrix(ms, mc, rng);
      for (int count : {1, 3}) {
        const JointLsResult f = joint_ls_factorized(y, fd, picks, count);
        const JointLsResult v = joint_ls_exact(vec(y), vd, picks, count);
        CHECK(oracle::rel_error(flatten(f), flatten(v)) < 1e-9);
        CHECK(oracle::rel_error(flatten(f), oracle::dense_ls(oracle::stacked(vd, picks, count), vec(y))) < 1e-9);
      }
    }
  }
}

TEST_CASE("factorized joint least squares known answers") {
  const RadarConfig cfg = RadarConfig::k_band(8, 8);
  const ParamGrid grid = build_grid(cfg, 16, 16);
  const FactorizedDictionary fd(cfg, grid);
  const std::vector<Index> one{grid.linear_index(4, 9)};
  const JointLsResult r = joint_ls_factorized(3.0 * fd.interpolant_matrix(0, 4, 9), fd, one);
  CHECK(std::abs(r.betas[0][0] - 3.0) < 1e-10);
  CHECK(std::abs(r.betas[0][1]) < 1e-10);
  CHECK(std::abs(r.betas[0][2]) < 1e-10);
}

TEST_CASE("duplicate picks are rejected") {
  const RadarConfig cfg = RadarConfig::k_band(8, 8);
  const FactorizedDictionary fd(cfg, build_grid(cfg, 8, 8));
  const std::vector<Index> dup{5, 9, 5};
  CHECK_THROWS_AS(joint_ls_factorized(Eigen::MatrixXcd::Ones(8, 8), fd, dup), NumericError);
  CHECK_THROWS_AS(joint_ls_exact(Eigen::VectorXcd::Ones(64), fd.vectorized(), dup), NumericError);
}

TEST_CASE("singular Gram matrices are regularized") {
  // Two nodes whose interpolants are identical columns.
  const ParamGrid grid = build_grid(RadarConfig::k_band(4, 4), 2, 2);
  Eigen::MatrixXcd atoms = Eigen::MatrixXcd::Identity(16, 4);
  atoms.col(1) = atoms.col(0);
  auto gen = [atoms](Index n) { return Eigen::MatrixXcd(atoms.col(n)); };
  const VectorDictionary dict(grid, atoms, 1, gen);
  const std::vector<Index> picks{0, 1};
  const JointLsResult r = joint_ls_exact(2.0 * atoms.col(0), dict, picks);
  CHECK(r.regularized);
  CHECK(std::abs(r.betas[0][0] + r.betas[1][0] - 2.0) < 1e-6);
}

}  // TEST_SUITE
