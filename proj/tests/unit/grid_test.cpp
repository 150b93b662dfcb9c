#include <doctest.h>

#include <random>

#include "fcomp/errors.hpp"
#include "fcomp/grid.hpp"
#include "oracles.hpp"

using namespace fcomp;

namespace {

Index brute_nearest(const ParamGrid& grid, double r, double v) {
  Index best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (Index n = 0; n < grid.size(); ++n) {
    const double s = std::max(std::abs(r - grid.range_at(n)) / grid.range_step(),
                              std::abs(v - grid.speed_at(n)) / grid.speed_step());
    if (s < best_score) {
      best_score = s;
      best = n;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("bins are centered in the domain") {
  RadarConfig cfg = RadarConfig::k_band(1, 4);
  cfg.bandwidth = kSpeedOfLight / 4.0;  // max range 2 m
  const ParamGrid g = build_grid(cfg, 2, 4);
  REQUIRE(g.range_bins().size() == 2);
  CHECK(g.range_bins()[0] == doctest::Approx(0.5));
  CHECK(g.range_bins()[1] == doctest::Approx(1.5));
  CHECK(g.range_step() == doctest::Approx(1.0));
  CHECK(g.speed_bins().front() == doctest::Approx(-cfg.max_speed() + 0.25 * cfg.max_speed()));
  CHECK(g.speed_bins().back() == doctest::Approx(cfg.max_speed() - 0.25 * cfg.max_speed()));
}

TEST_CASE("critical grid steps") {
  const RadarConfig cfg = RadarConfig::k_band(16, 16);
  const ParamGrid g = build_grid(cfg, 16, 16);
  CHECK(g.range_step() == doctest::Approx(cfg.range_resolution()).epsilon(1e-12));
  // The speed domain spans 2 Mc resolutions, so Mc speed bins are two resolutions apart.
  CHECK(g.speed_step() == doctest::Approx(2 * cfg.speed_resolution()).epsilon(1e-12));
  CHECK(build_grid(cfg, 16, 32).speed_step() == doctest::Approx(cfg.speed_resolution()).epsilon(1e-12));
}

TEST_CASE("normalization constants") {
  const RadarConfig cfg = RadarConfig::k_band(16, 16);
  const ParamGrid steps = build_grid(cfg, 24, 40);
  CHECK(steps.range_norm() == doctest::Approx(steps.range_step()).epsilon(1e-12));
  CHECK(steps.speed_norm() == doctest::Approx(steps.speed_step()).epsilon(1e-12));
  const ParamGrid res = build_grid(cfg, 24, 40, Normalization::resolution);
  CHECK(res.range_norm() == cfg.range_resolution());
  CHECK(res.speed_norm() == cfg.speed_resolution());
}

TEST_CASE("linear index round trip") {
  const ParamGrid g = build_grid(RadarConfig::k_band(8, 8), 5, 7);
  CHECK(g.size() == 35);
  for (Index n = 0; n < g.size(); ++n) {
    auto [nr, nv] = g.split(n);
    CHECK(g.linear_index(nr, nv) == n);
    CHECK(n == nv * 5 + nr);
  }
  CHECK_THROWS_AS(g.check_index(35), ValidationError);
  CHECK_THROWS_AS(g.check_index(-1), ValidationError);
}

TEST_CASE("grid validation") {
  const RadarConfig cfg = RadarConfig::k_band(8, 8);
  CHECK_THROWS_AS(build_grid(cfg, 1, 8), ValidationError);
  CHECK_THROWS_AS(ParamGrid({1.0, 2.0, 2.5}, {0.0, 1.0}, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(ParamGrid({2.0, 1.0}, {0.0, 1.0}, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(ParamGrid({1.0, 2.0}, {0.0, 1.0}, 0.0, 1.0), ValidationError);
}

TEST_CASE("mapping coefficients") {
  const ParamGrid g = build_grid(RadarConfig::k_band(16, 16), 32, 32);
  const Index n = g.linear_index(7, 20);
  auto c = mapping_coefficients(g, n, g.range_at(n), g.speed_at(n));
  CHECK(c == std::array<double, 3>{1.0, 0.0, 0.0});
  c = mapping_coefficients(g, n, g.range_at(n) + g.range_norm(), g.speed_at(n));
  CHECK(c[0] == 1.0);
  CHECK(c[1] == doctest::Approx(1.0));
  CHECK(c[2] == 0.0);
  c = mapping_coefficients(g, n, g.range_at(n), g.speed_at(n) - 0.25 * g.speed_norm());
  CHECK(c[2] == doctest::Approx(-0.25));
}

TEST_CASE("nearest node") {
  const ParamGrid g = build_grid(RadarConfig::k_band(16, 16), 20, 12);
  for (Index n = 0; n < g.size(); ++n) CHECK(nearest_node(g, g.range_at(n), g.speed_at(n)) == n);

  // Midway between range bins 3 and 4: the smaller nr wins.
  const double r_mid = 0.5 * (g.range_bins()[3] + g.range_bins()[4]);
  CHECK(nearest_node(g, r_mid, g.speed_bins()[5]) == g.linear_index(3, 5));

  std::mt19937_64 rng(17);
  const RadarConfig cfg = RadarConfig::k_band(16, 16);
  std::uniform_real_distribution<double> ur(0.0, cfg.max_range()), uv(-cfg.max_speed(), cfg.max_speed());
  for (int i = 0; i < 2000; ++i) {
    const double r = ur(rng), v = uv(rng);
    CHECK(nearest_node(g, r, v) == brute_nearest(g, r, v));
  }
}

}  // TEST_SUITE
