#include "fcomp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fcomp/errors.hpp"

namespace fcomp {
namespace {

double uniform_step(const std::vector<double>& bins, const char* axis) {
  if (bins.size() < 2) throw ValidationError(std::string("grid: ") + axis + " needs at least 2 bins");
  const double step = bins[1] - bins[0];
  for (std::size_t i = 1; i < bins.size(); ++i) {
    const double d = bins[i] - bins[i - 1];
    if (!(d > 0.0) || std::abs(d - step) > 1e-9 * std::abs(step))
      throw ValidationError(std::string("grid: ") + axis + " bins must be strictly increasing and uniform");
  }
  return step;
}

// First index whose normalized distance to x is <= bound.
Index first_within(const std::vector<double>& bins, double step, double x, double bound) {
  for (std::size_t i = 0; i < bins.size(); ++i)
    if (std::abs(x - bins[i]) / step <= bound) return static_cast<Index>(i);
  return 0;
}

double nearest_distance(const std::vector<double>& bins, double step, double x) {
  double best = std::abs(x - bins.front()) / step;
  for (double b : bins) best = std::min(best, std::abs(x - b) / step);
  return best;
}

}  // namespace

ParamGrid::ParamGrid(std::vector<double> range_bins, std::vector<double> speed_bins,
                     double range_norm, double speed_norm)
    : range_bins_(std::move(range_bins)),
      speed_bins_(std::move(speed_bins)),
      range_step_(uniform_step(range_bins_, "range")),
      speed_step_(uniform_step(speed_bins_, "speed")),
      range_norm_(range_norm),
      speed_norm_(speed_norm) {
  if (!(range_norm_ > 0.0) || !(speed_norm_ > 0.0))
    throw ValidationError("grid: normalization constants must be positive");
}

void ParamGrid::check_index(Index n) const {
  if (n < 0 || n >= size())
    throw ValidationError("grid: node index " + std::to_string(n) + " out of range [0, " +
                          std::to_string(size()) + ")");
}

ParamGrid build_grid(const RadarConfig& cfg, Index nr, Index nv, Normalization normalization) {
  cfg.validate();
  if (nr < 2 || nv < 2) throw ValidationError("grid: Nr and Nv must be at least 2");

  const double dr = cfg.max_range() / static_cast<double>(nr);
  const double dv = 2.0 * cfg.max_speed() / static_cast<double>(nv);
  std::vector<double> ranges(static_cast<std::size_t>(nr));
  std::vector<double> speeds(static_cast<std::size_t>(nv));
  for (Index i = 0; i < nr; ++i) ranges[static_cast<std::size_t>(i)] = (static_cast<double>(i) + 0.5) * dr;
  for (Index i = 0; i < nv; ++i)
    speeds[static_cast<std::size_t>(i)] = -cfg.max_speed() + (static_cast<double>(i) + 0.5) * dv;

  if (normalization == Normalization::resolution)
    return ParamGrid(std::move(ranges), std::move(speeds), cfg.range_resolution(), cfg.speed_resolution());
  return ParamGrid(std::move(ranges), std::move(speeds), dr, dv);
}

std::array<double, 3> mapping_coefficients(const ParamGrid& grid, Index n, double r, double v) {
  grid.check_index(n);
  return {1.0, (r - grid.range_at(n)) / grid.range_norm(), (v - grid.speed_at(n)) / grid.speed_norm()};
}

Index nearest_node(const ParamGrid& grid, double r, double v) {
  // The optimal Chebyshev score is attained by the per-axis nearest bins; among
  // all nodes reaching it, the smallest linear index has the smallest nv first.
  const double score = std::max(nearest_distance(grid.range_bins(), grid.range_step(), r),
                                nearest_distance(grid.speed_bins(), grid.speed_step(), v));
  const Index nv = first_within(grid.speed_bins(), grid.speed_step(), v, score);
  const Index nr = first_within(grid.range_bins(), grid.range_step(), r, score);
  return grid.linear_index(nr, nv);
}

}  // namespace fcomp
