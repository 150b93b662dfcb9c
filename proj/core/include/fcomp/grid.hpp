#pragma once

#include <array>
#include <vector>

#include "fcomp/radar.hpp"

namespace fcomp {

/// Normalization constants used by the Taylor interpolants and the mapping
/// function: the grid steps, or the radar resolutions.
enum class Normalization { grid_step, resolution };

/// Separable uniform range x speed grid. Node n = nv * Nr + nr.
///
/// Bins are centered: range bin nr sits at (nr + 1/2) * range_step inside
/// (0, max_range], speed bin nv at -max_speed + (nv + 1/2) * speed_step.
class ParamGrid {
 public:
  ParamGrid(std::vector<double> range_bins, std::vector<double> speed_bins,
            double range_norm, double speed_norm);

  Index range_count() const { return static_cast<Index>(range_bins_.size()); }
  Index speed_count() const { return static_cast<Index>(speed_bins_.size()); }
  Index size() const { return range_count() * speed_count(); }

  const std::vector<double>& range_bins() const { return range_bins_; }
  const std::vector<double>& speed_bins() const { return speed_bins_; }
  double range_step() const { return range_step_; }
  double speed_step() const { return speed_step_; }
  /// R~ and V~.
  double range_norm() const { return range_norm_; }
  double speed_norm() const { return speed_norm_; }

  Index linear_index(Index nr, Index nv) const { return nv * range_count() + nr; }
  std::pair<Index, Index> split(Index n) const {
    return {n % range_count(), n / range_count()};
  }

  double range_at(Index n) const { return range_bins_[static_cast<std::size_t>(split(n).first)]; }
  double speed_at(Index n) const { return speed_bins_[static_cast<std::size_t>(split(n).second)]; }

  /// Throws ValidationError unless 0 <= n < size().
  void check_index(Index n) const;

 private:
  std::vector<double> range_bins_;
  std::vector<double> speed_bins_;
  double range_step_;
  double speed_step_;
  double range_norm_;
  double speed_norm_;
};

ParamGrid build_grid(const RadarConfig& cfg, Index nr, Index nv,
                     Normalization normalization = Normalization::grid_step);

/// Order-1 Taylor mapping (1, (r - r_n)/R~, (v - v_n)/V~).
std::array<double, 3> mapping_coefficients(const ParamGrid& grid, Index n,
                                           double r, double v);

/// Node minimizing max(|r - r_n| / dr, |v - v_n| / dv); ties go to the smaller n.
Index nearest_node(const ParamGrid& grid, double r, double v);

}  // namespace fcomp
