#pragma once

#include <vector>

#include <Eigen/Core>

namespace fcomp {

/// Minimum-cost perfect matching on a square cost matrix (Kuhn-Munkres,
/// O(n^3)). Returns assignment[row] = column.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace fcomp
