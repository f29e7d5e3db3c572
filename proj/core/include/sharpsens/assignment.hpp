#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace sharpsens {

struct Assignment {
  std::vector<std::size_t> row_to_col;
  double cost = 0.0;  // summed in row order
};

/// Minimum-cost assignment of every row to a distinct column (rows <= cols)
/// with the shortest-augmenting-path Hungarian method, O(rows^2 cols).
/// Entries must be finite. Among equal-cost augmentations the lower column
/// index wins, so results are deterministic for a given matrix.
Assignment solve_assignment(const Eigen::MatrixXd& cost);

/// Cost of a given assignment, summed in row order.
double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<std::size_t>& row_to_col);

}  // namespace sharpsens
