#include "sharpsens/assignment.hpp"

#include <limits>

#include "sharpsens/error.hpp"

namespace sharpsens {

Assignment solve_assignment(const Eigen::MatrixXd& cost) {
  const auto n = static_cast<std::size_t>(cost.rows());
  const auto m = static_cast<std::size_t>(cost.cols());
  if (n > m) {
    throw Error(ErrorCode::DimensionMismatch, "assignment needs at least as many columns as rows");
  }
  if (!cost.allFinite()) {
    throw Error(ErrorCode::DimensionMismatch, "assignment costs must be finite");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();

  // 1-based potentials; column 0 is the virtual root of each augmenting tree.
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(m + 1, 0.0);
  std::vector<std::size_t> owner(m + 1, 0);  // row matched to column j
  std::vector<std::size_t> way(m + 1, 0);

  for (std::size_t row = 1; row <= n; ++row) {
    owner[0] = row;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) -
                           u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (owner[j] != 0) out.row_to_col[owner[j] - 1] = j - 1;
  }
  out.cost = assignment_cost(cost, out.row_to_col);
  return out;
}

double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<std::size_t>& row_to_col) {
  double total = 0.0;
  for (std::size_t r = 0; r < row_to_col.size(); ++r) {
    total += cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(row_to_col[r]));
  }
  return total;
}

}  // namespace sharpsens
