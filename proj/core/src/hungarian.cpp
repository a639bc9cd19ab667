#include "mtt/hungarian.hpp"

#include <cmath>
#include <limits>

#include "mtt/error.hpp"

namespace mtt {

std::vector<std::size_t> solve_rectangular_assignment(const Eigen::MatrixXd& cost) {
  const Eigen::Index n = cost.rows();
  const Eigen::Index m = cost.cols();
  if (n > m) throw ContractViolation("assignment solver needs rows <= cols");
  if (n == 0) return {};

  // Forbidden entries get a finite penalty larger than any all-finite solution.
  double finite_sum = 0.0;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < m; ++c) {
      const double v = cost(r, c);
      if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
        throw ContractViolation("assignment cost must be a number below +inf or +inf");
      if (std::isfinite(v)) finite_sum += std::abs(v);
    }
  const double forbidden = 2.0 * finite_sum + 1.0;
  auto at = [&](Eigen::Index r, Eigen::Index c) {
    const double v = cost(r, c);
    return std::isfinite(v) ? v : forbidden;
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based rows/cols; column 0 is the virtual root.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<Eigen::Index> row_of_col(m + 1, 0), way(m + 1, 0);
  std::vector<double> minv(m + 1);
  std::vector<char> used(m + 1);

  for (Eigen::Index i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    Eigen::Index j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Eigen::Index i0 = row_of_col[j0];
      double delta = kInf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= m; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const Eigen::Index j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> col_of_row(static_cast<std::size_t>(n));
  for (Eigen::Index j = 1; j <= m; ++j)
    if (row_of_col[j] != 0) col_of_row[row_of_col[j] - 1] = static_cast<std::size_t>(j - 1);
  for (Eigen::Index r = 0; r < n; ++r)
    if (!std::isfinite(cost(r, static_cast<Eigen::Index>(col_of_row[r]))))
      throw ContractViolation("assignment problem has no finite solution");
  return col_of_row;
}

Assignment hungarian(const CostMatrix& cost, double miss_cost) {
  if (!(miss_cost > 0.0) || !std::isfinite(miss_cost))
    throw ContractViolation("hungarian: miss_cost must be positive and finite");
  const Eigen::Index n = cost.num_tracks();
  const Eigen::Index m = cost.num_measurements();
  constexpr double kForbidden = std::numeric_limits<double>::infinity();

  // Rows: tracks then one clutter row per measurement.
  // Cols: measurements then one miss column per track.
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, m + n);
  aug.topLeftCorner(n, m) = cost.values;
  aug.topRightCorner(n, n).setConstant(kForbidden);
  for (Eigen::Index j = 0; j < n; ++j) aug(j, m + j) = miss_cost;

  const std::vector<std::size_t> col = solve_rectangular_assignment(aug);
  std::vector<std::optional<std::size_t>> map(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j)
    if (static_cast<Eigen::Index>(col[j]) < m) map[j] = col[j];
  return Assignment::from_track_map(map, static_cast<std::size_t>(m));
}

double assignment_cost(const CostMatrix& cost, const Assignment& assignment, double miss_cost) {
  double total = 0.0;
  for (std::size_t j = 0; j < assignment.num_tracks(); ++j) {
    const auto m = assignment.measurement_of(j);
    total += m ? cost.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(*m)) : miss_cost;
  }
  return total;
}

}  // namespace mtt
