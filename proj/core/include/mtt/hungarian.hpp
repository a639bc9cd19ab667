#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "mtt/domain.hpp"

namespace mtt {

/// Minimum-cost assignment of every row to a distinct column, rows <= cols.
/// Entries equal to +inf are forbidden. Returns the chosen column of each row.
/// Shortest augmenting path with potentials, O(rows^2 * cols); among equal
/// reduced costs the lowest column index wins.
/// Throws ContractViolation if rows > cols or no finite assignment exists.
std::vector<std::size_t> solve_rectangular_assignment(const Eigen::MatrixXd& cost);

/// Optimal track-to-measurement assignment under the at-most-one constraints.
/// Leaving a track unassigned costs `miss_cost`, leaving a measurement
/// unassigned costs nothing. Solved on the square (N+M) augmented matrix with
/// one miss column per track and one clutter row per measurement.
/// Infinite cost entries mark pairs that may not be assigned.
Assignment hungarian(const CostMatrix& cost, double miss_cost);

/// Total cost of an assignment under the `hungarian` objective, summed in track order.
double assignment_cost(const CostMatrix& cost, const Assignment& assignment, double miss_cost);

}  // namespace mtt
