#pragma once

#include <span>
#include <vector>

namespace reebmm::detail {

/// Optimal value of the transportation problem
///   min sum_ij cost[i * m + j] * flow_ij  s.t. row sums = supply, column sums = demand,
/// solved by successive shortest augmenting paths with Johnson potentials.
/// Supplies and demands are nonnegative and have equal totals.
double min_cost_transport(std::span<const double> supply, std::span<const double> demand,
                          std::span<const double> cost);

}  // namespace reebmm::detail
