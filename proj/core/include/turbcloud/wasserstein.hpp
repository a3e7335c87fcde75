/// @file wasserstein.hpp
/// @brief Exact Wasserstein-2 distances between equal-weight empirical
///        measures: the sorted 1D form and an optimal-assignment solver
///        for small multi-dimensional sample sets.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace turbcloud {

/// Exact W2 between two equal-count 1D empirical measures: sort both,
/// root mean square of the paired differences.
double wasserstein2_1d(std::span<const double> a, std::span<const double> b);

/// Points are row-major n x dim. Counts must match and be <= 256 (cubic
/// assignment cost); larger sets should use the 1D or coupled estimator.
/// Returns sqrt of the mean optimal squared-distance cost.
double wasserstein2_exact_small(std::span<const double> a,
                                std::span<const double> b, std::size_t dim);

/// Exact optimal assignment on a dense square cost matrix (row-major
/// n x n), Jonker-Volgenant shortest augmenting paths. Returns the column
/// assigned to each row. Exposed for the transport-plan consumers and
/// tested against factorial brute force.
std::vector<std::size_t> solve_assignment(std::span<const double> cost,
                                          std::size_t n);

} // namespace turbcloud
