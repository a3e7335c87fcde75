#include "turbcloud/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "turbcloud/errors.hpp"

namespace turbcloud {

namespace {

constexpr std::size_t kExactCap = 256;

} // namespace

double wasserstein2_1d(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidInput(
        "wasserstein2_1d(): equal-weight empirical measures need equal "
        "sample counts (" +
        std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw InvalidInput("wasserstein2_1d(): empty input");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = sa[i] - sb[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(sa.size()));
}

// Jonker-Volgenant style shortest augmenting path assignment with dual
// potentials; exact for real-valued costs, O(n^3).
std::vector<std::size_t> solve_assignment(std::span<const double> cost,
                                          std::size_t n) {
  if (cost.size() != n * n) {
    throw InvalidInput("solve_assignment(): cost matrix must be n x n");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based internal arrays; row0/col0 are sentinels.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0); // match[col] = row
  std::vector<std::size_t> way(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

double wasserstein2_exact_small(std::span<const double> a,
                                std::span<const double> b, std::size_t dim) {
  if (dim == 0) throw InvalidInput("wasserstein2_exact_small(): dim must be >= 1");
  if (a.size() % dim != 0 || b.size() % dim != 0) {
    throw InvalidInput("wasserstein2_exact_small(): data size not a multiple of dim");
  }
  const std::size_t n = a.size() / dim;
  const std::size_t m = b.size() / dim;
  if (n != m) {
    throw InvalidInput(
        "wasserstein2_exact_small(): equal-weight empirical measures need "
        "equal sample counts (" +
        std::to_string(n) + " vs " + std::to_string(m) + ")");
  }
  if (n == 0) throw InvalidInput("wasserstein2_exact_small(): empty input");
  if (n > kExactCap) {
    throw SizeError(
        "wasserstein2_exact_small(): count " + std::to_string(n) +
        " exceeds the cap of " + std::to_string(kExactCap) +
        "; use wasserstein2_1d on projections or the coupled estimator");
  }
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double c = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = a[i * dim + d] - b[j * dim + d];
        c += diff * diff;
      }
      cost[i * n + j] = c;
    }
  }
  const auto assign = solve_assignment(cost, n);
  // accumulate in row order so equal matchings give bit-equal costs
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += cost[i * n + assign[i]];
  return std::sqrt(acc / static_cast<double>(n));
}

} // namespace turbcloud
