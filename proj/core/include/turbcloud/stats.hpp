/// @file stats.hpp
/// @brief Ensemble statistics shared by the experiments: sample variance,
///        log-log power-law fits with bootstrap errors, Spearman rank
///        correlation.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "turbcloud/rng.hpp"

namespace turbcloud {

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0; // bootstrap, 500 resamples
};

/// Unbiased (n-1) sample variance. n < 2 raises insufficient-data.
double variance(std::span<const double> samples);

/// Per-axis unbiased variance of an N x dim sample laid out axis-major
/// (axis 0 samples, then axis 1, ...). Returns dim entries; the caller
/// sums them for the total.
std::vector<double> variance_per_axis(const std::vector<std::vector<double>>& axes);

/// Least squares on (log x, log y). All inputs must be positive and at
/// least 3 points long. slope_stderr comes from 500 bootstrap resamples
/// drawn from `rng` (default: a fixed internal stream, so repeated calls
/// on the same data reproduce the same stderr).
RegressionResult loglog_fit(std::span<const double> x, std::span<const double> y);
RegressionResult loglog_fit(std::span<const double> x, std::span<const double> y,
                            RngStream rng);

/// Plain linear least squares y ~ a + b x (no logs); bootstrap stderr as
/// in loglog_fit. Serves the tau_eff closure fit, which is linear in the
/// interspace, not in its log.
RegressionResult linear_fit(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation with midrank ties; lengths must match and
/// be >= 3.
double spearman(std::span<const double> x, std::span<const double> y);

/// Midranks of a sample (average rank over ties), 1-based.
std::vector<double> midranks(std::span<const double> v);

} // namespace turbcloud
