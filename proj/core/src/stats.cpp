#include "turbcloud/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "turbcloud/errors.hpp"

namespace turbcloud {

namespace {

constexpr int kBootstrapResamples = 500;
constexpr std::uint64_t kBootstrapSeed = 0x5eedb007;

struct LsqFit {
  double slope, intercept, r_squared;
};

LsqFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LsqFit f;
  f.slope = (sxx > 0.0) ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  if (syy <= 0.0) {
    // Constant y: the fit is exact by definition.
    f.r_squared = 1.0;
  } else {
    double ssres = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (f.intercept + f.slope * x[i]);
      ssres += r * r;
    }
    f.r_squared = std::clamp(1.0 - ssres / syy, 0.0, 1.0);
  }
  return f;
}

RegressionResult fit_with_bootstrap(const std::vector<double>& x,
                                    const std::vector<double>& y, RngStream rng) {
  const std::size_t n = x.size();
  const LsqFit base = least_squares(x, y);
  RegressionResult out;
  out.slope = base.slope;
  out.intercept = base.intercept;
  out.r_squared = base.r_squared;

  std::vector<double> bx(n), by(n), slopes;
  slopes.reserve(kBootstrapResamples);
  for (int b = 0; b < kBootstrapResamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
      bx[i] = x[j];
      by[i] = y[j];
    }
    slopes.push_back(least_squares(bx, by).slope);
  }
  double m = 0;
  for (double s : slopes) m += s;
  m /= static_cast<double>(slopes.size());
  double v = 0;
  for (double s : slopes) v += (s - m) * (s - m);
  out.slope_stderr = std::sqrt(v / static_cast<double>(slopes.size() - 1));
  return out;
}

} // namespace

double variance(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) {
    throw InsufficientData("variance(): need at least 2 samples, got " +
                           std::to_string(n));
  }
  double mean = 0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(n);
  double acc = 0;
  for (double s : samples) acc += (s - mean) * (s - mean);
  return acc / static_cast<double>(n - 1);
}

std::vector<double> variance_per_axis(const std::vector<std::vector<double>>& axes) {
  std::vector<double> out;
  out.reserve(axes.size());
  for (const auto& a : axes) out.push_back(variance(a));
  return out;
}

RegressionResult loglog_fit(std::span<const double> x, std::span<const double> y) {
  return loglog_fit(x, y, RngStream(kBootstrapSeed, 0));
}

RegressionResult loglog_fit(std::span<const double> x, std::span<const double> y,
                            RngStream rng) {
  if (x.size() != y.size()) {
    throw InvalidInput("loglog_fit(): length mismatch");
  }
  if (x.size() < 3) {
    throw InsufficientData("loglog_fit(): need at least 3 points, got " +
                           std::to_string(x.size()));
  }
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw InvalidInput("loglog_fit(): inputs must be strictly positive (index " +
                         std::to_string(i) + ")");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_with_bootstrap(lx, ly, rng);
}

RegressionResult linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidInput("linear_fit(): length mismatch");
  }
  if (x.size() < 3) {
    throw InsufficientData("linear_fit(): need at least 3 points, got " +
                           std::to_string(x.size()));
  }
  std::vector<double> vx(x.begin(), x.end()), vy(y.begin(), y.end());
  return fit_with_bootstrap(vx, vy, RngStream(kBootstrapSeed, 1));
}

std::vector<double> midranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    // ties share the average of the ranks they span (1-based)
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidInput("spearman(): length mismatch");
  }
  if (x.size() < 3) {
    throw InsufficientData("spearman(): need at least 3 points");
  }
  const std::vector<double> rx = midranks(x);
  const std::vector<double> ry = midranks(y);
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0; // a constant input has no ordering
  return sxy / std::sqrt(sxx * syy);
}

} // namespace turbcloud
