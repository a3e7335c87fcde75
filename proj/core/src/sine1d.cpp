#include "turbcloud/sine1d.hpp"

#include <algorithm>
#include <cmath>

#include "turbcloud/errors.hpp"

namespace turbcloud {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

template <typename Rhs>
SineTrajectory integrate(Rhs rhs, double x0, double c0, double dt, double t_end,
                         double output_every) {
  if (!(dt > 0.0)) throw InvalidParameter("sine1d: dt must be > 0");
  const auto n_steps = static_cast<std::size_t>(std::llround(t_end / dt));
  const auto cadence =
      output_every > 0.0
          ? std::max<std::size_t>(1, static_cast<std::size_t>(
                                         std::llround(output_every / dt)))
          : std::size_t{1};
  SineTrajectory traj;
  double x = x0, c = c0;
  for (std::size_t s = 0;; ++s) {
    const double t = static_cast<double>(s) * dt;
    if (s % cadence == 0 || s == n_steps) {
      traj.t.push_back(t);
      traj.x.push_back(x);
      traj.c.push_back(c);
    }
    if (s == n_steps) break;
    const auto [k1x, k1c] = rhs(t, x, c);
    const auto [k2x, k2c] = rhs(t + 0.5 * dt, x + 0.5 * dt * k1x, c + 0.5 * dt * k1c);
    const auto [k3x, k3c] = rhs(t + 0.5 * dt, x + 0.5 * dt * k2x, c + 0.5 * dt * k2c);
    const auto [k4x, k4c] = rhs(t + dt, x + dt * k3x, c + dt * k3c);
    x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    c += dt / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
  }
  return traj;
}

} // namespace

SineTrajectory simulate_full(const SineParams& p, double x0, double c0,
                             double dt, double t_end, double output_every) {
  if (!(p.tau_p > 0.0)) throw InvalidParameter("sine1d: tau_p must be > 0");
  auto rhs = [&p](double t, double x, double c) {
    const double u = p.a * std::sin(kTwoPi * (p.omega * t + p.k * x) + p.phi);
    return std::pair<double, double>{c, (u - c) / p.tau_p};
  };
  return integrate(rhs, x0, c0, dt, t_end, output_every);
}

SineTrajectory simulate_reduced(const SineParams& p, double x0, double c0,
                                double dt, double t_end, double output_every) {
  if (!(p.tau_p > 0.0)) throw InvalidParameter("sine1d: tau_p must be > 0");
  auto rhs = [&p](double /*t*/, double x, double c) {
    const double f = p.a_red * std::sin(kTwoPi * x) + p.omega_red;
    return std::pair<double, double>{c, (f - c) / p.tau_p};
  };
  SineTrajectory traj = integrate(rhs, x0, c0, dt, t_end, output_every);
  traj.y.resize(traj.t.size());
  traj.v.resize(traj.t.size());
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    traj.y[i] = traj.x[i] - p.omega_red * traj.t[i];
    traj.v[i] = traj.c[i] - p.omega_red;
  }
  return traj;
}

DriftStats drift_and_oscillation_stats(const SineTrajectory& traj,
                                       double spatial_period) {
  const std::size_t n = traj.t.size();
  if (n < 40) {
    throw InsufficientData("drift stats: trajectory too short (" +
                           std::to_string(n) + " samples)");
  }
  // least-squares X ~ a + b t
  double mt = 0, mx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += traj.t[i];
    mx += traj.x[i];
  }
  mt /= static_cast<double>(n);
  mx /= static_cast<double>(n);
  double stt = 0, stx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (traj.t[i] - mt) * (traj.t[i] - mt);
    stx += (traj.t[i] - mt) * (traj.x[i] - mx);
  }
  DriftStats out;
  out.drift_slope = stx / stt;
  const double span = traj.t.back() - traj.t.front();
  if (std::abs(out.drift_slope) * span < 10.0 * spatial_period) {
    throw InsufficientData(
        "drift stats: trajectory covers fewer than 10 drift periods");
  }
  const double icpt = mx - out.drift_slope * mt;

  std::vector<double> resid(n);
  double amax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    resid[i] = traj.x[i] - (icpt + out.drift_slope * traj.t[i]);
    amax = std::max(amax, std::abs(resid[i]));
  }
  out.oscillation_amplitude = amax;

  // 20 windows; boundedness = max window variance < 2x median
  constexpr std::size_t kWindows = 20;
  std::vector<double> wvar;
  for (std::size_t w = 0; w < kWindows; ++w) {
    const std::size_t b = w * n / kWindows;
    const std::size_t e = (w + 1) * n / kWindows;
    if (e - b < 2) continue;
    double m = 0;
    for (std::size_t i = b; i < e; ++i) m += resid[i];
    m /= static_cast<double>(e - b);
    double v = 0;
    for (std::size_t i = b; i < e; ++i) v += (resid[i] - m) * (resid[i] - m);
    wvar.push_back(v / static_cast<double>(e - b - 1));
  }
  std::vector<double> sorted = wvar;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double mx_w = sorted.back();
  out.variance_bounded = (mx_w < 2.0 * median) || mx_w == 0.0;
  return out;
}

} // namespace turbcloud
