/// @file sine1d.hpp
/// @brief The one-sine 1D systems: a single forcing wave in the drag law
///        and its autonomous reduced form, plus the drift/oscillation
///        diagnostics that expose the non-diffusive behavior.
///
/// Convention: the forcing is sin(2*pi*(omega*t + k*X) + phi), i.e.
/// omega and k are in cycles, not radians (unlike the spectral field,
/// which is radian-based).
#pragma once

#include <vector>

namespace turbcloud {

struct SineParams {
  double a = 1.0;      // amplitude (m/s)
  double omega = 2.0;  // frequency (cycles/s)
  double k = 1.0;      // wavenumber (cycles/m)
  double phi = 0.0;    // phase (radians)
  double tau_p = 1.0;  // relaxation time (s)
  // reduced-system analogues (dimensionless form)
  double a_red = 1.0;
  double omega_red = 2.0;
};

struct SineTrajectory {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> c;
  // reduced runs also carry the transformed variables Y = X' - omega t,
  // V = C' - omega; empty for the full system
  std::vector<double> y;
  std::vector<double> v;
};

/// RK4 trajectory of dX = C dt, dC = (a sin(2pi(omega t + k X) + phi) - C)/tau_p.
SineTrajectory simulate_full(const SineParams& p, double x0, double c0,
                             double dt, double t_end, double output_every = 0.0);

/// RK4 trajectory of the autonomous reduced system
/// dX' = C' dt, dC' = (a' sin(2pi X') + omega - C')/tau_p, with the
/// proof's transformed variables recorded alongside.
SineTrajectory simulate_reduced(const SineParams& p, double x0, double c0,
                                double dt, double t_end,
                                double output_every = 0.0);

struct DriftStats {
  double drift_slope = 0.0;          // least-squares slope of X(t)
  double oscillation_amplitude = 0.0; // max |detrended residual|
  bool variance_bounded = false;      // window test: max < 2x median
};

/// Least-squares drift of X(t), the residual band after detrending, and
/// a boundedness flag from 20 equal windows of the detrended variance
/// (bounded = max window variance < 2x median window variance).
/// Requires the drift to cover at least 10 spatial periods of the
/// forcing (period 1/k for the full system, 1 for the reduced one);
/// shorter input raises insufficient-data.
DriftStats drift_and_oscillation_stats(const SineTrajectory& traj,
                                       double spatial_period = 1.0);

} // namespace turbcloud
