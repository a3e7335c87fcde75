/// @file lagrangian.hpp
/// @brief Inertial particle tracking through a frozen SyntheticField:
///        linearized Stokes drag integrated with classical RK4, plus the
///        dispersion-statistics experiments.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "turbcloud/field.hpp"
#include "turbcloud/rng.hpp"

namespace turbcloud {

/// SoA particle state. Particles never interact; the field is read-only.
struct ParticleCloud {
  std::array<std::vector<double>, 3> pos; // [axis][particle], unused axes empty
  std::array<std::vector<double>, 3> vel;
  double tau_p = 1.0;
  int dim = 3;

  std::size_t count() const { return pos[0].size(); }
  void resize(std::size_t n, int d);
};

/// Right-hand side of the drag system for one particle:
///   dx/dt = c,  dc/dt = (u_f(t, x) - c) / tau_p.
struct DragRhs {
  std::array<double, 3> dxdt;
  std::array<double, 3> dcdt;
};
DragRhs drag_rhs(double t, const std::array<double, 3>& x,
                 const std::array<double, 3>& c, const SyntheticField& f,
                 double tau_p);

/// One classical four-stage RK4 step of the whole cloud, in place.
/// Work is partitioned into fixed 1024-particle chunks; the result is
/// identical for every thread count.
void rk4_step(ParticleCloud& cloud, const SyntheticField& f, double t, double dt,
              unsigned threads = 0);

struct DispersionSeries {
  std::vector<double> times;
  std::vector<std::array<double, 3>> variance_per_axis; // unused axes zero
  std::vector<double> variance_total;
};

enum class InitialVelocity {
  zero,          // expose the relaxation transient (default)
  fluid_velocity // released in equilibrium with the local fluid
};

struct DispersionConfig {
  std::size_t n_particles = 10000;
  double tau_p = 1.0;
  double dt = 1e-3;
  double t_end = 100.0;
  double output_every = 0.1;
  /// Initial positions are uniform in [0, box_length)^dim; default one
  /// integral length 2*pi/k0 per side (box_length <= 0 selects that).
  double box_length = -1.0;
  InitialVelocity init_velocity = InitialVelocity::zero;
  unsigned threads = 0;
};

/// One field realization, uniform initial positions, velocities per
/// config; records per-axis position variance on the output cadence.
DispersionSeries simulate_dispersion(const SpectrumParams& p,
                                     const DispersionConfig& cfg, RngStream rng);

/// Same run as simulate_dispersion on an externally supplied field.
DispersionSeries simulate_dispersion_on_field(const SyntheticField& field,
                                              const DispersionConfig& cfg,
                                              RngStream rng);

struct TrajectoryDump {
  std::vector<double> times;
  // tracks[p][output_index][axis]
  std::vector<std::vector<std::array<double, 3>>> tracks;
};

/// Bookkeeping variant emitting the first min(n_tracks, N) particle
/// trajectories on the output cadence.
TrajectoryDump trajectory_dump(const SpectrumParams& p,
                               const DispersionConfig& cfg,
                               std::size_t n_tracks, RngStream rng);

/// Max particle speed over the cloud (velocity-confinement checks).
double max_speed(const ParticleCloud& cloud);

} // namespace turbcloud
