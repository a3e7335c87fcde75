/// @file burgers.hpp
/// @brief Two-way coupled 1D periodic Burgers gas with drag particles:
///        Godunov finite volumes plus Lagrangian tracking or the
///        "empirical" Eulerian moment system, the homogeneous analytic
///        limit, the particle-number convergence study, and the
///        effective-relaxation-time closure fit.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "turbcloud/rng.hpp"
#include "turbcloud/stats.hpp"

namespace turbcloud {

enum class BurgersScheme { lagrangian, eulerian_empirical, homogeneous_ode };

enum class ParticlePusher { euler, rk4 };

struct BurgersConfig {
  double length = 1.0;   // L_x (m)
  int n_cells = 64;
  double rho_f = 1.0;    // gas density (kg/m^3)
  double tau_p = 0.1;    // relaxation time (s)
  double kappa_m = 0.5;  // mean mass loading; m_p = kappa_m rho_f L / N_p
  int n_particles = 64;
  double u0_gas = 1.0;
  double u0_particles = 0.0;
  double dt = 1e-4;
  double t_end = 0.5;
  double output_every = 1e-3;
  double nu_gas = 0.0;   // optional physical diffusion (central differences)
  double cfl = 0.5;
  ParticlePusher pusher = ParticlePusher::euler;
  BurgersScheme scheme = BurgersScheme::lagrangian;

  double dx() const { return length / n_cells; }
  double particle_mass() const {
    return kappa_m * rho_f * length / static_cast<double>(n_particles);
  }
  void validate() const;
};

struct BurgersState {
  std::vector<double> gas_u;             // per-cell velocity
  std::vector<double> part_x, part_v;    // positions in [0, L), velocities
  double m_p = 0.0;
  double time = 0.0;
};

struct EulerianMomentState {
  std::vector<double> number_density;    // n_l^N >= 0 (1/m)
  std::vector<double> momentum_density;  // n_l^N u_l^N
  std::vector<double> gas_u;
  double m_p = 0.0;
  double time = 0.0;
  std::uint64_t positivity_clips = 0;    // floor applications, never silent

  std::vector<double> disperse_velocity(double floor = 1e-12) const;
};

/// Closed-form homogeneous two-phase relaxation: both phases decay at
/// rate (1 + kappa)/tau_p toward (kappa u_l0 + u0) / (1 + kappa). The
/// kappa -> 0 limit is taken analytically (gas frozen, particles relax
/// at 1/tau_p).
struct HomogeneousPair {
  double gas;
  double particles;
};
HomogeneousPair homogeneous_solution(double t, double u0_gas,
                                     double u0_particles, double kappa,
                                     double tau_p);

/// Exact Godunov flux for f(u) = u^2/2 (shock / rarefaction / transonic).
double godunov_flux(double uL, double uR);

/// Per-cell drag source S_j = sum_{i in j} m_p (v_i - u_j) / (rho_f dx tau_p).
std::vector<double> deposit_drag(const BurgersState& s, const BurgersConfig& cfg);

/// Unsplit explicit step: Godunov flux difference + drag source on the
/// gas; explicit drag toward the cell value plus advection and periodic
/// wrap on the particles. Throws StabilityError naming the admissible dt
/// when dt > cfl dx / max|u|.
void step_lagrangian(BurgersState& s, const BurgersConfig& cfg, double dt);

/// Pressureless two-fluid moments with MUSCL-Hancock (minmod) and a
/// first-order fallback in near-vacuum cells, coupled to the same gas
/// scheme. Negative densities beyond roundoff raise PositivityError;
/// tiny undershoots are clipped to the floor and counted.
void step_eulerian_empirical(EulerianMomentState& s, const BurgersConfig& cfg,
                             double dt);

/// Uniform initial state with particles placed per `rng` (uniform i.i.d.)
/// or equispaced at cell centers when `rng` is null.
BurgersState make_lagrangian_state(const BurgersConfig& cfg, RngStream* rng);

/// Histogram initialization of the moment fields from a particle draw.
EulerianMomentState make_eulerian_state(const BurgersConfig& cfg, RngStream* rng);

struct GasCurve {
  std::vector<double> times;
  std::vector<double> mean_gas_velocity;
  std::vector<double> mean_particle_velocity;
};

/// One realization, recording spatial means on the output cadence.
GasCurve run_single(const BurgersConfig& cfg, RngStream* rng);

struct EnsembleResult {
  std::vector<std::size_t> n_particles;   // one entry per Np
  std::vector<double> deviation;          // time integral |<u> - hom|
  std::vector<GasCurve> mean_curves;      // ensemble means, same times
  RegressionResult slope;                 // log-log deviation vs Np
};

struct EnsembleConfig {
  BurgersConfig base;
  std::vector<std::size_t> np_list{1, 2, 4, 8, 16, 32, 64, 128, 256};
  std::size_t reps = 200;
  std::uint64_t seed = 42;
  unsigned threads = 0;
};

/// Ensemble sweep at fixed kappa_m (particle mass rescaled per Np) with
/// the scheme taken from cfg.base; the convergence metric is the
/// time-integrated absolute difference of the ensemble-mean gas velocity
/// to the homogeneous solution.
EnsembleResult ensemble_experiment(const EnsembleConfig& cfg);

struct TauEffResult {
  std::vector<std::size_t> n_particles;
  std::vector<double> interspace;  // l_t = L / Np
  std::vector<double> tau_eff;
  double alpha = 0.0;      // tau_eff ~ tau_p + alpha l_t on the smallest l_t
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Golden-section fit of the effective relaxation time per Np (matching
/// each ensemble-mean curve with the homogeneous model run at tau_eff),
/// then the linear closure fit over the 4 largest Np. Raises FitFailure
/// (naming the scanned interval) when no interior minimum is bracketed.
TauEffResult fit_effective_tau(const EnsembleResult& ensemble,
                               const EnsembleConfig& cfg);

} // namespace turbcloud
