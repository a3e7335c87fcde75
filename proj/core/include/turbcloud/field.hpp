/// @file field.hpp
/// @brief Synthetic spectral turbulence: a frozen sum of random Fourier
///        modes u(t,x) = sum_n a_n cos(omega_n t + k_n . x + phi_n),
///        sampled against the Pope spectrum with the equal-energy
///        partition and the Gaussian frequency model.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "turbcloud/rng.hpp"
#include "turbcloud/spectrum.hpp"

namespace turbcloud {

struct SpectralMode {
  std::array<double, 3> amplitude{0, 0, 0};  // m/s
  std::array<double, 3> wavevector{0, 0, 0}; // 1/m
  double omega = 0.0;                        // 1/s (radian convention)
  double phase = 0.0;                        // [0, 2*pi)
};

/// Structure-of-arrays mirror of the mode list; what the batched
/// evaluation kernel actually reads.
struct FieldSoA {
  std::vector<double> ax, ay, az;
  std::vector<double> kx, ky, kz;
  std::vector<double> omega, phase;
  std::size_t size() const { return omega.size(); }
};

class SyntheticField {
public:
  SyntheticField(SpectrumParams params, std::vector<SpectralMode> modes);

  /// Draw a full mode set:
  ///   |k_n|  from the equal-energy inversion,
  ///   k direction isotropic,
  ///   |a_n| = |N(0, sqrt(2 u0^2 / N))|,
  ///   a direction isotropic, then (dim >= 2, divergence_free) projected
  ///     normal to k_n and renormalized,
  ///   phi uniform on [0, 2*pi),
  ///   omega ~ N(0, a_hunt |k_n| u0).
  /// Draw order per mode is fixed (k dir, |a|, a dir, phi, omega) so a
  /// given (seed, stream) always yields the same field.
  static SyntheticField sample(const SpectrumParams& params, RngStream& rng);

  const SpectrumParams& params() const { return params_; }
  const std::vector<SpectralMode>& modes() const { return modes_; }
  const FieldSoA& soa() const { return soa_; }
  int dim() const { return params_.dim; }

  /// Exact mode sum at one point; the same code path as the batched
  /// kernel, so integrator and pointwise queries agree.
  std::array<double, 3> velocity(double t, const std::array<double, 3>& x) const;

  /// Analytic divergence sum_n -(a_n . k_n) sin(arg); dim must be >= 2.
  double divergence(double t, const std::array<double, 3>& x) const;

  /// sum_n |a_n| |k_n|; scales roundoff bounds for divergence tests and
  /// the Lipschitz constant of the field.
  double amplitude_wavenumber_sum() const;

  /// max_t,x |u| upper bound: sum_n |a_n|.
  double amplitude_sum() const;

  /// Mean kinetic energy density of the mode sum over phases,
  /// sum_n |a_n|^2 / 4 (space-time average of |u|^2 / 2).
  double mean_kinetic_energy() const;

private:
  SpectrumParams params_;
  std::vector<SpectralMode> modes_;
  FieldSoA soa_;
};

/// Empirical spectrum of a sampled field: modes with |k| in [k_lo, k_hi]
/// grouped into `n_bins` equal-count groups; each bin reports the
/// geometric-mean wavenumber and the summed mode energy |a_n|^2/4 per
/// unit wavenumber. The inertial-range slope is the log-log fit of the
/// bins.
struct BinnedSpectrum {
  std::vector<double> k;
  std::vector<double> energy_density;
};
BinnedSpectrum binned_mode_spectrum(const SyntheticField& field, double k_lo,
                                    double k_hi, int n_bins);

namespace kernel {

/// u(t, x_i) for a batch of positions (SoA per axis; unused axes may be
/// null for dim < 3). Writes the velocity into (ux, uy, uz). n is
/// unrestricted; the kernel slices internally.
void eval_velocity_batch(const FieldSoA& f, int dim, double t,
                         const double* x, const double* y, const double* z,
                         std::size_t n, double* ux, double* uy, double* uz);

} // namespace kernel

} // namespace turbcloud
