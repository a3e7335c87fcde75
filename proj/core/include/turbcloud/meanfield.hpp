/// @file meanfield.hpp
/// @brief Synchronously coupled interacting / fictive particle ensembles
///        for the finite-N mean-field error study, with an exactly
///        Gaussian realization of the limit law for affine dynamics.
///
/// Phase space is (x, c) in R^2 (one spatial dimension). The interacting
/// system moves in the empirical interaction field, the fictive one in
/// the analytic convolution with the limit law, and both share the same
/// Brownian increments and initial data, so their pathwise distance
/// isolates the finite-N error.
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "turbcloud/field.hpp"
#include "turbcloud/rng.hpp"
#include "turbcloud/stats.hpp"

namespace turbcloud {

/// Pair interaction kernel; restricted to odd linear maps so the
/// convolution with any law is available in closed form. The printed
/// symmetry of the source ("F(-z) = F(z)") cannot give F(0) = 0; an odd
/// kernel does, and momentum exchange suggests oddness, so odd it is.
struct KernelSpec {
  enum class Kind {
    linear_velocity_alignment, // F(x, c) = (0, -lambda c)
    linear_custom              // F(z) = M z, M row-major 2x2
  };
  Kind kind = Kind::linear_velocity_alignment;
  double lambda = 1.0;
  std::array<double, 4> coefficients{0, 0, 0, 0};

  std::array<double, 2> apply(double dx, double dc) const;
  /// 2x2 matrix of the (always linear) kernel.
  std::array<double, 4> matrix() const;
};

struct ExternalFieldSpec {
  enum class Kind {
    none,
    uniform_drag,  // G = (0, (u_const - c)/tau)
    synthetic_drag // G = (0, (u_f(t, x) - c)/tau), 1D synthetic field
  };
  Kind kind = Kind::none;
  double u_const = 0.0;
  double tau = 1.0;
  const SyntheticField* field = nullptr;

  bool affine() const { return kind != Kind::synthetic_drag; }
  /// Reportable Lipschitz constant in (x, c) of the acceleration.
  double lipschitz_constant() const;
  double acceleration(double t, double x, double c) const;
};

/// Gaussian snapshot of the limit law f_t (exact for affine dynamics).
struct GaussianLaw {
  std::array<double, 2> mean{0.0, 0.0};
  std::array<double, 4> cov{1.0, 0.0, 0.0, 1.0}; // row-major, symmetric PSD

  /// Throws invalid-parameter if asymmetric or an eigenvalue < -1e-12.
  void validate() const;
  /// Lower-triangular Cholesky factor (PSD-safe).
  std::array<double, 4> cholesky() const;
  std::array<double, 2> sample(RngStream& rng) const;
};

/// Advances the exact moment ODEs of the affine McKean-Vlasov dynamics
/// by one RK4 step. Requires an affine external field; a synthetic-field
/// drag is not affine and raises unsupported-configuration.
GaussianLaw evolve_gaussian_law(const GaussianLaw& law,
                                const ExternalFieldSpec& field,
                                const KernelSpec& kernel, double sigma,
                                double dt);

class MeanFieldSystem {
public:
  MeanFieldSystem(std::size_t n, double sigma, KernelSpec kernel,
                  ExternalFieldSpec field);

  /// Draws z_i ~ law0 i.i.d. and copies them into the fictive state
  /// (z-bar_i(0) = z_i(0) exactly).
  void init_gaussian(const GaussianLaw& law0, RngStream& rng);

  /// Euler-Maruyama step of the interacting system; the Brownian
  /// increments are drawn here and retained for the fictive step.
  void em_step_interacting(double t, double dt, RngStream& rng);

  /// Matching fictive step, reusing the stored increments against the
  /// analytic convolution with `law`. Raises coupling-order if no
  /// un-consumed matching draw exists.
  void em_step_fictive(double t, double dt, const GaussianLaw& law);

  std::size_t count() const { return x_.size(); }
  std::span<const double> x() const { return x_; }
  std::span<const double> c() const { return c_; }
  std::span<const double> x_fictive() const { return xb_; }
  std::span<const double> c_fictive() const { return cb_; }

private:
  std::vector<double> x_, c_, xb_, cb_;
  std::vector<double> noise_;
  bool noise_pending_ = false;
  double sigma_;
  KernelSpec kernel_;
  ExternalFieldSpec field_;
};

struct ChaosConfig {
  std::vector<std::size_t> ensemble_sizes{8, 16, 32, 64, 128, 256, 512};
  std::size_t reps = 200;
  double lambda = 1.0;
  double sigma = 0.5;
  double t_end = 2.0;
  double dt = 1e-3;
  GaussianLaw initial_law{};
  std::uint64_t seed = 42;
  unsigned threads = 0;
};

struct ChaosRow {
  std::size_t n_particles;
  double mean_sq_coupling_dist; // E |z_1 - z_bar_1|^2
  double w2sq_onepoint;         // W2^2(mu^N, f_t samples); coupled bound for N > 256
  double w2sq_pairs;            // debiased W2^2(pair joint, f_t x f_t)
};

struct ChaosResult {
  std::vector<ChaosRow> rows;
  std::optional<RegressionResult> slope_coupling;
  std::optional<RegressionResult> slope_onepoint;
  std::optional<RegressionResult> slope_pairs;
  bool degenerate = false; // lambda = 0 or vanishing distances
};

/// Runs the coupled pair over every (N, repetition), in parallel over
/// repetitions with one substream per realization. For each repetition:
///   - the item-1 coupling distance |z_1 - z_bar_1|^2,
///   - W2^2 between the interacting empirical measure and N fresh law
///     samples (exact assignment for N <= 256, synchronous-coupling
///     upper bound beyond),
///   - the k = 2 factorization gap: W2^2 between the N/2 disjoint-pair
///     empirical measure in R^4 and product-law samples, debiased by the
///     self-distance of two fresh product-law sample sets sharing one
///     side (common random numbers).
ChaosResult chaos_convergence_experiment(const ChaosConfig& cfg);

} // namespace turbcloud
