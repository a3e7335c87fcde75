#include "turbcloud/field.hpp"

#include <cmath>

#include "turbcloud/errors.hpp"

namespace turbcloud {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm3(const std::array<double, 3>& a) { return std::sqrt(dot3(a, a)); }

} // namespace

SyntheticField::SyntheticField(SpectrumParams params,
                               std::vector<SpectralMode> modes)
    : params_(params), modes_(std::move(modes)) {
  params_.validate();
  if (static_cast<int>(modes_.size()) != params_.n_modes) {
    throw InvalidParameter("SyntheticField: modes.size() (" +
                           std::to_string(modes_.size()) +
                           ") must equal n_modes (" +
                           std::to_string(params_.n_modes) + ")");
  }
  const std::size_t n = modes_.size();
  soa_.ax.resize(n);
  soa_.ay.resize(n);
  soa_.az.resize(n);
  soa_.kx.resize(n);
  soa_.ky.resize(n);
  soa_.kz.resize(n);
  soa_.omega.resize(n);
  soa_.phase.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    soa_.ax[i] = modes_[i].amplitude[0];
    soa_.ay[i] = modes_[i].amplitude[1];
    soa_.az[i] = modes_[i].amplitude[2];
    soa_.kx[i] = modes_[i].wavevector[0];
    soa_.ky[i] = modes_[i].wavevector[1];
    soa_.kz[i] = modes_[i].wavevector[2];
    soa_.omega[i] = modes_[i].omega;
    soa_.phase[i] = modes_[i].phase;
  }
}

SyntheticField SyntheticField::sample(const SpectrumParams& params,
                                      RngStream& rng) {
  params.validate();
  const int N = params.n_modes;
  const int dim = params.dim;
  CumulativeSpectrum cum(params);

  std::vector<SpectralMode> modes;
  modes.reserve(static_cast<std::size_t>(N));
  const double amp_std = std::sqrt(2.0 * params.u0 * params.u0 /
                                   static_cast<double>(N));
  for (int n = 1; n <= N; ++n) {
    SpectralMode m;
    const double kmag = cum.invert(cum.mode_target(n));
    const auto kdir = rng.uniform_unit_vector(dim);
    for (int d = 0; d < 3; ++d) m.wavevector[d] = kmag * kdir[d];

    const double amp_mag = std::abs(rng.normal(0.0, amp_std));
    auto adir = rng.uniform_unit_vector(dim);
    if (dim >= 2 && params.divergence_free) {
      // project normal to the wavevector, renormalize; a deterministic
      // fallback covers the measure-zero near-parallel draw
      const double proj = dot3(adir, kdir);
      for (int d = 0; d < 3; ++d) adir[d] -= proj * kdir[d];
      double nrm = norm3(adir);
      if (nrm < 1e-8) {
        std::array<double, 3> seed_axis{1.0, 0.0, 0.0};
        if (std::abs(kdir[0]) > 0.9) seed_axis = {0.0, 1.0, 0.0};
        const double p = dot3(seed_axis, kdir);
        for (int d = 0; d < 3; ++d) adir[d] = seed_axis[d] - p * kdir[d];
        nrm = norm3(adir);
      }
      for (int d = 0; d < 3; ++d) adir[d] /= nrm;
    }
    for (int d = 0; d < 3; ++d) m.amplitude[d] = amp_mag * adir[d];

    m.phase = kTwoPi * rng.uniform();
    m.omega = rng.normal(0.0, params.a_hunt * kmag * params.u0);
    modes.push_back(m);
  }
  return SyntheticField(params, std::move(modes));
}

std::array<double, 3> SyntheticField::velocity(
    double t, const std::array<double, 3>& x) const {
  std::array<double, 3> u{0.0, 0.0, 0.0};
  kernel::eval_velocity_batch(soa_, params_.dim, t, &x[0], &x[1], &x[2], 1,
                              &u[0], &u[1], &u[2]);
  return u;
}

double SyntheticField::divergence(double t,
                                  const std::array<double, 3>& x) const {
  if (params_.dim < 2) {
    throw UnsupportedDimension(
        "divergence(): defined for dim >= 2 (a 1D compressible mode sum has "
        "no incompressibility constraint)");
  }
  double div = 0.0;
  for (const auto& m : modes_) {
    const double arg = m.omega * t + dot3(m.wavevector, x) + m.phase;
    div -= dot3(m.amplitude, m.wavevector) * std::sin(arg);
  }
  return div;
}

double SyntheticField::amplitude_wavenumber_sum() const {
  double s = 0.0;
  for (const auto& m : modes_) s += norm3(m.amplitude) * norm3(m.wavevector);
  return s;
}

double SyntheticField::amplitude_sum() const {
  double s = 0.0;
  for (const auto& m : modes_) s += norm3(m.amplitude);
  return s;
}

double SyntheticField::mean_kinetic_energy() const {
  double s = 0.0;
  for (const auto& m : modes_) s += dot3(m.amplitude, m.amplitude);
  return 0.25 * s;
}

BinnedSpectrum binned_mode_spectrum(const SyntheticField& field, double k_lo,
                                    double k_hi, int n_bins) {
  if (n_bins < 2) throw InvalidParameter("binned_mode_spectrum: n_bins must be >= 2");
  if (!(k_lo > 0.0) || !(k_hi > k_lo)) {
    throw InvalidParameter("binned_mode_spectrum: need 0 < k_lo < k_hi");
  }
  struct ModeEnergy {
    double k;
    double e;
  };
  std::vector<ModeEnergy> sel;
  for (const auto& m : field.modes()) {
    const double kmag = norm3(m.wavevector);
    if (kmag >= k_lo && kmag <= k_hi) {
      sel.push_back({kmag, 0.25 * dot3(m.amplitude, m.amplitude)});
    }
  }
  std::sort(sel.begin(), sel.end(),
            [](const ModeEnergy& a, const ModeEnergy& b) { return a.k < b.k; });
  if (sel.size() < 2 * static_cast<std::size_t>(n_bins)) {
    throw InsufficientData("binned_mode_spectrum: only " +
                           std::to_string(sel.size()) +
                           " modes in the requested band");
  }
  BinnedSpectrum out;
  const std::size_t m = sel.size();
  for (int b = 0; b < n_bins; ++b) {
    const std::size_t lo = b * m / n_bins;
    const std::size_t hi = (b + 1) * m / n_bins;
    if (hi - lo < 2) continue;
    // bin edges at geometric midpoints toward the neighbors
    const double edge_lo =
        (lo == 0) ? sel[lo].k : std::sqrt(sel[lo].k * sel[lo - 1].k);
    const double edge_hi =
        (hi == m) ? sel[hi - 1].k : std::sqrt(sel[hi - 1].k * sel[hi].k);
    double esum = 0.0, lsum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      esum += sel[i].e;
      lsum += std::log(sel[i].k);
    }
    out.k.push_back(std::exp(lsum / static_cast<double>(hi - lo)));
    out.energy_density.push_back(esum / (edge_hi - edge_lo));
  }
  return out;
}

} // namespace turbcloud
