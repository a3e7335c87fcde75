#include "turbcloud/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "turbcloud/errors.hpp"

namespace turbcloud {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGaussN = 8;
constexpr double kGaussX[kGaussN] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGaussW[kGaussN] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

constexpr int kPanels = 3000;
constexpr double kKminFactor = 1e-6; // k_min = k0 * 1e-6
constexpr double kKmaxFactor = 40.0; // k_max = 40 / eta (exp tail ~ e^-200)

// Small-k prefactor: E ~ A k^2 with A = (9/4) eps^(2/3) 6.78^(-11/6) k0^(-11/3).
double small_k_prefactor(const SpectrumParams& p) {
  return 2.25 * std::pow(p.epsilon, 2.0 / 3.0) *
         std::pow(6.78, -11.0 / 6.0) * std::pow(p.k0, -11.0 / 3.0);
}

// Same integral with epsilon = 1; the true total is eps^(2/3) times this.
double unit_total_energy(double k0, double eta) {
  SpectrumParams q;
  q.u0 = 1.0;
  q.k0 = k0;
  q.epsilon = 1.0;
  q.eta = eta;
  CumulativeSpectrum cum(q);
  return cum.total();
}

} // namespace

std::vector<std::string> SpectrumParams::validate() const {
  if (!(u0 > 0.0)) throw InvalidParameter("SpectrumParams: u0 must be > 0");
  if (!(k0 > 0.0)) throw InvalidParameter("SpectrumParams: k0 must be > 0");
  if (!(epsilon > 0.0)) throw InvalidParameter("SpectrumParams: epsilon must be > 0");
  if (!(eta > 0.0)) throw InvalidParameter("SpectrumParams: eta must be > 0");
  if (n_modes < 1) throw InvalidParameter("SpectrumParams: n_modes must be >= 1");
  if (dim < 1 || dim > 3) throw InvalidParameter("SpectrumParams: dim must be 1, 2 or 3");
  std::vector<std::string> warnings;
  if (a_hunt < 0.4 || a_hunt > 0.51) {
    warnings.push_back("a_hunt=" + std::to_string(a_hunt) +
                       " lies outside the cited range [0.4, 0.51]");
  }
  return warnings;
}

SpectrumParams resolve_spectrum_params(double u0, double k0,
                                       std::optional<double> epsilon,
                                       std::optional<double> eta,
                                       double a_hunt, int n_modes, int dim,
                                       bool divergence_free) {
  SpectrumParams p;
  p.u0 = u0;
  p.k0 = k0;
  p.a_hunt = a_hunt;
  p.n_modes = n_modes;
  p.dim = dim;
  p.divergence_free = divergence_free;
  p.eta = eta.value_or(0.01 / k0);
  if (epsilon.has_value()) {
    p.epsilon = *epsilon;
  } else {
    // total(eps) = eps^(2/3) * total(1): one closed-form calibration step
    // makes the partition targets exactly reachable.
    const double t1 = unit_total_energy(k0, p.eta);
    const double target = 1.5 * u0 * u0;
    p.epsilon = std::pow(target / t1, 1.5);
  }
  p.validate();
  return p;
}

double pope_energy(double k_mag, const SpectrumParams& p) {
  if (!(k_mag > 0.0)) {
    throw InvalidParameter("pope_energy(): k_mag must be > 0, got " +
                           std::to_string(k_mag));
  }
  const double x = k_mag / p.k0;
  const double fL = std::pow(x / std::sqrt(x * x + 6.78), 11.0 / 3.0);
  const double y = k_mag * p.eta;
  const double y4 = y * y * y * y;
  constexpr double c4 = 0.4 * 0.4 * 0.4 * 0.4;
  const double feta = std::exp(-5.2 * (std::pow(y4 + c4, 0.25) - 0.4));
  return 2.25 * std::pow(p.epsilon, 2.0 / 3.0) * std::pow(k_mag, -5.0 / 3.0) *
         fL * feta;
}

CumulativeSpectrum::CumulativeSpectrum(const SpectrumParams& p) : params_(p) {
  p.validate();
  const double k_min = kKminFactor * p.k0;
  const double k_max = kKmaxFactor / p.eta;
  const double l_min = std::log(k_min);
  const double l_max = std::log(std::max(k_max, k_min * 2.0));

  log_k_.resize(kPanels + 1);
  prefix_.resize(kPanels + 1);
  for (int i = 0; i <= kPanels; ++i) {
    log_k_[i] = l_min + (l_max - l_min) * static_cast<double>(i) / kPanels;
  }
  head_ = small_k_prefactor(p) * k_min * k_min * k_min / 3.0;
  prefix_[0] = head_;
  for (int i = 0; i < kPanels; ++i) {
    const double a = log_k_[i];
    const double b = log_k_[i + 1];
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double panel = 0.0;
    for (int g = 0; g < kGaussN; ++g) {
      const double k = std::exp(mid + half * kGaussX[g]);
      panel += kGaussW[g] * pope_energy(k, p) * k; // dk = k dlog(k)
    }
    prefix_[i + 1] = prefix_[i] + half * panel;
  }
  total_ = prefix_.back();
}

double CumulativeSpectrum::operator()(double k) const {
  if (k < 0.0) {
    throw InvalidParameter("cumulative_energy(): k_mag must be >= 0");
  }
  if (k == 0.0) return 0.0;
  const double lk = std::log(k);
  if (lk <= log_k_.front()) {
    return small_k_prefactor(params_) * k * k * k / 3.0;
  }
  if (lk >= log_k_.back()) return total_;
  const auto it = std::upper_bound(log_k_.begin(), log_k_.end(), lk);
  const auto i = static_cast<std::size_t>(it - log_k_.begin()) - 1;
  // partial panel [log_k_[i], lk]
  const double a = log_k_[i];
  const double mid = 0.5 * (a + lk);
  const double half = 0.5 * (lk - a);
  double panel = 0.0;
  for (int g = 0; g < kGaussN; ++g) {
    const double kk = std::exp(mid + half * kGaussX[g]);
    panel += kGaussW[g] * pope_energy(kk, params_) * kk;
  }
  return prefix_[i] + half * panel;
}

double CumulativeSpectrum::mode_target(int n) const {
  return 1.5 * params_.u0 * params_.u0 *
         (2.0 * static_cast<double>(n) - 1.0) /
         (2.0 * static_cast<double>(params_.n_modes));
}

double CumulativeSpectrum::invert(double target) const {
  if (target <= 0.0) {
    throw InvalidParameter("CumulativeSpectrum::invert(): target must be > 0");
  }
  if (target > total_) {
    throw SpectrumNormalizationError(
        total_, target,
        "mode energy target " + std::to_string(target) +
            " exceeds the total spectral energy " + std::to_string(total_) +
            "; the (u0, epsilon, eta) choice cannot support the equal-energy "
            "partition");
  }
  double lo = std::exp(log_k_.front());
  double hi = std::exp(log_k_.back());
  // below the table the analytic head applies; make sure lo brackets
  if ((*this)(lo) > target) {
    const double A = small_k_prefactor(params_);
    return std::cbrt(3.0 * target / A);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if ((hi - lo) <= 1e-10 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double cumulative_energy(double k_mag, const SpectrumParams& p) {
  if (k_mag < 0.0) {
    throw InvalidParameter("cumulative_energy(): k_mag must be >= 0");
  }
  if (k_mag == 0.0) return 0.0;
  return CumulativeSpectrum(p)(k_mag);
}

double invert_mode_wavenumber(int n, const SpectrumParams& p) {
  if (n < 1 || n > p.n_modes) {
    throw InvalidParameter("invert_mode_wavenumber(): n must be in 1..n_modes");
  }
  CumulativeSpectrum cum(p);
  return cum.invert(cum.mode_target(n));
}

} // namespace turbcloud
