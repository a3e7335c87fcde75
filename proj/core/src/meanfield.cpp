#include "turbcloud/meanfield.hpp"

#include <cmath>

#include "turbcloud/errors.hpp"
#include "turbcloud/parallel.hpp"
#include "turbcloud/wasserstein.hpp"

namespace turbcloud {

std::array<double, 2> KernelSpec::apply(double dx, double dc) const {
  switch (kind) {
    case Kind::linear_velocity_alignment:
      return {0.0, -lambda * dc};
    case Kind::linear_custom:
      return {coefficients[0] * dx + coefficients[1] * dc,
              coefficients[2] * dx + coefficients[3] * dc};
  }
  return {0.0, 0.0};
}

std::array<double, 4> KernelSpec::matrix() const {
  switch (kind) {
    case Kind::linear_velocity_alignment:
      return {0.0, 0.0, 0.0, -lambda};
    case Kind::linear_custom:
      return coefficients;
  }
  return {0, 0, 0, 0};
}

double ExternalFieldSpec::lipschitz_constant() const {
  switch (kind) {
    case Kind::none:
      return 0.0;
    case Kind::uniform_drag:
      return 1.0 / tau;
    case Kind::synthetic_drag:
      // |grad_x accel| <= sum |a_n||k_n| / tau, plus the 1/tau slope in c
      return (field ? field->amplitude_wavenumber_sum() : 0.0) / tau + 1.0 / tau;
  }
  return 0.0;
}

double ExternalFieldSpec::acceleration(double t, double x, double c) const {
  switch (kind) {
    case Kind::none:
      return 0.0;
    case Kind::uniform_drag:
      return (u_const - c) / tau;
    case Kind::synthetic_drag: {
      const std::array<double, 3> pos{x, 0.0, 0.0};
      return (field->velocity(t, pos)[0] - c) / tau;
    }
  }
  return 0.0;
}

void GaussianLaw::validate() const {
  if (std::abs(cov[1] - cov[2]) > 1e-12 * (1.0 + std::abs(cov[1]))) {
    throw InvalidParameter("GaussianLaw: covariance must be symmetric");
  }
  // 2x2 eigenvalues in closed form
  const double tr = cov[0] + cov[3];
  const double det = cov[0] * cov[3] - cov[1] * cov[2];
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double lo = tr / 2.0 - disc;
  if (lo < -1e-12) {
    throw InvalidParameter("GaussianLaw: covariance not PSD (eigenvalue " +
                           std::to_string(lo) + ")");
  }
}

std::array<double, 4> GaussianLaw::cholesky() const {
  validate();
  const double a = std::sqrt(std::max(0.0, cov[0]));
  const double b = (a > 0.0) ? cov[1] / a : 0.0;
  const double d = std::sqrt(std::max(0.0, cov[3] - b * b));
  return {a, 0.0, b, d};
}

std::array<double, 2> GaussianLaw::sample(RngStream& rng) const {
  const auto L = cholesky();
  const double g1 = rng.normal(0.0, 1.0);
  const double g2 = rng.normal(0.0, 1.0);
  return {mean[0] + L[0] * g1, mean[1] + L[2] * g1 + L[3] * g2};
}

GaussianLaw evolve_gaussian_law(const GaussianLaw& law,
                                const ExternalFieldSpec& field,
                                const KernelSpec& kernel, double sigma,
                                double dt) {
  if (!field.affine()) {
    throw UnsupportedConfiguration(
        "evolve_gaussian_law(): the moment ODEs are exact only for affine "
        "external fields (none or uniform drag)");
  }
  law.validate();
  // drift(z) = (c, G(z) + M (z - mean)); A = jacobian, b(t) = offset.
  const auto M = kernel.matrix();
  double gx = 0.0, gc = 0.0, g0 = 0.0; // G_c = g0 + gx x + gc c
  if (field.kind == ExternalFieldSpec::Kind::uniform_drag) {
    g0 = field.u_const / field.tau;
    gc = -1.0 / field.tau;
  }
  // state y = (mx, mc, pxx, pxc, pcc)
  auto rhs = [&](const std::array<double, 5>& y) {
    const double mx = y[0], mc = y[1];
    const double pxx = y[2], pxc = y[3], pcc = y[4];
    // A = [[0, 1], [gx + M10, gc + M11]]; the kernel's x-row must vanish
    // for z' = (c, ...) dynamics, which both kinds guarantee via M00=M01=0
    const double a10 = gx + M[2];
    const double a11 = gc + M[3];
    std::array<double, 5> d;
    d[0] = mc;
    d[1] = g0 + gx * mx + gc * mc; // convolution term vanishes at the mean
    d[2] = 2.0 * pxc;
    d[3] = pcc + a10 * pxx + a11 * pxc;
    d[4] = 2.0 * (a10 * pxc + a11 * pcc) + 2.0 * sigma * sigma;
    return d;
  };
  std::array<double, 5> y{law.mean[0], law.mean[1], law.cov[0], law.cov[1],
                          law.cov[3]};
  const auto k1 = rhs(y);
  std::array<double, 5> y2, y3, y4;
  for (int i = 0; i < 5; ++i) y2[i] = y[i] + 0.5 * dt * k1[i];
  const auto k2 = rhs(y2);
  for (int i = 0; i < 5; ++i) y3[i] = y[i] + 0.5 * dt * k2[i];
  const auto k3 = rhs(y3);
  for (int i = 0; i < 5; ++i) y4[i] = y[i] + dt * k3[i];
  const auto k4 = rhs(y4);
  for (int i = 0; i < 5; ++i) {
    y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  GaussianLaw out;
  out.mean = {y[0], y[1]};
  out.cov = {y[2], y[3], y[3], y[4]};
  return out;
}

MeanFieldSystem::MeanFieldSystem(std::size_t n, double sigma, KernelSpec kernel,
                                 ExternalFieldSpec field)
    : x_(n, 0.0), c_(n, 0.0), xb_(n, 0.0), cb_(n, 0.0), noise_(n, 0.0),
      sigma_(sigma), kernel_(kernel), field_(field) {
  if (n == 0) throw InvalidParameter("MeanFieldSystem: need at least 1 particle");
}

void MeanFieldSystem::init_gaussian(const GaussianLaw& law0, RngStream& rng) {
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const auto z = law0.sample(rng);
    x_[i] = xb_[i] = z[0];
    c_[i] = cb_[i] = z[1];
  }
  noise_pending_ = false;
}

void MeanFieldSystem::em_step_interacting(double t, double dt, RngStream& rng) {
  if (!(dt > 0.0)) throw InvalidParameter("em_step_interacting(): dt must be > 0");
  const std::size_t n = x_.size();
  // linear kernel: (1/N) sum_j F(z_i - z_j) = F(z_i - mean(z))
  double mx = 0, mc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x_[i];
    mc += c_[i];
  }
  mx /= static_cast<double>(n);
  mc /= static_cast<double>(n);
  const double root = std::sqrt(2.0 * dt) * sigma_;
  for (std::size_t i = 0; i < n; ++i) {
    noise_[i] = rng.normal(0.0, 1.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto F = kernel_.apply(x_[i] - mx, c_[i] - mc);
    const double acc = field_.acceleration(t, x_[i], c_[i]) + F[1];
    const double xdot = c_[i] + F[0];
    x_[i] += dt * xdot;
    c_[i] += dt * acc + root * noise_[i];
  }
  noise_pending_ = true;
}

void MeanFieldSystem::em_step_fictive(double t, double dt,
                                      const GaussianLaw& law) {
  if (!noise_pending_) {
    throw CouplingOrderError(
        "em_step_fictive(): no stored noise draw; run the matching "
        "em_step_interacting first (synchronous coupling)");
  }
  const std::size_t n = xb_.size();
  const double root = std::sqrt(2.0 * dt) * sigma_;
  for (std::size_t i = 0; i < n; ++i) {
    const auto F = kernel_.apply(xb_[i] - law.mean[0], cb_[i] - law.mean[1]);
    const double acc = field_.acceleration(t, xb_[i], cb_[i]) + F[1];
    const double xdot = cb_[i] + F[0];
    xb_[i] += dt * xdot;
    cb_[i] += dt * acc + root * noise_[i];
  }
  noise_pending_ = false;
}

namespace {

struct RepResult {
  double coupling_sq = 0.0;
  double w2sq_onepoint = 0.0;
  double w2sq_pairs = 0.0;
};

RepResult run_realization(const ChaosConfig& cfg, std::size_t n,
                          RngStream rng) {
  KernelSpec kernel;
  kernel.kind = KernelSpec::Kind::linear_velocity_alignment;
  kernel.lambda = cfg.lambda;
  ExternalFieldSpec field; // none
  MeanFieldSystem sys(n, cfg.sigma, kernel, field);
  sys.init_gaussian(cfg.initial_law, rng);

  GaussianLaw law = cfg.initial_law;
  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  for (std::size_t s = 0; s < n_steps; ++s) {
    const double t = static_cast<double>(s) * cfg.dt;
    sys.em_step_interacting(t, cfg.dt, rng);
    sys.em_step_fictive(t, cfg.dt, law);
    law = evolve_gaussian_law(law, field, kernel, cfg.sigma, cfg.dt);
  }

  RepResult r;
  const auto x = sys.x();
  const auto c = sys.c();
  const double dx1 = x[0] - sys.x_fictive()[0];
  const double dc1 = c[0] - sys.c_fictive()[0];
  r.coupling_sq = dx1 * dx1 + dc1 * dc1;

  // one-point column: exact assignment when it fits, else the coupled
  // transport bound against the fictive sample of the same law
  if (n <= 256) {
    std::vector<double> emp(2 * n), ref(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      emp[2 * i] = x[i];
      emp[2 * i + 1] = c[i];
      const auto z = law.sample(rng);
      ref[2 * i] = z[0];
      ref[2 * i + 1] = z[1];
    }
    const double w = wasserstein2_exact_small(emp, ref, 2);
    r.w2sq_onepoint = w * w;
  } else {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ddx = x[i] - sys.x_fictive()[i];
      const double ddc = c[i] - sys.c_fictive()[i];
      acc += ddx * ddx + ddc * ddc;
    }
    r.w2sq_onepoint = acc / static_cast<double>(n);
  }

  // k = 2 factorization: disjoint pairs vs the product law, debiased by
  // a self-distance sharing the reference sample (common random numbers)
  const std::size_t n2 = n / 2;
  if (n2 >= 1) {
    std::vector<double> pairs(4 * n2), prod(4 * n2), prod2(4 * n2);
    for (std::size_t i = 0; i < n2; ++i) {
      pairs[4 * i + 0] = x[2 * i];
      pairs[4 * i + 1] = c[2 * i];
      pairs[4 * i + 2] = x[2 * i + 1];
      pairs[4 * i + 3] = c[2 * i + 1];
    }
    for (auto* dst : {&prod, &prod2}) {
      for (std::size_t i = 0; i < n2; ++i) {
        const auto z1 = law.sample(rng);
        const auto z2 = law.sample(rng);
        (*dst)[4 * i + 0] = z1[0];
        (*dst)[4 * i + 1] = z1[1];
        (*dst)[4 * i + 2] = z2[0];
        (*dst)[4 * i + 3] = z2[1];
      }
    }
    const double w_emp = wasserstein2_exact_small(pairs, prod, 4);
    const double w_self = wasserstein2_exact_small(prod2, prod, 4);
    r.w2sq_pairs = w_emp * w_emp - w_self * w_self;
  }
  return r;
}

} // namespace

ChaosResult chaos_convergence_experiment(const ChaosConfig& cfg) {
  if (cfg.ensemble_sizes.size() < 2) {
    throw InvalidParameter("chaos experiment: need at least 2 ensemble sizes");
  }
  for (std::size_t n : cfg.ensemble_sizes) {
    if (n < 2) throw InvalidParameter("chaos experiment: each N must be >= 2");
  }
  ChaosResult out;
  std::uint64_t realization = 0;
  for (std::size_t n : cfg.ensemble_sizes) {
    std::vector<RepResult> reps(cfg.reps);
    const std::uint64_t base = realization;
    parallel_for(cfg.reps, cfg.threads, [&](std::size_t r) {
      RngStream rng(cfg.seed, base + r);
      reps[r] = run_realization(cfg, n, rng);
    });
    realization += cfg.reps;
    ChaosRow row;
    row.n_particles = n;
    double sc = 0, so = 0, sp = 0;
    for (const auto& r : reps) {
      sc += r.coupling_sq;
      so += r.w2sq_onepoint;
      sp += r.w2sq_pairs;
    }
    row.mean_sq_coupling_dist = sc / static_cast<double>(cfg.reps);
    row.w2sq_onepoint = so / static_cast<double>(cfg.reps);
    row.w2sq_pairs = sp / static_cast<double>(cfg.reps);
    out.rows.push_back(row);
  }

  auto fit_column = [&](auto getter) -> std::optional<RegressionResult> {
    std::vector<double> xs, ys;
    for (const auto& row : out.rows) {
      const double v = getter(row);
      if (v > 0.0) {
        xs.push_back(static_cast<double>(row.n_particles));
        ys.push_back(v);
      }
    }
    if (xs.size() < 3) return std::nullopt;
    return loglog_fit(xs, ys);
  };
  out.slope_coupling =
      fit_column([](const ChaosRow& r) { return r.mean_sq_coupling_dist; });
  out.slope_onepoint =
      fit_column([](const ChaosRow& r) { return r.w2sq_onepoint; });
  out.slope_pairs = fit_column([](const ChaosRow& r) { return r.w2sq_pairs; });
  out.degenerate = !out.slope_coupling.has_value();
  return out;
}

} // namespace turbcloud
