#include "turbcloud/burgers.hpp"

#include <algorithm>
#include <cmath>

#include "turbcloud/errors.hpp"
#include "turbcloud/parallel.hpp"

namespace turbcloud {

namespace {

constexpr double kDensityFloor = 1e-12;

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return (std::abs(a) < std::abs(b)) ? a : b;
}

inline std::size_t wrap(std::ptrdiff_t j, std::size_t n) {
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((j % m) + m) % m);
}

inline std::size_t cell_of(double x, double dx, std::size_t n) {
  auto j = static_cast<std::ptrdiff_t>(std::floor(x / dx));
  return wrap(j, n);
}

double wrap_position(double x, double length) {
  x = std::fmod(x, length);
  if (x < 0.0) x += length;
  return x;
}

void check_cfl(double dt, double dx, double vmax, double cfl) {
  if (vmax <= 0.0) return;
  const double admissible = cfl * dx / vmax;
  if (dt > admissible) {
    throw StabilityError(admissible,
                         "time step " + std::to_string(dt) +
                             " violates the CFL condition; admissible dt = " +
                             std::to_string(admissible));
  }
}

} // namespace

void BurgersConfig::validate() const {
  if (!(length > 0.0)) throw InvalidParameter("BurgersConfig: length must be > 0");
  if (n_cells < 4) throw InvalidParameter("BurgersConfig: n_cells must be >= 4");
  if (!(rho_f > 0.0)) throw InvalidParameter("BurgersConfig: rho_f must be > 0");
  if (!(tau_p > 0.0)) throw InvalidParameter("BurgersConfig: tau_p must be > 0");
  if (kappa_m < 0.0) throw InvalidParameter("BurgersConfig: kappa_m must be >= 0");
  if (n_particles < 0) throw InvalidParameter("BurgersConfig: n_particles must be >= 0");
  if (!(dt > 0.0)) throw InvalidParameter("BurgersConfig: dt must be > 0");
  if (!(t_end > 0.0)) throw InvalidParameter("BurgersConfig: t_end must be > 0");
  if (nu_gas < 0.0) throw InvalidParameter("BurgersConfig: nu_gas must be >= 0");
}

HomogeneousPair homogeneous_solution(double t, double u0_gas,
                                     double u0_particles, double kappa,
                                     double tau_p) {
  if (kappa < 0.0) throw InvalidParameter("homogeneous_solution: kappa must be >= 0");
  if (!(tau_p > 0.0)) throw InvalidParameter("homogeneous_solution: tau_p must be > 0");
  const double eq = (kappa * u0_particles + u0_gas) / (1.0 + kappa);
  const double decay = std::exp(-(1.0 + kappa) * t / tau_p);
  // (u0_gas - eq)/kappa = (u0_gas - u0_particles)/(1 + kappa): regular at kappa = 0
  const double slip = (u0_gas - u0_particles) / (1.0 + kappa);
  HomogeneousPair out;
  out.gas = eq + kappa * slip * decay;
  out.particles = eq - slip * decay;
  return out;
}

double godunov_flux(double uL, double uR) {
  if (uL <= uR) {
    // rarefaction; sonic point u = 0 inside the fan gives zero flux
    if (uL < 0.0 && uR > 0.0) return 0.0;
    return 0.5 * std::min(uL * uL, uR * uR);
  }
  // shock with speed s = (uL + uR)/2
  const double s = 0.5 * (uL + uR);
  return (s >= 0.0) ? 0.5 * uL * uL : 0.5 * uR * uR;
}

std::vector<double> deposit_drag(const BurgersState& s, const BurgersConfig& cfg) {
  const std::size_t nc = s.gas_u.size();
  const double dx = cfg.dx();
  std::vector<double> src(nc, 0.0);
  const double w = s.m_p / (cfg.rho_f * dx * cfg.tau_p);
  for (std::size_t i = 0; i < s.part_x.size(); ++i) {
    const std::size_t j = cell_of(s.part_x[i], dx, nc);
    src[j] += w * (s.part_v[i] - s.gas_u[j]);
  }
  return src;
}

namespace {

// Gas update shared by both schemes: MUSCL-Hancock Godunov when
// second_order, plain Godunov otherwise, plus the drag source and the
// optional physical diffusion.
void update_gas(std::vector<double>& u, const std::vector<double>& source,
                const BurgersConfig& cfg, double dt, bool second_order) {
  const std::size_t nc = u.size();
  const double dx = cfg.dx();
  std::vector<double> flux(nc); // flux[j] = F_{j+1/2}
  if (!second_order) {
    for (std::size_t j = 0; j < nc; ++j) {
      flux[j] = godunov_flux(u[j], u[wrap(static_cast<std::ptrdiff_t>(j) + 1, nc)]);
    }
  } else {
    std::vector<double> west(nc), east(nc);
    for (std::size_t j = 0; j < nc; ++j) {
      const double um = u[wrap(static_cast<std::ptrdiff_t>(j) - 1, nc)];
      const double up = u[wrap(static_cast<std::ptrdiff_t>(j) + 1, nc)];
      const double slope = minmod(u[j] - um, up - u[j]);
      double w = u[j] - 0.5 * slope;
      double e = u[j] + 0.5 * slope;
      // Hancock half-step with the cell's own face fluxes
      const double corr = 0.5 * dt / dx * (0.5 * w * w - 0.5 * e * e);
      w += corr;
      e += corr;
      west[j] = w;
      east[j] = e;
    }
    for (std::size_t j = 0; j < nc; ++j) {
      flux[j] = godunov_flux(east[j], west[wrap(static_cast<std::ptrdiff_t>(j) + 1, nc)]);
    }
  }
  std::vector<double> un(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    const double fm = flux[wrap(static_cast<std::ptrdiff_t>(j) - 1, nc)];
    un[j] = u[j] - dt / dx * (flux[j] - fm) + dt * source[j];
  }
  if (cfg.nu_gas > 0.0) {
    for (std::size_t j = 0; j < nc; ++j) {
      const double um = u[wrap(static_cast<std::ptrdiff_t>(j) - 1, nc)];
      const double up = u[wrap(static_cast<std::ptrdiff_t>(j) + 1, nc)];
      un[j] += cfg.nu_gas * dt / (dx * dx) * (up - 2.0 * u[j] + um);
    }
  }
  u.swap(un);
}

} // namespace

void step_lagrangian(BurgersState& s, const BurgersConfig& cfg, double dt) {
  const std::size_t nc = s.gas_u.size();
  const double dx = cfg.dx();
  double vmax = 0.0;
  for (double u : s.gas_u) vmax = std::max(vmax, std::abs(u));
  check_cfl(dt, dx, vmax, cfg.cfl);

  const std::vector<double> source = deposit_drag(s, cfg);

  // particles first, against the step-start gas (unsplit explicit)
  const std::size_t np = s.part_x.size();
  std::vector<double> u0 = s.gas_u;
  if (cfg.pusher == ParticlePusher::euler) {
    for (std::size_t i = 0; i < np; ++i) {
      const std::size_t j = cell_of(s.part_x[i], dx, nc);
      const double v = s.part_v[i];
      s.part_x[i] = wrap_position(s.part_x[i] + dt * v, cfg.length);
      s.part_v[i] = v + dt * (u0[j] - v) / cfg.tau_p;
    }
  } else {
    // RK4 against the frozen piecewise-constant gas
    for (std::size_t i = 0; i < np; ++i) {
      const double x = s.part_x[i];
      const double v = s.part_v[i];
      auto acc = [&](double xx, double vv) {
        return (u0[cell_of(wrap_position(xx, cfg.length), dx, nc)] - vv) / cfg.tau_p;
      };
      const double k1x = v, k1v = acc(x, v);
      const double k2x = v + 0.5 * dt * k1v, k2v = acc(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v);
      const double k3x = v + 0.5 * dt * k2v, k3v = acc(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v);
      const double k4x = v + dt * k3v, k4v = acc(x + dt * k3x, v + dt * k3v);
      s.part_x[i] = wrap_position(x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x), cfg.length);
      s.part_v[i] = v + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
  }

  update_gas(s.gas_u, source, cfg, dt, /*second_order=*/false);
  s.time += dt;
}

std::vector<double> EulerianMomentState::disperse_velocity(double floor) const {
  std::vector<double> u(number_density.size(), 0.0);
  for (std::size_t j = 0; j < u.size(); ++j) {
    u[j] = (number_density[j] > 10.0 * floor)
               ? momentum_density[j] / number_density[j]
               : 0.0;
  }
  return u;
}

void step_eulerian_empirical(EulerianMomentState& s, const BurgersConfig& cfg,
                             double dt) {
  const std::size_t nc = s.gas_u.size();
  const double dx = cfg.dx();
  const std::vector<double> ul = s.disperse_velocity(kDensityFloor);
  double vmax = 0.0;
  for (std::size_t j = 0; j < nc; ++j) {
    vmax = std::max(vmax, std::max(std::abs(s.gas_u[j]), std::abs(ul[j])));
  }
  check_cfl(dt, dx, vmax, cfg.cfl);

  const auto& n = s.number_density;
  // minmod reconstruction of (n, u_l); slopes vanish near vacuum
  std::vector<double> nW(nc), nE(nc), uW(nc), uE(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    const std::size_t jm = wrap(static_cast<std::ptrdiff_t>(j) - 1, nc);
    const std::size_t jp = wrap(static_cast<std::ptrdiff_t>(j) + 1, nc);
    double sn = 0.0, su = 0.0;
    const bool near_vacuum = n[j] < 1e3 * kDensityFloor ||
                             n[jm] < 1e3 * kDensityFloor ||
                             n[jp] < 1e3 * kDensityFloor;
    if (!near_vacuum) {
      sn = minmod(n[j] - n[jm], n[jp] - n[j]);
      su = minmod(ul[j] - ul[jm], ul[jp] - ul[j]);
    }
    nW[j] = n[j] - 0.5 * sn;
    nE[j] = n[j] + 0.5 * sn;
    uW[j] = ul[j] - 0.5 * su;
    uE[j] = ul[j] + 0.5 * su;
    // face density can only undershoot by the slope limiter's half-width
    nW[j] = std::max(nW[j], 0.0);
    nE[j] = std::max(nE[j], 0.0);
  }
  // Hancock half-step on the conservative pair (n, q)
  for (std::size_t j = 0; j < nc; ++j) {
    const double fWn = nW[j] * uW[j];
    const double fEn = nE[j] * uE[j];
    const double fWq = nW[j] * uW[j] * uW[j];
    const double fEq = nE[j] * uE[j] * uE[j];
    const double h = 0.5 * dt / dx;
    double qW = nW[j] * uW[j] + h * (fWq - fEq);
    double qE = nE[j] * uE[j] + h * (fWq - fEq);
    nW[j] += h * (fWn - fEn);
    nE[j] += h * (fWn - fEn);
    nW[j] = std::max(nW[j], 0.0);
    nE[j] = std::max(nE[j], 0.0);
    uW[j] = nW[j] > 10.0 * kDensityFloor ? qW / nW[j] : 0.0;
    uE[j] = nE[j] > 10.0 * kDensityFloor ? qE / nE[j] : 0.0;
  }
  // density-weighted upwind flux (vacuum-safe, delta-shock tolerant)
  std::vector<double> fn(nc), fq(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    const std::size_t jp = wrap(static_cast<std::ptrdiff_t>(j) + 1, nc);
    const double nL = nE[j], uL = uE[j];
    const double nR = nW[jp], uR = uW[jp];
    const double up = std::max(uL, 0.0);
    const double um = std::min(uR, 0.0);
    fn[j] = nL * up + nR * um;
    fq[j] = nL * uL * up + nR * uR * um;
  }

  const double max_n = *std::max_element(n.begin(), n.end());
  std::vector<double> n_new(nc), q_new(nc), gas_source(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    const std::size_t jm = wrap(static_cast<std::ptrdiff_t>(j) - 1, nc);
    n_new[j] = n[j] - dt / dx * (fn[j] - fn[jm]);
    q_new[j] = s.momentum_density[j] - dt / dx * (fq[j] - fq[jm]) +
               dt * n[j] * (s.gas_u[j] - ul[j]) / cfg.tau_p;
    gas_source[j] = s.m_p * n[j] / cfg.rho_f * (ul[j] - s.gas_u[j]) / cfg.tau_p;
    if (n_new[j] < 0.0) {
      if (n_new[j] < -1e-8 * std::max(max_n, 1.0)) {
        throw PositivityError(
            "eulerian step produced a negative number density (" +
            std::to_string(n_new[j]) + " in cell " + std::to_string(j) + ")");
      }
      n_new[j] = kDensityFloor;
      q_new[j] = 0.0;
      ++s.positivity_clips;
    }
  }

  update_gas(s.gas_u, gas_source, cfg, dt, /*second_order=*/true);
  s.number_density.swap(n_new);
  s.momentum_density.swap(q_new);
  s.time += dt;
}

BurgersState make_lagrangian_state(const BurgersConfig& cfg, RngStream* rng) {
  cfg.validate();
  BurgersState s;
  s.gas_u.assign(cfg.n_cells, cfg.u0_gas);
  s.m_p = cfg.n_particles > 0 ? cfg.particle_mass() : 0.0;
  s.part_x.resize(cfg.n_particles);
  s.part_v.assign(cfg.n_particles, cfg.u0_particles);
  const double dx = cfg.dx();
  for (int i = 0; i < cfg.n_particles; ++i) {
    if (rng) {
      s.part_x[i] = cfg.length * rng->uniform();
    } else {
      // equispaced at cell centers (homogeneous limit by construction)
      const double frac = (static_cast<double>(i) + 0.5) /
                          static_cast<double>(cfg.n_particles);
      s.part_x[i] = wrap_position(frac * cfg.length, cfg.length);
      (void)dx;
    }
  }
  return s;
}

EulerianMomentState make_eulerian_state(const BurgersConfig& cfg, RngStream* rng) {
  cfg.validate();
  const BurgersState seed = make_lagrangian_state(cfg, rng);
  EulerianMomentState s;
  s.gas_u = seed.gas_u;
  s.m_p = seed.m_p;
  s.number_density.assign(cfg.n_cells, 0.0);
  const double dx = cfg.dx();
  for (double x : seed.part_x) {
    s.number_density[cell_of(x, dx, static_cast<std::size_t>(cfg.n_cells))] +=
        1.0 / dx;
  }
  s.momentum_density.resize(cfg.n_cells);
  for (int j = 0; j < cfg.n_cells; ++j) {
    s.momentum_density[j] = s.number_density[j] * cfg.u0_particles;
  }
  return s;
}

namespace {

double mean_of(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  return v.empty() ? 0.0 : m / static_cast<double>(v.size());
}

} // namespace

GasCurve run_single(const BurgersConfig& cfg, RngStream* rng) {
  cfg.validate();
  GasCurve curve;
  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  const auto cadence = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.output_every / cfg.dt)));

  if (cfg.scheme == BurgersScheme::homogeneous_ode) {
    const double kappa = cfg.kappa_m;
    for (std::size_t s = 0; s <= n_steps; s += cadence) {
      const double t = static_cast<double>(s) * cfg.dt;
      const auto h = homogeneous_solution(t, cfg.u0_gas, cfg.u0_particles,
                                          kappa, cfg.tau_p);
      curve.times.push_back(t);
      curve.mean_gas_velocity.push_back(h.gas);
      curve.mean_particle_velocity.push_back(h.particles);
    }
    return curve;
  }

  if (cfg.scheme == BurgersScheme::lagrangian) {
    BurgersState st = make_lagrangian_state(cfg, rng);
    for (std::size_t s = 0;; ++s) {
      if (s % cadence == 0 || s == n_steps) {
        curve.times.push_back(st.time);
        curve.mean_gas_velocity.push_back(mean_of(st.gas_u));
        curve.mean_particle_velocity.push_back(mean_of(st.part_v));
      }
      if (s == n_steps) break;
      step_lagrangian(st, cfg, cfg.dt);
    }
    return curve;
  }

  EulerianMomentState st = make_eulerian_state(cfg, rng);
  for (std::size_t s = 0;; ++s) {
    if (s % cadence == 0 || s == n_steps) {
      curve.times.push_back(st.time);
      curve.mean_gas_velocity.push_back(mean_of(st.gas_u));
      double mass = 0, mom = 0;
      for (std::size_t j = 0; j < st.number_density.size(); ++j) {
        mass += st.number_density[j];
        mom += st.momentum_density[j];
      }
      curve.mean_particle_velocity.push_back(mass > 0.0 ? mom / mass : 0.0);
    }
    if (s == n_steps) break;
    step_eulerian_empirical(st, cfg, cfg.dt);
  }
  return curve;
}

EnsembleResult ensemble_experiment(const EnsembleConfig& cfg) {
  cfg.base.validate();
  EnsembleResult out;
  std::uint64_t realization = 0;
  for (std::size_t np : cfg.np_list) {
    BurgersConfig bc = cfg.base;
    bc.n_particles = static_cast<int>(np); // kappa_m fixed: m_p rescales
    std::vector<GasCurve> curves(cfg.reps);
    const std::uint64_t base_id = realization;
    parallel_for(cfg.reps, cfg.threads, [&](std::size_t r) {
      RngStream rng(cfg.seed, base_id + r);
      curves[r] = run_single(bc, &rng);
    });
    realization += cfg.reps;

    GasCurve mean;
    mean.times = curves[0].times;
    mean.mean_gas_velocity.assign(mean.times.size(), 0.0);
    mean.mean_particle_velocity.assign(mean.times.size(), 0.0);
    for (const auto& c : curves) {
      for (std::size_t i = 0; i < mean.times.size(); ++i) {
        mean.mean_gas_velocity[i] += c.mean_gas_velocity[i];
        mean.mean_particle_velocity[i] += c.mean_particle_velocity[i];
      }
    }
    for (std::size_t i = 0; i < mean.times.size(); ++i) {
      mean.mean_gas_velocity[i] /= static_cast<double>(cfg.reps);
      mean.mean_particle_velocity[i] /= static_cast<double>(cfg.reps);
    }

    // trapezoid integral of |<u> - hom|
    double dev = 0.0;
    for (std::size_t i = 0; i + 1 < mean.times.size(); ++i) {
      const double t0 = mean.times[i], t1 = mean.times[i + 1];
      const double d0 = std::abs(mean.mean_gas_velocity[i] -
                                 homogeneous_solution(t0, bc.u0_gas, bc.u0_particles,
                                                      bc.kappa_m, bc.tau_p)
                                     .gas);
      const double d1 = std::abs(mean.mean_gas_velocity[i + 1] -
                                 homogeneous_solution(t1, bc.u0_gas, bc.u0_particles,
                                                      bc.kappa_m, bc.tau_p)
                                     .gas);
      dev += 0.5 * (d0 + d1) * (t1 - t0);
    }
    out.n_particles.push_back(np);
    out.deviation.push_back(dev);
    out.mean_curves.push_back(std::move(mean));
  }

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < out.n_particles.size(); ++i) {
    if (out.deviation[i] > 0.0) {
      xs.push_back(static_cast<double>(out.n_particles[i]));
      ys.push_back(out.deviation[i]);
    }
  }
  if (xs.size() >= 3) out.slope = loglog_fit(xs, ys);
  return out;
}

TauEffResult fit_effective_tau(const EnsembleResult& ensemble,
                               const EnsembleConfig& cfg) {
  if (ensemble.n_particles.size() < 4) {
    throw InsufficientData("fit_effective_tau: need ensemble curves for >= 4 Np values");
  }
  const BurgersConfig& bc = cfg.base;
  TauEffResult out;
  const double lo0 = 0.25 * bc.tau_p;
  const double hi0 = 50.0 * bc.tau_p;
  const double tol = 1e-6 * bc.tau_p;
  constexpr double kGolden = 0.6180339887498949;

  for (std::size_t idx = 0; idx < ensemble.n_particles.size(); ++idx) {
    const auto& curve = ensemble.mean_curves[idx];
    auto mismatch = [&](double tau) {
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < curve.times.size(); ++i) {
        auto sq = [&](std::size_t k) {
          const double h = homogeneous_solution(curve.times[k], bc.u0_gas,
                                                bc.u0_particles, bc.kappa_m, tau)
                               .gas;
          const double d = curve.mean_gas_velocity[k] - h;
          return d * d;
        };
        acc += 0.5 * (sq(i) + sq(i + 1)) * (curve.times[i + 1] - curve.times[i]);
      }
      return acc;
    };
    double a = lo0, b = hi0;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = mismatch(x1), f2 = mismatch(x2);
    while (b - a > tol) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGolden * (b - a);
        f1 = mismatch(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGolden * (b - a);
        f2 = mismatch(x2);
      }
    }
    const double tau_eff = 0.5 * (a + b);
    if (tau_eff < lo0 + 10.0 * tol || tau_eff > hi0 - 10.0 * tol) {
      throw FitFailure("fit_effective_tau: minimum not bracketed inside [" +
                       std::to_string(lo0) + ", " + std::to_string(hi0) +
                       "] for Np = " +
                       std::to_string(ensemble.n_particles[idx]));
    }
    out.n_particles.push_back(ensemble.n_particles[idx]);
    out.interspace.push_back(bc.length /
                             static_cast<double>(ensemble.n_particles[idx]));
    out.tau_eff.push_back(tau_eff);
  }

  // linear closure on the 4 largest Np (smallest interspace)
  std::vector<std::pair<double, double>> pts; // (l_t, tau_eff)
  for (std::size_t i = 0; i < out.n_particles.size(); ++i) {
    pts.emplace_back(out.interspace[i], out.tau_eff[i]);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < 4; ++i) {
    xs.push_back(pts[i].first);
    ys.push_back(pts[i].second);
  }
  const RegressionResult fit = linear_fit(xs, ys);
  out.alpha = fit.slope;
  out.intercept = fit.intercept;
  out.r_squared = fit.r_squared;
  return out;
}

} // namespace turbcloud
