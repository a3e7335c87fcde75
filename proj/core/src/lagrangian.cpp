#include "turbcloud/lagrangian.hpp"

#include <cmath>
#include <cstring>

#include "turbcloud/errors.hpp"
#include "turbcloud/parallel.hpp"

namespace turbcloud {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::size_t kChunk = 1024;

// Stage buffers for one chunk of particles. Axis-major fixed storage.
struct StageBuf {
  std::vector<double> xs[3];  // stage positions
  std::vector<double> u[3];   // fluid velocity at stage positions
  std::vector<double> kx[3];  // accumulated dx/dt combination
  std::vector<double> kc[3];  // accumulated dc/dt combination
  std::vector<double> cs[3];  // stage velocities
  explicit StageBuf(std::size_t n, int dim) {
    for (int d = 0; d < dim; ++d) {
      xs[d].resize(n);
      u[d].resize(n);
      kx[d].resize(n);
      kc[d].resize(n);
      cs[d].resize(n);
    }
  }
};

} // namespace

void ParticleCloud::resize(std::size_t n, int d) {
  dim = d;
  for (int a = 0; a < 3; ++a) {
    if (a < d) {
      pos[a].assign(n, 0.0);
      vel[a].assign(n, 0.0);
    } else {
      pos[a].clear();
      vel[a].clear();
    }
  }
}

DragRhs drag_rhs(double t, const std::array<double, 3>& x,
                 const std::array<double, 3>& c, const SyntheticField& f,
                 double tau_p) {
  if (!(tau_p > 0.0)) {
    throw InvalidParameter("drag_rhs(): tau_p must be > 0");
  }
  DragRhs r;
  const auto u = f.velocity(t, x);
  for (int d = 0; d < 3; ++d) {
    r.dxdt[d] = c[d];
    r.dcdt[d] = (u[d] - c[d]) / tau_p;
  }
  return r;
}

void rk4_step(ParticleCloud& cloud, const SyntheticField& f, double t,
              double dt, unsigned threads) {
  if (!(dt > 0.0)) throw InvalidParameter("rk4_step(): dt must be > 0");
  if (!(cloud.tau_p > 0.0)) throw InvalidParameter("rk4_step(): tau_p must be > 0");
  const int dim = cloud.dim;
  const double inv_tau = 1.0 / cloud.tau_p;
  const std::size_t n = cloud.count();
  const auto& soa = f.soa();

  parallel_chunks(n, kChunk, threads, [&](std::size_t b, std::size_t e, std::size_t) {
    const std::size_t m = e - b;
    StageBuf s(m, dim);
    const double* x0[3];
    const double* c0[3];
    for (int d = 0; d < dim; ++d) {
      x0[d] = cloud.pos[d].data() + b;
      c0[d] = cloud.vel[d].data() + b;
    }

    auto eval = [&](double ts) {
      kernel::eval_velocity_batch(soa, dim, ts, s.xs[0].data(),
                                  dim >= 2 ? s.xs[1].data() : nullptr,
                                  dim >= 3 ? s.xs[2].data() : nullptr, m,
                                  s.u[0].data(),
                                  dim >= 2 ? s.u[1].data() : nullptr,
                                  dim >= 3 ? s.u[2].data() : nullptr);
    };

    // stage 1 at (t, x0, c0)
    for (int d = 0; d < dim; ++d) {
      std::memcpy(s.xs[d].data(), x0[d], m * sizeof(double));
    }
    eval(t);
    for (int d = 0; d < dim; ++d) {
      for (std::size_t i = 0; i < m; ++i) {
        const double k1c = (s.u[d][i] - c0[d][i]) * inv_tau;
        s.kx[d][i] = c0[d][i];
        s.kc[d][i] = k1c;
        s.cs[d][i] = c0[d][i] + 0.5 * dt * k1c; // stage-2 velocity
        s.xs[d][i] = x0[d][i] + 0.5 * dt * c0[d][i];
      }
    }
    // stage 2 at (t + dt/2)
    eval(t + 0.5 * dt);
    for (int d = 0; d < dim; ++d) {
      for (std::size_t i = 0; i < m; ++i) {
        const double k2x = s.cs[d][i];
        const double k2c = (s.u[d][i] - s.cs[d][i]) * inv_tau;
        s.kx[d][i] += 2.0 * k2x;
        s.kc[d][i] += 2.0 * k2c;
        s.cs[d][i] = c0[d][i] + 0.5 * dt * k2c; // stage-3 velocity
        s.xs[d][i] = x0[d][i] + 0.5 * dt * k2x;
      }
    }
    // stage 3 at (t + dt/2)
    eval(t + 0.5 * dt);
    for (int d = 0; d < dim; ++d) {
      for (std::size_t i = 0; i < m; ++i) {
        const double k3x = s.cs[d][i];
        const double k3c = (s.u[d][i] - s.cs[d][i]) * inv_tau;
        s.kx[d][i] += 2.0 * k3x;
        s.kc[d][i] += 2.0 * k3c;
        s.cs[d][i] = c0[d][i] + dt * k3c; // stage-4 velocity
        s.xs[d][i] = x0[d][i] + dt * k3x;
      }
    }
    // stage 4 at (t + dt)
    eval(t + dt);
    for (int d = 0; d < dim; ++d) {
      double* px = cloud.pos[d].data() + b;
      double* pc = cloud.vel[d].data() + b;
      for (std::size_t i = 0; i < m; ++i) {
        const double k4x = s.cs[d][i];
        const double k4c = (s.u[d][i] - s.cs[d][i]) * inv_tau;
        px[i] += dt / 6.0 * (s.kx[d][i] + k4x);
        pc[i] += dt / 6.0 * (s.kc[d][i] + k4c);
      }
    }
  });
}

namespace {

ParticleCloud init_cloud(const SyntheticField& field, const DispersionConfig& cfg,
                         RngStream& rng) {
  const int dim = field.dim();
  ParticleCloud cloud;
  cloud.resize(cfg.n_particles, dim);
  cloud.tau_p = cfg.tau_p;
  const double box = cfg.box_length > 0.0
                         ? cfg.box_length
                         : kTwoPi / field.params().k0;
  for (std::size_t i = 0; i < cfg.n_particles; ++i) {
    for (int d = 0; d < dim; ++d) cloud.pos[d][i] = box * rng.uniform();
  }
  if (cfg.init_velocity == InitialVelocity::fluid_velocity) {
    for (std::size_t i = 0; i < cfg.n_particles; ++i) {
      std::array<double, 3> x{0, 0, 0};
      for (int d = 0; d < dim; ++d) x[d] = cloud.pos[d][i];
      const auto u = field.velocity(0.0, x);
      for (int d = 0; d < dim; ++d) cloud.vel[d][i] = u[d];
    }
  }
  return cloud;
}

// Deterministic two-pass variance: chunked partial sums combined in
// chunk order, so the result is independent of the thread count.
std::array<double, 3> cloud_variance(const ParticleCloud& cloud,
                                     unsigned threads) {
  std::array<double, 3> var{0.0, 0.0, 0.0};
  const std::size_t n = cloud.count();
  if (n < 2) throw InsufficientData("dispersion variance needs >= 2 particles");
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::array<double, 3>> partial(n_chunks, {0.0, 0.0, 0.0});
  for (int d = 0; d < cloud.dim; ++d) {
    for (auto& p : partial) p[d] = 0.0;
  }
  parallel_chunks(n, kChunk, threads, [&](std::size_t b, std::size_t e, std::size_t c) {
    for (int d = 0; d < cloud.dim; ++d) {
      double s = 0;
      for (std::size_t i = b; i < e; ++i) s += cloud.pos[d][i];
      partial[c][d] = s;
    }
  });
  std::array<double, 3> mean{0, 0, 0};
  for (const auto& p : partial) {
    for (int d = 0; d < cloud.dim; ++d) mean[d] += p[d];
  }
  for (int d = 0; d < cloud.dim; ++d) mean[d] /= static_cast<double>(n);
  parallel_chunks(n, kChunk, threads, [&](std::size_t b, std::size_t e, std::size_t c) {
    for (int d = 0; d < cloud.dim; ++d) {
      double s = 0;
      for (std::size_t i = b; i < e; ++i) {
        const double dx = cloud.pos[d][i] - mean[d];
        s += dx * dx;
      }
      partial[c][d] = s;
    }
  });
  for (const auto& p : partial) {
    for (int d = 0; d < cloud.dim; ++d) var[d] += p[d];
  }
  for (int d = 0; d < cloud.dim; ++d) var[d] /= static_cast<double>(n - 1);
  return var;
}

} // namespace

DispersionSeries simulate_dispersion_on_field(const SyntheticField& field,
                                              const DispersionConfig& cfg,
                                              RngStream rng) {
  if (cfg.n_particles < 2) {
    throw InvalidParameter("simulate_dispersion(): need at least 2 particles");
  }
  ParticleCloud cloud = init_cloud(field, cfg, rng);
  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  const auto cadence = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.output_every / cfg.dt)));

  DispersionSeries series;
  for (std::size_t s = 0;; ++s) {
    const double t = static_cast<double>(s) * cfg.dt;
    if (s % cadence == 0 || s == n_steps) {
      const auto v = cloud_variance(cloud, cfg.threads);
      series.times.push_back(t);
      series.variance_per_axis.push_back(v);
      series.variance_total.push_back(v[0] + v[1] + v[2]);
    }
    if (s == n_steps) break;
    rk4_step(cloud, field, t, cfg.dt, cfg.threads);
  }
  return series;
}

DispersionSeries simulate_dispersion(const SpectrumParams& p,
                                     const DispersionConfig& cfg, RngStream rng) {
  const SyntheticField field = SyntheticField::sample(p, rng);
  return simulate_dispersion_on_field(field, cfg, rng);
}

TrajectoryDump trajectory_dump(const SpectrumParams& p,
                               const DispersionConfig& cfg,
                               std::size_t n_tracks, RngStream rng) {
  const SyntheticField field = SyntheticField::sample(p, rng);
  ParticleCloud cloud = init_cloud(field, cfg, rng);
  n_tracks = std::min(n_tracks, cloud.count());
  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  const auto cadence = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.output_every / cfg.dt)));

  TrajectoryDump dump;
  dump.tracks.resize(n_tracks);
  for (std::size_t s = 0;; ++s) {
    const double t = static_cast<double>(s) * cfg.dt;
    if (s % cadence == 0 || s == n_steps) {
      dump.times.push_back(t);
      for (std::size_t i = 0; i < n_tracks; ++i) {
        std::array<double, 3> x{0, 0, 0};
        for (int d = 0; d < cloud.dim; ++d) x[d] = cloud.pos[d][i];
        dump.tracks[i].push_back(x);
      }
    }
    if (s == n_steps) break;
    rk4_step(cloud, field, t, cfg.dt, cfg.threads);
  }
  return dump;
}

double max_speed(const ParticleCloud& cloud) {
  double m2 = 0.0;
  for (std::size_t i = 0; i < cloud.count(); ++i) {
    double s2 = 0.0;
    for (int d = 0; d < cloud.dim; ++d) s2 += cloud.vel[d][i] * cloud.vel[d][i];
    m2 = std::max(m2, s2);
  }
  return std::sqrt(m2);
}

} // namespace turbcloud
