#include "turbcloud/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlohmann/json.hpp"
#include "turbcloud/burgers.hpp"
#include "turbcloud/csv.hpp"
#include "turbcloud/errors.hpp"
#include "turbcloud/field.hpp"
#include "turbcloud/lagrangian.hpp"
#include "turbcloud/meanfield.hpp"
#include "turbcloud/sine1d.hpp"
#include "turbcloud/stats.hpp"

namespace turbcloud::experiments {

namespace {

char resolve_sep(ConfigMap& cfg) {
  const std::string fmt = cfg.get_string("format", "csv");
  if (fmt == "csv") return ',';
  if (fmt == "tsv") return '\t';
  throw ConfigError("key 'format': expected csv or tsv, got '" + fmt + "'");
}

SpectrumParams resolve_spectrum(ConfigMap& cfg, int default_modes,
                                double default_eta) {
  const double u0 = cfg.get_double("u0", 1.0);
  const double k0 = cfg.get_double("k0", 1.0);
  auto epsilon = cfg.get_optional_double("epsilon");
  auto eta = cfg.get_optional_double("eta");
  if (!eta.has_value() && default_eta > 0.0) eta = default_eta / k0;
  const double a_hunt = cfg.get_double("a_hunt", 0.5);
  const int n_modes = static_cast<int>(cfg.get_int("n_modes", default_modes));
  const int dim = static_cast<int>(cfg.get_int("dim", 3));
  const bool divfree = cfg.get_bool("divergence_free", dim >= 2);
  const SpectrumParams p = resolve_spectrum_params(u0, k0, epsilon, eta, a_hunt,
                                                   n_modes, dim, divfree);
  for (const auto& w : p.validate()) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
  // record the calibrated values so the sidecar pins the realized spectrum
  cfg.note("epsilon_resolved", format_double(p.epsilon));
  cfg.note("eta_resolved", format_double(p.eta));
  return p;
}

std::string out_path(ConfigMap& cfg) { return cfg.get_string("out"); }

} // namespace

void run_field_sample(ConfigMap& cfg) {
  const char sep = resolve_sep(cfg);
  const std::string out = out_path(cfg);
  RngStream rng(cfg.get_u64("seed", 42), 0);
  const SpectrumParams p = resolve_spectrum(cfg, 400, 0.0);
  cfg.finalize();
  const SyntheticField field = SyntheticField::sample(p, rng);

  CsvBuilder csv(sep);
  std::vector<std::string> cols;
  const char* axis = "xyz";
  for (int d = 0; d < p.dim; ++d) cols.push_back(std::string("a_") + axis[d]);
  for (int d = 0; d < p.dim; ++d) cols.push_back(std::string("k_") + axis[d]);
  cols.push_back("omega");
  cols.push_back("phase");
  csv.header(cols);
  std::vector<double> row;
  for (const auto& m : field.modes()) {
    row.clear();
    for (int d = 0; d < p.dim; ++d) row.push_back(m.amplitude[d]);
    for (int d = 0; d < p.dim; ++d) row.push_back(m.wavevector[d]);
    row.push_back(m.omega);
    row.push_back(m.phase);
    csv.row(row);
  }
  write_file(out, csv.str());
  write_sidecar(out, "field-sample", cfg);
}

void run_field_eval(ConfigMap& cfg) {
  const char sep = resolve_sep(cfg);
  const std::string out = out_path(cfg);
  RngStream rng(cfg.get_u64("seed", 42), 0);
  const SpectrumParams p = resolve_spectrum(cfg, 400, 0.0);
  const double t = cfg.get_double("t", 0.0);
  const auto n_grid = static_cast<int>(cfg.get_int("grid", 16));
  const double box = cfg.get_double("box", 6.283185307179586 / p.k0);
  cfg.finalize();
  if (n_grid < 1) throw ConfigError("key 'grid': must be >= 1");
  const SyntheticField field = SyntheticField::sample(p, rng);

  CsvBuilder csv(sep);
  std::vector<std::string> cols;
  const char* axis = "xyz";
  for (int d = 0; d < p.dim; ++d) cols.push_back(std::string(1, axis[d]));
  for (int d = 0; d < p.dim; ++d) cols.push_back(std::string("u_") + axis[d]);
  csv.header(cols);

  const int npts = n_grid;
  std::array<int, 3> idx{0, 0, 0};
  const int total = static_cast<int>(std::pow(npts, p.dim));
  std::vector<double> row;
  for (int flat = 0; flat < total; ++flat) {
    int rem = flat;
    for (int d = 0; d < p.dim; ++d) {
      idx[d] = rem % npts;
      rem /= npts;
    }
    std::array<double, 3> x{0, 0, 0};
    for (int d = 0; d < p.dim; ++d) {
      x[d] = box * (static_cast<double>(idx[d]) + 0.5) / npts;
    }
    const auto u = field.velocity(t, x);
    row.clear();
    for (int d = 0; d < p.dim; ++d) row.push_back(x[d]);
    for (int d = 0; d < p.dim; ++d) row.push_back(u[d]);
    csv.row(row);
  }
  write_file(out, csv.str());
  write_sidecar(out, "field-eval", cfg);
}

void run_field_spectrum(ConfigMap& cfg) {
  const char sep = resolve_sep(cfg);
  const std::string out = out_path(cfg);
  RngStream rng(cfg.get_u64("seed", 42), 0);
  // the slope study wants a wide inertial range: eta defaults to 1e-4/k0
  const SpectrumParams p = resolve_spectrum(cfg, 400, 1e-4);
  const int bins = static_cast<int>(cfg.get_int("bins", 14));
  const double k_lo = cfg.get_double("k_lo", 15.0 * p.k0);
  const double k_hi = cfg.get_double("k_hi", 0.15 / p.eta);
  cfg.finalize();
  const SyntheticField field = SyntheticField::sample(p, rng);
  const BinnedSpectrum spec = binned_mode_spectrum(field, k_lo, k_hi, bins);
  const RegressionResult fit = loglog_fit(spec.k, spec.energy_density);

  CsvBuilder csv(sep);
  const std::vector<std::string> cols{"k", "energy_density"};
  csv.header(cols);
  for (std::size_t i = 0; i < spec.k.size(); ++i) {
    const double row[] = {spec.k[i], spec.energy_density[i]};
    csv.row(row);
  }
  {
    const double vals[] = {fit.slope, fit.slope_stderr};
    csv.footer("slope", vals);
  }
  {
    const double vals[] = {fit.r_squared};
    csv.footer("r_squared", vals);
  }
  write_file(out, csv.str());
  write_sidecar(out, "field-spectrum", cfg);
}

void run_disperse(ConfigMap& cfg) {
  const char sep = resolve_sep(cfg);
  const std::string out = out_path(cfg);
  const std::uint64_t seed = cfg.get_u64("seed", 42);
  const SpectrumParams p = resolve_spectrum(cfg, 8, 0.0);

  DispersionConfig dc;
  dc.n_particles = static_cast<std::size_t>(cfg.get_int("particles", 10000));
  dc.tau_p = cfg.get_double("tau_p", 1.0);
  dc.dt = cfg.get_double("dt", 1e-3);
  dc.t_end = cfg.get_double("t_end", 100.0);
  dc.output_every = cfg.get_double("output_every", 0.1);
  dc.box_length = cfg.get_double("box", -1.0);
  dc.threads = static_cast<unsigned>(cfg.get_int("threads", 0));
  const std::string iv = cfg.get_string("init_velocity", "zero");
  if (iv == "zero") {
    dc.init_velocity = InitialVelocity::zero;
  } else if (iv == "fluid") {
    dc.init_velocity = InitialVelocity::fluid_velocity;
  } else {
    throw ConfigError("key 'init_velocity': expected zero or fluid, got '" + iv + "'");
  }
  const auto tracks = static_cast<std::size_t>(cfg.get_int("tracks", 0));
  cfg.finalize();

  const DispersionSeries series = simulate_dispersion(p, dc, RngStream(seed, 0));

  CsvBuilder csv(sep);
  std::vector<std::string> cols{"t", "var_x"};
  if (p.dim >= 2) cols.push_back("var_y");
  if (p.dim >= 3) cols.push_back("var_z");
  cols.push_back("var_total");
  csv.header(cols);
  std::vector<double> row;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    row.clear();
    row.push_back(series.times[i]);
    for (int d = 0; d < p.dim; ++d) row.push_back(series.variance_per_axis[i][d]);
    row.push_back(series.variance_total[i]);
    csv.row(row);
  }
  write_file(out, csv.str());
  write_sidecar(out, "disperse", cfg);

  if (tracks > 0) {
    // identical seed: the dump replays the same field and cloud
    const TrajectoryDump dump = trajectory_dump(p, dc, tracks, RngStream(seed, 0));
    CsvBuilder tcsv(sep);
    std::vector<std::string> tcols{"t"};
    const char* axis = "xyz";
    for (std::size_t i = 0; i < dump.tracks.size(); ++i) {
      for (int d = 0; d < p.dim; ++d) {
        tcols.push_back("x" + std::to_string(i) + "_" + axis[d]);
      }
    }
    tcsv.header(tcols);
    for (std::size_t s = 0; s < dump.times.size(); ++s) {
      row.clear();
      row.push_back(dump.times[s]);
      for (std::size_t i = 0; i < dump.tracks.size(); ++i) {
        for (int d = 0; d < p.dim; ++d) row.push_back(dump.tracks[i][s][d]);
      }
      tcsv.row(row);
    }
    write_file(out + ".tracks.csv", tcsv.str());
  }
}

void run_chaos(ConfigMap& cfg) {
  const char sep = resolve_sep(cfg);
  const std::string out = out_path(cfg);
  ChaosConfig cc;
  const auto ns = cfg.get_u64_list("ns", "8,16,32,64,128,256,512");
  cc.ensemble_sizes.assign(ns.begin(), ns.end());
  cc.reps = static_cast<std::size_t>(cfg.get_int("reps", 200));
  cc.lambda = cfg.get_double("lambda", 1.0);
  cc.sigma = cfg.get_double("sigma", 0.5);
  cc.t_end = cfg.get_double("t_end", 2.0);
  cc.dt = cfg.get_double("dt", 1e-3);
  cc.seed = cfg.get_u64("seed", 42);
  cc.threads = static_cast<unsigned>(cfg.get_int("threads", 0));
  cc.initial_law.mean = {cfg.get_double("init_mean_x", 0.0),
                         cfg.get_double("init_mean_c", 0.0)};
  const double sx = cfg.get_double("init_std_x", 1.0);
  const double sc = cfg.get_double("init_std_c", 1.0);
  cc.initial_law.cov = {sx * sx, 0.0, 0.0, sc * sc};
  cfg.finalize();

  const ChaosResult res = chaos_convergence_experiment(cc);

  CsvBuilder csv(sep);
  const std::vector<std::string> cols{"N", "mean_sq_coupling_dist",
                                      "w2sq_onepoint", "w2sq_pairs"};
  csv.header(cols);
  for (const auto& r : res.rows) {
    const double row[] = {static_cast<double>(r.n_particles),
                          r.mean_sq_coupling_dist, r.w2sq_onepoint,
                          r.w2sq_pairs};
    csv.row(row);
  }
  auto emit_slope = [&](const char* label,
                        const std::optional<RegressionResult>& fit) {
    if (fit) {
      const double vals[] = {fit->slope, fit->slope_stderr};
      csv.footer(label, vals);
    } else {
      csv.footer(std::string(label) + "_degenerate", {});
    }
  };
  emit_slope("slope_coupling", res.slope_coupling);
  emit_slope("slope_onepoint", res.slope_onepoint);
  emit_slope("slope_pairs", res.slope_pairs);
  write_file(out, csv.str());
  write_sidecar(out, "chaos", cfg);
}

void run_sine1d(ConfigMap& cfg) {
  const char sep = resolve_sep(cfg);
  const std::string out = out_path(cfg);
  SineParams sp;
  sp.a = cfg.get_double("a", 1.0);
  sp.omega = cfg.get_double("omega", 2.0);
  sp.k = cfg.get_double("k", 1.0);
  sp.phi = cfg.get_double("phi", 0.0);
  sp.tau_p = cfg.get_double("tau_p", 1.0);
  sp.a_red = cfg.get_double("a_red", sp.a);
  sp.omega_red = cfg.get_double("omega_red", sp.omega);
  const std::string system = cfg.get_string("system", "full");
  const double x0 = cfg.get_double("x0", 0.0);
  const double c0 = cfg.get_double("c0", 0.0);
  const double dt = cfg.get_double("dt", 1e-3);
  const double t_end = cfg.get_double("t_end", 200.0);
  const double cadence = cfg.get_double("output_every", 0.01);
  cfg.finalize();

  SineTrajectory traj;
  if (system == "full") {
    traj = simulate_full(sp, x0, c0, dt, t_end, cadence);
  } else if (system == "reduced") {
    traj = simulate_reduced(sp, x0, c0, dt, t_end, cadence);
  } else {
    throw ConfigError("key 'system': expected full or reduced, got '" + system + "'");
  }

  CsvBuilder csv(sep);
  std::vector<std::string> cols{"t", "x", "c"};
  const bool reduced = !traj.y.empty();
  if (reduced) {
    cols.push_back("y");
    cols.push_back("v");
  }
  csv.header(cols);
  std::vector<double> row;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    row = {traj.t[i], traj.x[i], traj.c[i]};
    if (reduced) {
      row.push_back(traj.y[i]);
      row.push_back(traj.v[i]);
    }
    csv.row(row);
  }
  try {
    const double period = reduced ? 1.0 : 1.0 / std::abs(sp.k);
    const DriftStats st = drift_and_oscillation_stats(traj, period);
    const double vals[] = {st.drift_slope, st.oscillation_amplitude,
                           st.variance_bounded ? 1.0 : 0.0};
    csv.footer("drift_stats", vals);
  } catch (const InsufficientData&) {
    csv.footer("drift_stats_unavailable", {});
  }
  write_file(out, csv.str());
  write_sidecar(out, "sine1d", cfg);
}

void run_burgers(ConfigMap& cfg) {
  const char sep = resolve_sep(cfg);
  const std::string out = out_path(cfg);
  BurgersConfig bc;
  const std::string mode = cfg.get_string("mode", "lagrangian");
  if (mode == "lagrangian") {
    bc.scheme = BurgersScheme::lagrangian;
  } else if (mode == "eulerian") {
    bc.scheme = BurgersScheme::eulerian_empirical;
  } else if (mode == "homogeneous") {
    bc.scheme = BurgersScheme::homogeneous_ode;
  } else {
    throw ConfigError("key 'mode': expected lagrangian, eulerian or homogeneous, got '" +
                      mode + "'");
  }
  bc.length = cfg.get_double("length", 1.0);
  bc.n_cells = static_cast<int>(cfg.get_int("cells", 64));
  bc.rho_f = cfg.get_double("rho_f", 1.0);
  bc.tau_p = cfg.get_double("tau_p", 0.1);
  bc.kappa_m = cfg.get_double("kappa_m", 0.5);
  bc.u0_gas = cfg.get_double("u0_gas", 1.0);
  bc.u0_particles = cfg.get_double("u0_particles", 0.0);
  bc.dt = cfg.get_double("dt", 1e-4);
  bc.t_end = cfg.get_double("t_end", 0.5);
  bc.output_every = cfg.get_double("output_every", 1e-3);
  bc.nu_gas = cfg.get_double("nu_gas", 0.0);
  bc.cfl = cfg.get_double("cfl", 0.5);
  const std::string pusher = cfg.get_string("pusher", "euler");
  if (pusher == "euler") {
    bc.pusher = ParticlePusher::euler;
  } else if (pusher == "rk4") {
    bc.pusher = ParticlePusher::rk4;
  } else {
    throw ConfigError("key 'pusher': expected euler or rk4, got '" + pusher + "'");
  }
  const std::string placement = cfg.get_string("placement", "random");
  if (placement != "random" && placement != "centered") {
    throw ConfigError("key 'placement': expected random or centered, got '" +
                      placement + "'");
  }
  const std::uint64_t seed = cfg.get_u64("seed", 42);
  const bool sweep = cfg.has("np_list");

  if (!sweep) {
    bc.n_particles = static_cast<int>(cfg.get_int("np", 64));
    const auto reps = static_cast<std::size_t>(cfg.get_int("reps", 1));
    const auto threads = static_cast<unsigned>(cfg.get_int("threads", 0));
    cfg.finalize();
    GasCurve curve;
    if (reps <= 1 || bc.scheme == BurgersScheme::homogeneous_ode) {
      RngStream rng(seed, 0);
      RngStream* rp = (placement == "random") ? &rng : nullptr;
      curve = run_single(bc, rp);
    } else {
      EnsembleConfig ec;
      ec.base = bc;
      ec.np_list = {static_cast<std::size_t>(bc.n_particles)};
      ec.reps = reps;
      ec.seed = seed;
      ec.threads = threads;
      curve = ensemble_experiment(ec).mean_curves.at(0);
    }
    CsvBuilder csv(sep);
    const std::vector<std::string> cols{"t", "mean_gas_velocity",
                                        "mean_particle_velocity"};
    csv.header(cols);
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
      const double row[] = {curve.times[i], curve.mean_gas_velocity[i],
                            curve.mean_particle_velocity[i]};
      csv.row(row);
    }
    write_file(out, csv.str());
    write_sidecar(out, "burgers", cfg);
    return;
  }

  EnsembleConfig ec;
  ec.base = bc;
  const auto nps = cfg.get_u64_list("np_list", "1,2,4,8,16,32,64,128,256");
  ec.np_list.assign(nps.begin(), nps.end());
  ec.reps = static_cast<std::size_t>(cfg.get_int("reps", 200));
  ec.seed = seed;
  ec.threads = static_cast<unsigned>(cfg.get_int("threads", 0));
  const std::string taueff_out = cfg.get_string("taueff_out", out + ".taueff.csv");
  cfg.finalize();

  const EnsembleResult res = ensemble_experiment(ec);

  CsvBuilder csv(sep);
  std::vector<std::string> cols{"t"};
  for (std::size_t np : ec.np_list) {
    cols.push_back("mean_gas_velocity_np" + std::to_string(np));
  }
  cols.push_back("homogeneous");
  csv.header(cols);
  const auto& times = res.mean_curves.at(0).times;
  std::vector<double> row;
  for (std::size_t i = 0; i < times.size(); ++i) {
    row.clear();
    row.push_back(times[i]);
    for (const auto& c : res.mean_curves) row.push_back(c.mean_gas_velocity[i]);
    row.push_back(homogeneous_solution(times[i], bc.u0_gas, bc.u0_particles,
                                       bc.kappa_m, bc.tau_p)
                      .gas);
    csv.row(row);
  }
  {
    std::vector<double> vals;
    for (double d : res.deviation) vals.push_back(d);
    csv.footer("deviation", vals);
  }
  {
    const double vals[] = {res.slope.slope, res.slope.slope_stderr};
    csv.footer("slope", vals);
  }
  write_file(out, csv.str());
  write_sidecar(out, "burgers-sweep", cfg);

  const TauEffResult te = fit_effective_tau(res, ec);
  CsvBuilder tcsv(sep);
  const std::vector<std::string> tcols{"np", "l_t", "tau_eff"};
  tcsv.header(tcols);
  for (std::size_t i = 0; i < te.n_particles.size(); ++i) {
    const double r[] = {static_cast<double>(te.n_particles[i]),
                        te.interspace[i], te.tau_eff[i]};
    tcsv.row(r);
  }
  const double fvals[] = {te.alpha, te.intercept, te.r_squared};
  tcsv.footer("fit", fvals);
  write_file(taueff_out, tcsv.str());
}

void run_report(ConfigMap& cfg) {
  const char sep = resolve_sep(cfg);
  const std::string dir = cfg.get_string("dir", ".");
  const std::string out = out_path(cfg);
  cfg.finalize();

  struct Claim {
    const char* id;
    const char* experiment;
    const char* command;
  };
  // one documented command per reproduced figure/claim
  const Claim claims[] = {
      {"one_sine_drift_band", "sine1d",
       "turbcloud sine1d --system reduced --a-red 1 --omega-red 2 --tau-p 1 "
       "--t-end 200 --dt 0.001 --out sine.csv"},
      {"trajectories_1d", "disperse",
       "turbcloud disperse --dim 1 --particles 10000 --tracks 10 --tau-p 1.0 "
       "--dt 0.001 --t-end 100 --out disp1d.csv"},
      {"variance_dim_contrast", "disperse",
       "turbcloud disperse --dim {1|2|3} --particles 10000 --tau-p 1.0 "
       "--dt 0.001 --t-end 100 --out series.csv"},
      {"pope_spectrum_slope", "field-spectrum",
       "turbcloud field spectrum --n-modes 400 --dim 3 --out spec.csv"},
      {"chaos_rate_1_over_n", "chaos",
       "turbcloud chaos --ns 8,16,32,64,128,256,512 --reps 200 --lambda 1.0 "
       "--sigma 0.5 --t-end 2 --dt 0.001 --out chaos.csv"},
      {"burgers_homogeneous_limit", "burgers",
       "turbcloud burgers --mode lagrangian --placement centered --np 64 "
       "--cells 64 --kappa-m 1.0 --tau-p 0.1 --t-end 0.5 --out hom.csv"},
      {"burgers_convergence_order_1", "burgers-sweep",
       "turbcloud burgers --mode lagrangian --np-list 1,2,4,8,16,32,64,128,256 "
       "--reps 200 --out sweep.csv"},
      {"tau_eff_linear_trend", "burgers-sweep",
       "turbcloud burgers --mode lagrangian --np-list 1,2,4,8,16,32,64,128,256 "
       "--reps 200 --out sweep.csv  (writes sweep.csv.taueff.csv)"},
      {"eulerian_empirical_consistency", "burgers-sweep",
       "turbcloud burgers --mode eulerian --np-list 4,16,64 --reps 200 "
       "--out eulsweep.csv"},
  };

  // scan sidecars
  std::vector<std::pair<std::string, std::string>> found; // (experiment, csv)
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const std::string p = entry.path().string();
    if (p.size() < 10 || p.substr(p.size() - 10) != ".meta.json") continue;
    std::ifstream in(p);
    if (!in) continue;
    try {
      nlohmann::json j;
      in >> j;
      found.emplace_back(j.value("experiment", std::string{}),
                         p.substr(0, p.size() - 10));
    } catch (...) {
      continue;
    }
  }
  std::sort(found.begin(), found.end());

  std::string text;
  text += "claim";
  text += sep;
  text += "command";
  text += sep;
  text += "artifacts";
  text += '\n';
  for (const auto& c : claims) {
    std::string arts;
    for (const auto& [kind, path] : found) {
      if (kind == c.experiment) {
        if (!arts.empty()) arts += ';';
        arts += path;
      }
    }
    text += c.id;
    text += sep;
    text += '"';
    text += c.command;
    text += '"';
    text += sep;
    text += arts.empty() ? "MISSING" : arts;
    text += '\n';
  }
  write_file(out, text);
  write_sidecar(out, "report", cfg);
}

void run(const std::string& experiment, ConfigMap& cfg) {
  if (experiment == "field-sample") return run_field_sample(cfg);
  if (experiment == "field-eval") return run_field_eval(cfg);
  if (experiment == "field-spectrum") return run_field_spectrum(cfg);
  if (experiment == "disperse") return run_disperse(cfg);
  if (experiment == "chaos") return run_chaos(cfg);
  if (experiment == "sine1d") return run_sine1d(cfg);
  if (experiment == "burgers") return run_burgers(cfg);
  if (experiment == "report") return run_report(cfg);
  throw ConfigError("unknown experiment '" + experiment + "'");
}

} // namespace turbcloud::experiments
