// turbcloud -- synthetic turbulence, particle dispersion, mean-field
// convergence, one-sine dynamics and two-way Burgers experiments behind
// one deterministic CLI.
//
// Every experiment key can be given either in a config file (key = value
// lines, --config FILE) or as a flag (--key value, dashes map to
// underscores: --tau-p sets tau_p). Flags override file values; unknown
// keys are hard errors. The master seed comes from --seed, the config
// key `seed`, or the TURBCLOUD_SEED environment variable, in that order.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "turbcloud/config.hpp"
#include "turbcloud/errors.hpp"
#include "turbcloud/experiments.hpp"
#include "turbcloud/version.hpp"

namespace {

using turbcloud::ConfigMap;

std::string normalize_key(std::string key) {
  for (auto& c : key) {
    if (c == '-') c = '_';
  }
  return key;
}

// remaining CLI tokens -> config entries (--key value | --key=value)
void apply_flag_tokens(const std::vector<std::string>& tokens, ConfigMap& cfg) {
  // CLI11 hands extras back in reverse order
  std::vector<std::string> args(tokens.rbegin(), tokens.rend());
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& tok = args[i];
    if (tok.rfind("--", 0) != 0 || tok.size() <= 2) {
      throw turbcloud::ConfigError("unexpected argument '" + tok +
                                   "' (expected --key value)");
    }
    const auto eq = tok.find('=');
    if (eq != std::string::npos) {
      cfg.set(normalize_key(tok.substr(2, eq - 2)), tok.substr(eq + 1), "flag");
      continue;
    }
    if (i + 1 >= args.size()) {
      throw turbcloud::ConfigError("flag '" + tok + "' is missing a value");
    }
    cfg.set(normalize_key(tok.substr(2)), args[i + 1], "flag");
    ++i;
  }
}

ConfigMap assemble_config(const std::string& config_file,
                          const std::vector<std::string>& extras) {
  ConfigMap cfg;
  if (!config_file.empty()) cfg = ConfigMap::from_file(config_file);
  ConfigMap flags;
  apply_flag_tokens(extras, flags);
  cfg.overlay(flags);
  if (!cfg.has("seed")) {
    if (const char* env = std::getenv("TURBCLOUD_SEED")) {
      cfg.set("seed", env, "env:TURBCLOUD_SEED");
    }
  }
  return cfg;
}

const char* category_name(turbcloud::ErrorCategory c) {
  using EC = turbcloud::ErrorCategory;
  switch (c) {
    case EC::config: return "config";
    case EC::invalid_parameter: return "invalid-parameter";
    case EC::invalid_input: return "invalid-input";
    case EC::normalization: return "spectrum-normalization";
    case EC::unsupported: return "unsupported";
    case EC::size: return "size";
    case EC::coupling_order: return "coupling-order";
    case EC::stability: return "stability";
    case EC::positivity: return "positivity";
    case EC::fit_failure: return "fit-failure";
    case EC::insufficient_data: return "insufficient-data";
  }
  return "unknown";
}

int exit_code_for(turbcloud::ErrorCategory c) {
  using EC = turbcloud::ErrorCategory;
  switch (c) {
    case EC::config: return 2;
    case EC::stability: return 3;
    case EC::fit_failure: return 4;
    default: return 1;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"turbcloud: particle-laden synthetic turbulence experiments"};
  app.set_version_flag("--version", std::string("turbcloud ") + turbcloud::kVersion);
  app.require_subcommand(1);

  std::string config_file;
  app.add_option("--config", config_file,
                 "config file with key = value lines (flags override)")
      ->expected(1);

  struct SubDef {
    const char* name;
    const char* experiment;
    const char* desc;
    CLI::App* sub = nullptr;
  };
  std::vector<SubDef> defs = {
      {"disperse", "disperse",
       "turbulent dispersion statistics (keys: dim particles tau_p dt t_end "
       "u0 k0 epsilon eta a_hunt n_modes divergence_free box init_velocity "
       "tracks output_every threads seed out format)"},
      {"chaos", "chaos",
       "mean-field propagation-of-chaos rate study (keys: ns reps lambda "
       "sigma t_end dt init_mean_x init_mean_c init_std_x init_std_c threads "
       "seed out format)"},
      {"sine1d", "sine1d",
       "one-sine particle dynamics (keys: system a omega k phi tau_p a_red "
       "omega_red x0 c0 dt t_end output_every seed out format)"},
      {"burgers", "burgers",
       "two-way coupled 1D Burgers (keys: mode np np_list cells kappa_m "
       "tau_p rho_f length u0_gas u0_particles dt t_end output_every nu_gas "
       "cfl pusher placement reps taueff_out threads seed out format)"},
      {"report", "report",
       "aggregate prior run CSVs into the claim manifest (keys: dir out format)"},
  };
  for (auto& d : defs) {
    d.sub = app.add_subcommand(d.name, d.desc);
    d.sub->allow_extras();
  }

  CLI::App* field = app.add_subcommand(
      "field", "synthetic spectral field tools (sample | eval | spectrum)");
  field->require_subcommand(1);
  std::vector<SubDef> field_defs = {
      {"sample", "field-sample",
       "emit the sampled mode table (keys: u0 k0 epsilon eta a_hunt n_modes "
       "dim divergence_free seed out format)"},
      {"eval", "field-eval",
       "evaluate the field on a grid (keys: t grid box + spectrum keys)"},
      {"spectrum", "field-spectrum",
       "binned mode-energy spectrum and inertial-range slope (keys: bins "
       "k_lo k_hi + spectrum keys; eta defaults to 1e-4/k0 here)"},
  };
  for (auto& d : field_defs) {
    d.sub = field->add_subcommand(d.name, d.desc);
    d.sub->allow_extras();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& d : defs) {
      if (d.sub->parsed()) {
        ConfigMap cfg = assemble_config(config_file, d.sub->remaining());
        turbcloud::experiments::run(d.experiment, cfg);
        return 0;
      }
    }
    for (const auto& d : field_defs) {
      if (d.sub->parsed()) {
        ConfigMap cfg = assemble_config(config_file, d.sub->remaining());
        turbcloud::experiments::run(d.experiment, cfg);
        return 0;
      }
    }
    std::cerr << "turbcloud: no subcommand selected\n";
    return 2;
  } catch (const turbcloud::Error& e) {
    std::cerr << "turbcloud: error category=" << category_name(e.category())
              << ": " << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << "turbcloud: error: " << e.what() << "\n";
    return 1;
  }
}
