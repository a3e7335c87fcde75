/// @file experiments.hpp
/// @brief The runnable experiments behind the CLI subcommands. Each
///        runner resolves its key set from a ConfigMap (strict: unknown
///        keys are errors), runs the simulation, and writes the CSV plus
///        its JSON sidecar. The CLI and the acceptance suite share these
///        entry points, so a documented command line and the test suite
///        execute identical code.
#pragma once

#include <string>

#include "turbcloud/config.hpp"

namespace turbcloud::experiments {

void run_field_sample(ConfigMap& cfg);
void run_field_eval(ConfigMap& cfg);
void run_field_spectrum(ConfigMap& cfg);
void run_disperse(ConfigMap& cfg);
void run_chaos(ConfigMap& cfg);
void run_sine1d(ConfigMap& cfg);
void run_burgers(ConfigMap& cfg);
void run_report(ConfigMap& cfg);

/// Dispatch by experiment name ("field-sample", "field-eval",
/// "field-spectrum", "disperse", "chaos", "sine1d", "burgers", "report").
/// Throws ConfigError for an unknown name.
void run(const std::string& experiment, ConfigMap& cfg);

} // namespace turbcloud::experiments
