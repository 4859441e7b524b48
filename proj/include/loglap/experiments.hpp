#pragma once

#include "loglap/config.hpp"
#include "loglap/report.hpp"

#include <string>
#include <vector>

namespace loglap {

struct ExperimentOutcome {
    std::vector<CheckRow> checks;
    std::vector<std::string> artifacts;

    bool all_pass() const;
    std::string first_failure() const;
};

/// Executes the configured experiment and writes its CSV tables and summary
/// JSON into the config's output directory. All file contents are
/// deterministic for a fixed config and seed, independent of the worker count.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

/// Stable plain-text catalog of the experiment kinds, one entry per kind,
/// each naming the labeled identity it exercises.
std::string experiment_catalog();

struct CliOverrides {
    std::string output_dir; // empty = keep config/env default
    long long seed = -1;
    int threads = 0;
    double tolerance_scale = 0.0;
};

/// Full CLI path: load config, apply overrides, run, write reports.
/// Exit codes: 0 pass, 1 check failure, 2 parse error, 3 validation error.
int run_config_file(const std::string& path, const CliOverrides& overrides);

} // namespace loglap
