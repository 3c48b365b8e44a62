#pragma once

#include <string>

#include "cheeger_lab/config.hpp"
#include "cheeger_lab/report.hpp"

namespace cheeger::lab {

[[nodiscard]] std::string tool_version();

/// Runs one experiment. Exceptions are caught and recorded as status "error".
[[nodiscard]] ExperimentResult run_experiment(const std::string& id, const ExperimentConfig& config);

/// Runs config.experiments on a pool of config.threads workers. Results are
/// ordered by known_experiments(), whatever order the workers finish in.
/// Throws ConfigError for an invalid config before anything runs.
[[nodiscard]] Report run_suite(const ExperimentConfig& config);

/// 0 when every experiment is ok, 1 otherwise.
[[nodiscard]] int exit_code(const Report& report);

}  // namespace cheeger::lab
