#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "uavcov/cli/config.hpp"
#include "uavcov/cli/csv.hpp"

namespace uavcov::cli {

/// Evaluates every requested engine at every (sweep value, threshold) point.
/// Cells stay empty where an engine does not apply: exact needs an integer
/// serving shape m0 <= 10, clt/bounds/blockage need the no-fading channel.
ResultTable run_sweep(const Sweep& sweep);

/// Runs all sweeps, then writes one CSV per sweep to
/// <dir>/<prefix><name>.csv. Returns the written paths.
std::vector<std::filesystem::path> run_experiment(
    const ExperimentConfig& config, const std::optional<std::filesystem::path>& output_dir = {});

}  // namespace uavcov::cli
