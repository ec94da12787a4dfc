#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace roughflow {

struct ExperimentResult {
    int exit_code = 0; // 0 pass, 1 assertion failure, 2 config error, 3 runtime blow-up
    std::string summary;
    std::vector<std::string> artifacts;
};

// Parses the JSON config (comments allowed), dispatches on `kind`, writes
// CSV artifacts and summary.txt into out_dir. Never throws: failures map
// onto the exit code.
ExperimentResult run_experiment(const std::string& config_text, const std::string& kind,
                                const std::string& out_dir,
                                std::optional<std::uint64_t> seed_override = std::nullopt,
                                std::optional<double> tolerance_override = std::nullopt);

ExperimentResult run_experiment_file(const std::string& config_file, const std::string& kind,
                                     const std::string& out_dir,
                                     std::optional<std::uint64_t> seed_override = std::nullopt,
                                     std::optional<double> tolerance_override = std::nullopt);

} // namespace roughflow
