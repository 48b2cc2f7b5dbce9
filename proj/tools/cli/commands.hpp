#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace levykf::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitIo = 3,
    kExitNumerical = 4,
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Command-line overrides; unset fields keep the config value.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> steps;
    std::vector<double> thresholds;
    std::optional<std::filesystem::path> out;
};

/// Loads `config_path` (defaults when empty) and applies the overrides.
ExperimentConfig resolve_config(const std::filesystem::path& config_path,
                                const Overrides& overrides, bool sweep);

/// LEVY_KALMAN_THREADS: unset, empty or 0 means one worker per hardware
/// thread. Anything that is not a non-negative integer is a ConfigError.
std::size_t threads_from_env();

// Each command writes its files into cfg.output_dir and returns the paths.
std::filesystem::path cmd_simulate(const ExperimentConfig& cfg);
std::filesystem::path cmd_filter(const ExperimentConfig& cfg, const std::filesystem::path& input);
struct BenchmarkOutputs {
    std::filesystem::path metrics_csv;
    std::filesystem::path plot_svg;
    std::filesystem::path summary_csv;
    double time_avg_obs_error = 0.0;
    double time_avg_est_error = 0.0;
    double time_avg_post_error = 0.0;
};
BenchmarkOutputs cmd_benchmark(const ExperimentConfig& cfg, std::size_t threads);
std::filesystem::path cmd_sweep(const ExperimentConfig& cfg, std::size_t threads);

/// Full command-line entry point; args[0] is the program name. Returns the
/// process exit code (0 ok, 2 usage/config, 3 I/O, 4 numerical failure).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levykf::cli
