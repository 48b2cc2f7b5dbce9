#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "levykf/filters.hpp"
#include "levykf/model.hpp"

namespace levykf::cli {

inline constexpr int kConfigVersion = 1;

/// Invalid configuration; `field()` is the dotted path of the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct ExperimentConfig {
    /// Preset name, or "custom" for an explicit model.
    std::string model_name = "tracking";
    StateSpaceModel model = tracking_preset();
    std::size_t num_steps = kDefaultNumSteps;
    std::size_t num_runs = 2000;
    std::uint64_t seed = 1;
    FilterVariant variant = ModifiedVariant{ModifiedFilterConfig(kDefaultClipThreshold)};
    std::optional<Matrix> initial_covariance;
    std::size_t burn_in = 5;
    std::vector<double> sweep_thresholds;
    std::filesystem::path output_dir = "out";
};

/// Built-in model by name; throws ConfigError("model", "unknown preset ...").
StateSpaceModel preset_model(const std::string& name);

ExperimentConfig parse_config(const nlohmann::json& doc);
/// Reads and parses a JSON config file. Unreadable files raise ConfigError
/// on the "config" field.
ExperimentConfig load_config(const std::filesystem::path& path);

NoiseSpec parse_noise(const nlohmann::json& doc, const std::string& field);
Matrix parse_matrix(const nlohmann::json& doc, const std::string& field);

}  // namespace levykf::cli
