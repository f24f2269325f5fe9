#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sklevy/model_config.hpp"

namespace sklevy::cli {

/// Keys accepted in a config file, mirroring ModelConfig:
/// drift, drift_a, drift_b, u0, v0, eps, theta, alpha, c, dim, T, n_steps,
/// seed, noise_scale.
const std::vector<std::string>& model_keys();

/// Builds a config from flat keys. `file` may be a flat object or a run
/// manifest, whose "config" member is used. Keys in `overrides` win. Without
/// an explicit n_steps the step count is n_steps_for(eps, T). The result is
/// validated.
ModelConfig load_config(const std::optional<std::filesystem::path>& file,
                        const nlohmann::json& overrides);
ModelConfig config_from_json(const nlohmann::json& flat);

/// Flat snapshot readable by config_from_json.
nlohmann::json config_to_json(const ModelConfig& config);

/// Reads a JSON object from disk; a manifest yields its "config" member.
nlohmann::json read_config_object(const std::filesystem::path& file);

/// "2^-3..2^-8" (inclusive, powers of two), "0.1,0.05,0.02", or a single
/// value; "2^k" is accepted wherever a number is.
std::vector<double> parse_number_list(const std::string& text);
double parse_number(const std::string& text);

}  // namespace sklevy::cli
