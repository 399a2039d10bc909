#pragma once

#include <filesystem>
#include <string_view>

#include "rotting/experiment.hpp"

namespace rotting {

/// Parses an experiment description (JSON). Unknown keys anywhere are
/// rejected with ConfigError; policy parameters are checked against the
/// registry.
ExperimentConfig parse_config(std::string_view text);

/// IoError when the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace rotting
