#pragma once

#include <filesystem>
#include <string>

#include "wasn/experiment.hpp"

namespace wasn {

/// Parses a JSON experiment document. Keys mirror ExperimentSpec and
/// ScenarioConfig field names; missing keys keep their defaults and unknown
/// keys are rejected.
ExperimentSpec parse_spec(const std::string& text);
ExperimentSpec load_spec(const std::filesystem::path& path);
std::string spec_to_json(const ExperimentSpec& spec);

}  // namespace wasn
