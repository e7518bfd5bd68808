#pragma once

#include <string>
#include <vector>

#include "restart/train/experiment_config.hpp"

namespace restart::cli {

// Base names: dense-corridor, dense-corridor-hard, multigoal-grid (alias
// multigoal), deep-maze. A "-none", "-uniform", "-prioritised" or "-episodic"
// suffix selects the restart variant together with its time-limit mode.
// Throws train::ConfigError("preset", ...) on unknown names.
train::ExperimentConfig preset(const std::string& name);

std::vector<std::string> preset_names();

// Sets the variant and the time-limit mode it requires.
void select_variant(train::ExperimentConfig& cfg, train::Variant v);

}  // namespace restart::cli
