#pragma once

#include <string>

#include "restart/train/experiment_config.hpp"

namespace restart::cli {

std::string sha256_hex(const std::string& data);

// SHA-256 of the canonical serialized config.
std::string config_digest(const train::ExperimentConfig& cfg);

}  // namespace restart::cli
