#pragma once

#include <string>
#include <utility>
#include <vector>

#include "restart/train/experiment_config.hpp"

namespace restart::cli {

// Flat, sectioned key = value text:
//
//   preset = "deep-maze-episodic"
//   [env]
//   t_env = 100
//   [run]
//   seeds = [1, 2, 3]
//
// Keys are addressed by dotted path ("env.t_env"); top-level keys have no dot.
struct KvEntry {
  std::string key;
  std::string value;  // raw token, quotes and brackets included
  int line = 0;
};

std::vector<KvEntry> parse_kv(const std::string& text);

// Every configurable field, in canonical order.
const std::vector<std::string>& config_keys();

// Sets one field from a raw token. Throws train::ConfigError naming the key.
void set_field(train::ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::string get_field(const train::ExperimentConfig& cfg, const std::string& key);

// "env.t_env=100"; a bare word on the right is taken as a string.
void apply_override(train::ExperimentConfig& cfg, const std::string& assignment);

// Canonical text holding every field; parse_config(serialize_config(c)) == c.
std::string serialize_config(const train::ExperimentConfig& cfg);

// Keys are layered onto `base`. A "preset" key replaces the base with that
// preset before the remaining keys apply.
train::ExperimentConfig parse_config(const std::string& text, train::ExperimentConfig base = {});
train::ExperimentConfig load_config(const std::string& path, train::ExperimentConfig base = {});

bool same_config(const train::ExperimentConfig& a, const train::ExperimentConfig& b);

}  // namespace restart::cli
