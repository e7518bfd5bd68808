#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "restart/agent/policy_value_net.hpp"
#include "restart/agent/ppo.hpp"
#include "restart/env/deep_maze.hpp"
#include "restart/env/environment.hpp"

namespace restart::train {

enum class EnvKind { DenseCorridor, DeepMaze, MultiGoalGrid };
enum class Variant { None, Uniform, Prioritised, Episodic };
enum class Metric { MeanUndiscountedReturn, SuccessRate };

struct EnvConfig {
  EnvKind kind = EnvKind::DenseCorridor;
  int t_env = 1000;
  int corridor_length = 200;
  env::DeepMazeParams maze;
  int grid_size = 10;
};

struct MemoryConfig {
  Variant variant = Variant::None;
  double ratio = 0.1;
  double alpha = 0.4;
  double epsilon = 1e-3;
  std::size_t capacity = 20000;
  std::size_t parent_capacity = 100;
  std::size_t sub_capacity = 10;
  env::AugMode t_aug_mode = env::AugMode::Fixed;
  int t_aug = 10;
};

struct EvalProtocol {
  int episodes = 10;
  std::int64_t period = 10000;  // environment steps between evaluations
  Metric metric = Metric::MeanUndiscountedReturn;
  bool greedy = false;  // argmax instead of sampling from the policy
};

struct ExperimentConfig {
  std::string preset;
  EnvConfig env;
  MemoryConfig memory;
  agent::PpoConfig ppo;
  agent::NetConfig net;
  std::int64_t total_steps = 1'000'000;
  EvalProtocol eval;
  // Runs that see no positive reward within this many steps are discarded (0 disables).
  std::int64_t filter_steps = 0;
  std::vector<std::uint64_t> seeds{0};
  std::string out_dir = "runs";

  // Throws ConfigError naming the first offending field.
  void validate() const;
};

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

env::TimeLimitConfig time_limits(const ExperimentConfig& cfg);
std::unique_ptr<env::Environment> make_environment(const ExperimentConfig& cfg);

std::string to_string(EnvKind k);
std::string to_string(Variant v);
std::string to_string(Metric m);
std::string to_string(env::AugMode m);
// Each throws ConfigError(field, ...) on unknown names.
EnvKind parse_env_kind(const std::string& s, const std::string& field);
Variant parse_variant(const std::string& s, const std::string& field);
Metric parse_metric(const std::string& s, const std::string& field);
env::AugMode parse_aug_mode(const std::string& s, const std::string& field);

}  // namespace restart::train
