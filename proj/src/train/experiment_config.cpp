#include "restart/train/experiment_config.hpp"

#include <cmath>

#include "restart/env/dense_corridor.hpp"
#include "restart/env/deep_maze.hpp"
#include "restart/env/multi_goal_grid.hpp"

namespace restart::train {

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* field, const char* message) {
    if (!ok) throw ConfigError(field, message);
  };
  require(env.t_env >= 1, "env.t_env", "must be positive");
  require(env.corridor_length >= 2, "env.corridor_length", "must be at least 2");
  require(env.maze.size >= 5, "env.maze_size", "must be at least 5");
  require(env.maze.goal_distance >= 0, "env.goal_distance", "must be non-negative");
  require(env.maze.action_penalty >= 0.0, "env.action_penalty", "must be non-negative");
  require(env.grid_size >= 2, "env.grid_size", "must be at least 2");

  require(memory.ratio >= 0.0 && memory.ratio < 1.0, "memory.ratio", "must lie in [0, 1)");
  require(memory.alpha >= 0.0 && std::isfinite(memory.alpha), "memory.alpha", "must be non-negative");
  require(memory.epsilon > 0.0 && std::isfinite(memory.epsilon), "memory.epsilon", "must be positive");
  require(memory.capacity >= 1, "memory.capacity", "must be positive");
  require(memory.parent_capacity >= 1, "memory.parent_capacity", "must be positive");
  require(memory.t_aug >= 1 && memory.t_aug <= env.t_env, "memory.t_aug", "must lie in [1, env.t_env]");
  if (memory.variant == Variant::Episodic) {
    require(memory.t_aug_mode == env::AugMode::Remaining, "memory.t_aug_mode",
            "episodic variant requires the 'remaining' time-limit mode");
  }
  if (memory.variant == Variant::Uniform || memory.variant == Variant::Prioritised) {
    require(memory.t_aug_mode == env::AugMode::Fixed, "memory.t_aug_mode",
            "uniform and prioritised variants require the 'fixed' time-limit mode");
  }

  try {
    ppo.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    throw ConfigError(what.substr(0, what.find(':')), what.substr(what.find(':') + 2));
  }
  require(net.hidden >= 1, "net.hidden", "must be positive");
  require(net.hidden_layers >= 1, "net.hidden_layers", "must be positive");

  require(total_steps >= 1, "run.total_steps", "must be positive");
  require(eval.episodes >= 1, "eval.episodes", "must be positive");
  require(eval.period >= 1, "eval.period", "must be positive");
  require(filter_steps >= 0, "run.filter_steps", "must be non-negative");
  require(!seeds.empty(), "run.seeds", "must list at least one seed");
  require(!out_dir.empty(), "run.out_dir", "must not be empty");
}

env::TimeLimitConfig time_limits(const ExperimentConfig& cfg) {
  return env::TimeLimitConfig{cfg.env.t_env, cfg.memory.t_aug_mode, cfg.memory.t_aug};
}

std::unique_ptr<env::Environment> make_environment(const ExperimentConfig& cfg) {
  const auto limits = time_limits(cfg);
  switch (cfg.env.kind) {
    case EnvKind::DenseCorridor: return std::make_unique<env::DenseCorridor>(cfg.env.corridor_length, limits);
    case EnvKind::DeepMaze: return std::make_unique<env::DeepMaze>(cfg.env.maze, limits);
    case EnvKind::MultiGoalGrid: return std::make_unique<env::MultiGoalGrid>(cfg.env.grid_size, limits);
  }
  throw std::logic_error("unknown environment kind");
}

std::string to_string(EnvKind k) {
  switch (k) {
    case EnvKind::DenseCorridor: return "dense-corridor";
    case EnvKind::DeepMaze: return "deep-maze";
    case EnvKind::MultiGoalGrid: return "multigoal-grid";
  }
  return "?";
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::None: return "none";
    case Variant::Uniform: return "uniform";
    case Variant::Prioritised: return "prioritised";
    case Variant::Episodic: return "episodic";
  }
  return "?";
}

std::string to_string(Metric m) {
  return m == Metric::SuccessRate ? "success-rate" : "mean-return";
}

std::string to_string(env::AugMode m) { return m == env::AugMode::Remaining ? "remaining" : "fixed"; }

EnvKind parse_env_kind(const std::string& s, const std::string& field) {
  for (auto k : {EnvKind::DenseCorridor, EnvKind::DeepMaze, EnvKind::MultiGoalGrid}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError(field, "unknown environment '" + s + "' (expected dense-corridor, deep-maze or multigoal-grid)");
}

Variant parse_variant(const std::string& s, const std::string& field) {
  for (auto v : {Variant::None, Variant::Uniform, Variant::Prioritised, Variant::Episodic}) {
    if (to_string(v) == s) return v;
  }
  throw ConfigError(field, "unknown variant '" + s + "' (expected none, uniform, prioritised or episodic)");
}

Metric parse_metric(const std::string& s, const std::string& field) {
  for (auto m : {Metric::MeanUndiscountedReturn, Metric::SuccessRate}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError(field, "unknown metric '" + s + "' (expected mean-return or success-rate)");
}

env::AugMode parse_aug_mode(const std::string& s, const std::string& field) {
  if (s == "fixed") return env::AugMode::Fixed;
  if (s == "remaining") return env::AugMode::Remaining;
  throw ConfigError(field, "unknown time-limit mode '" + s + "' (expected fixed or remaining)");
}

}  // namespace restart::train
