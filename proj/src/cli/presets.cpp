#include "restart/cli/presets.hpp"

#include <numeric>

namespace restart::cli {

using train::ConfigError;
using train::EnvKind;
using train::ExperimentConfig;
using train::Metric;
using train::Variant;

namespace {

std::vector<std::uint64_t> seed_range(std::size_t n) {
  std::vector<std::uint64_t> s(n);
  std::iota(s.begin(), s.end(), 1);
  return s;
}

ExperimentConfig dense_corridor(int length, std::int64_t steps) {
  ExperimentConfig c;
  c.env.kind = EnvKind::DenseCorridor;
  c.env.corridor_length = length;
  c.env.t_env = 1000;
  c.total_steps = steps;
  c.eval.metric = Metric::MeanUndiscountedReturn;
  c.eval.episodes = 5;
  c.eval.period = 2048;
  c.seeds = seed_range(5);
  return c;
}

ExperimentConfig multigoal_grid() {
  ExperimentConfig c;
  c.env.kind = EnvKind::MultiGoalGrid;
  c.env.grid_size = 10;
  c.env.t_env = 50;
  c.total_steps = 200'000;
  c.eval.metric = Metric::SuccessRate;
  c.eval.episodes = 50;
  c.eval.period = 10240;
  c.seeds = seed_range(10);
  return c;
}

ExperimentConfig deep_maze() {
  ExperimentConfig c;
  c.env.kind = EnvKind::DeepMaze;
  c.env.t_env = 100;
  c.env.maze.size = 30;
  c.env.maze.maze_seed = 1;
  c.env.maze.goal_distance = 30;
  c.env.maze.action_penalty = 0.001;
  c.ppo.entropy_coef = 0.02;
  c.memory.parent_capacity = 50;
  c.memory.sub_capacity = 10;
  c.memory.alpha = 1.0;
  c.total_steps = 1'000'000;
  c.eval.metric = Metric::SuccessRate;
  c.eval.episodes = 20;
  c.eval.period = 20480;
  c.seeds = seed_range(5);
  return c;
}

}  // namespace

void select_variant(ExperimentConfig& cfg, Variant v) {
  cfg.memory.variant = v;
  cfg.memory.t_aug_mode = v == Variant::Episodic ? env::AugMode::Remaining : env::AugMode::Fixed;
}

ExperimentConfig preset(const std::string& name) {
  std::string base = name;
  Variant variant = Variant::None;
  for (auto v : {Variant::None, Variant::Uniform, Variant::Prioritised, Variant::Episodic}) {
    const std::string suffix = "-" + train::to_string(v);
    if (base.size() > suffix.size() && base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
      base.resize(base.size() - suffix.size());
      variant = v;
      break;
    }
  }

  ExperimentConfig c;
  if (base == "dense-corridor") {
    c = dense_corridor(200, 60'000);
  } else if (base == "dense-corridor-hard") {
    c = dense_corridor(500, 150'000);
  } else if (base == "multigoal-grid" || base == "multigoal") {
    c = multigoal_grid();
  } else if (base == "deep-maze") {
    c = deep_maze();
  } else {
    throw ConfigError("preset", "unknown preset '" + name + "'");
  }
  select_variant(c, variant);
  c.preset = name;
  c.out_dir = "runs/" + name;
  return c;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const char* base : {"dense-corridor", "dense-corridor-hard", "multigoal-grid", "deep-maze"}) {
    out.emplace_back(base);
    for (auto v : {Variant::None, Variant::Uniform, Variant::Prioritised, Variant::Episodic}) {
      out.push_back(std::string(base) + "-" + train::to_string(v));
    }
  }
  return out;
}

}  // namespace restart::cli
