#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "restart/agent/ppo.hpp"
#include "restart/memory/episodic_memory.hpp"
#include "restart/memory/prioritised_memory.hpp"
#include "restart/memory/uniform_memory.hpp"
#include "restart/train/experiment_config.hpp"
#include "restart/train/ratio_controller.hpp"

namespace restart::train {

struct EvalRow {
  std::int64_t env_steps = 0;
  double metric = 0.0;
  double aug_fraction = 0.0;
  std::uint64_t memory_size = 0;

  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

// Side effects observed while an evaluation was running. All must stay zero.
struct PurityCounters {
  std::uint64_t memory_reads = 0;
  std::uint64_t memory_writes = 0;
  std::uint64_t restores = 0;
  std::uint64_t parameter_writes = 0;

  friend bool operator==(const PurityCounters&, const PurityCounters&) = default;
  bool clean() const { return memory_reads + memory_writes + restores + parameter_writes == 0; }
  PurityCounters& operator+=(const PurityCounters& o);
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<EvalRow> rows;
  double wall_clock_seconds = 0.0;
  std::string config_digest;
  std::uint32_t parameter_crc = 0;  // CRC32 of the final parameter checkpoint
  std::int64_t env_steps = 0;
  std::optional<std::int64_t> first_success_step;  // first positive reward during training
  bool filtered_out = false;
  std::uint64_t orphaned_sub_episodes = 0;
  std::uint64_t evaluations = 0;
  PurityCounters evaluation_side_effects;
  std::vector<agent::LossReport> losses;

  // Equality of everything a run computes; wall clock and digest excluded.
  bool same_outcome(const RunRecord& other) const;
};

/// One training run: collection from p1 and the restart memory under a
/// transition-count ratio, memory feeding, PPO updates and periodic
/// evaluation under the environment's own initial-state distribution.
class Trainer {
 public:
  using Memory = std::variant<std::monostate, memory::UniformMemory, memory::PrioritisedMemory, memory::EpisodicMemory>;

  Trainer(ExperimentConfig cfg, std::uint64_t seed);

  // Gathers ppo.steps_per_iteration transitions; episodes persist across calls.
  agent::RolloutBatch collect_iteration();
  // Pushes every transition's state into a uniform or prioritised memory.
  // Needs td_errors filled for the prioritised variant.
  void feed_memory(const agent::RolloutBatch& batch);
  // Evaluates the current policy and records side-effect counters.
  double evaluate_now();
  RunRecord train();

  const ExperimentConfig& config() const { return cfg_; }
  const Memory& memory() const { return memory_; }
  bool memory_empty() const;
  std::uint64_t memory_size() const;
  std::uint64_t memory_reads() const;
  const RatioController& controller() const { return controller_; }
  const agent::PolicyValueNet& net() const { return *net_; }
  const env::Environment& environment() const { return *env_; }
  const env::Environment& eval_environment() const { return *eval_env_; }
  std::int64_t env_steps() const { return env_steps_; }
  std::uint64_t episodes_finished() const { return episodes_finished_; }
  std::uint64_t orphaned_sub_episodes() const { return orphans_; }
  const PurityCounters& evaluation_side_effects() const { return eval_effects_; }
  std::optional<std::int64_t> first_success_step() const { return first_success_; }

 private:
  struct ActiveEpisode {
    bool active = false;
    agent::StartOrigin origin = agent::StartOrigin::EnvStart;
    Observation observation;
    std::vector<memory::EpisodeStep> steps;
    std::optional<memory::EpisodicLink> link;
  };

  void start_episode();
  void finish_episode();
  std::uint64_t memory_writes() const;

  ExperimentConfig cfg_;
  std::uint64_t seed_;
  Rng init_rng_;
  Rng env_rng_;
  Rng act_rng_;
  Rng memory_rng_;
  Rng update_rng_;
  Rng eval_rng_;
  std::unique_ptr<env::Environment> env_;
  std::unique_ptr<env::Environment> eval_env_;
  std::unique_ptr<agent::PolicyValueNet> net_;
  std::unique_ptr<agent::PpoLearner> learner_;
  Memory memory_;
  RatioController controller_;
  ActiveEpisode episode_;
  std::int64_t env_steps_ = 0;
  std::uint64_t episodes_finished_ = 0;
  std::uint64_t orphans_ = 0;
  std::uint64_t memory_pushes_ = 0;
  std::optional<std::int64_t> first_success_;
  PurityCounters eval_effects_;
};

}  // namespace restart::train
