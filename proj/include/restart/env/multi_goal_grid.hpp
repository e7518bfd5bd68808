#pragma once

#include "restart/env/deep_maze.hpp"
#include "restart/env/environment.hpp"

namespace restart::env {

// Open size x size grid. The agent starts at (0, 0); the goal is drawn
// uniformly over all cells each episode and is part of the state. Reward is
// -1 after every step that does not end on the goal, 0 otherwise. No terminal
// states. Actions: up, down, left, right, stay.
// Observation: agent row/col and goal row/col, each scaled to [-1, 1].
class MultiGoalGrid final : public Environment {
 public:
  static constexpr int kStay = 4;

  MultiGoalGrid(int size, TimeLimitConfig limits);

  int num_actions() const override { return 5; }
  int observation_size() const override { return 4; }
  bool at_success() const override { return agent_ == goal_; }
  std::string_view name() const override { return "multigoal-grid"; }

  Cell agent() const { return agent_; }
  Cell goal() const { return goal_; }
  int size() const { return size_; }
  int goal_index() const { return goal_.row * size_ + goal_.col; }

 protected:
  void sample_initial_state(Rng& rng) override;
  Dynamics apply(int action) override;
  void write_observation(std::span<double> out) const override;
  void encode_state(ByteWriter& w) const override;
  void decode_state(ByteReader& r) override;
  std::uint8_t kind_tag() const override { return 3; }
  std::uint32_t params_fingerprint() const override;

 private:
  int size_;
  Cell agent_{};
  Cell goal_{};
};

}  // namespace restart::env
