#pragma once

#include <cstdint>
#include <vector>

#include "restart/env/environment.hpp"

namespace restart::env {

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct DeepMazeParams {
  int size = 30;
  std::uint64_t maze_seed = 1;
  // Shortest-path distance from the start to the goal; 0 picks the farthest
  // cell. The constructor throws if no open cell lies at that distance.
  int goal_distance = 0;
  double action_penalty = 0.0;
};

// Perfect maze carved by randomized depth-first search on an N x N grid.
// Start is (1, 1). Reaching the goal yields reward 1 and ends the episode;
// every step additionally costs `action_penalty`. Actions: up, down, left, right.
// Observation: one-hot row concatenated with one-hot column (2N entries).
class DeepMaze final : public Environment {
 public:
  static constexpr int kUp = 0;
  static constexpr int kDown = 1;
  static constexpr int kLeft = 2;
  static constexpr int kRight = 3;

  DeepMaze(DeepMazeParams params, TimeLimitConfig limits);

  int num_actions() const override { return 4; }
  int observation_size() const override { return 2 * params_.size; }
  bool at_success() const override { return agent_ == goal_; }
  std::string_view name() const override { return "deep-maze"; }

  bool is_wall(Cell c) const;
  Cell start() const { return start_; }
  Cell goal() const { return goal_; }
  Cell agent() const { return agent_; }
  int size() const { return params_.size; }
  const DeepMazeParams& params() const { return params_; }

  // Cell reached by `action` from `from` (unchanged when blocked).
  Cell neighbour(Cell from, int action) const;

 protected:
  void sample_initial_state(Rng& rng) override;
  Dynamics apply(int action) override;
  void write_observation(std::span<double> out) const override;
  void encode_state(ByteWriter& w) const override;
  void decode_state(ByteReader& r) override;
  std::uint8_t kind_tag() const override { return 2; }
  std::uint32_t params_fingerprint() const override;

 private:
  void carve();
  void place_goal();

  DeepMazeParams params_;
  std::vector<std::uint8_t> walls_;  // row-major, 1 = wall
  Cell start_{1, 1};
  Cell goal_{1, 1};
  Cell agent_{1, 1};
};

}  // namespace restart::env
