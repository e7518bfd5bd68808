#include "restart/env/deep_maze.hpp"

#include <algorithm>
#include <array>
#include <deque>

namespace restart::env {

namespace {

constexpr std::array<int, 4> kDr{-1, 1, 0, 0};
constexpr std::array<int, 4> kDc{0, 0, -1, 1};

}  // namespace

DeepMaze::DeepMaze(DeepMazeParams params, TimeLimitConfig limits)
    : Environment(limits), params_(params) {
  if (params_.size < 5) throw std::invalid_argument("maze size must be at least 5");
  if (params_.goal_distance < 0) throw std::invalid_argument("goal distance must be non-negative");
  if (params_.action_penalty < 0.0) throw std::invalid_argument("action penalty must be non-negative");
  carve();
  place_goal();
  agent_ = start_;
}

bool DeepMaze::is_wall(Cell c) const {
  const int n = params_.size;
  if (c.row < 0 || c.col < 0 || c.row >= n || c.col >= n) return true;
  return walls_[static_cast<std::size_t>(c.row * n + c.col)] != 0;
}

Cell DeepMaze::neighbour(Cell from, int action) const {
  const Cell to{from.row + kDr[static_cast<std::size_t>(action)],
                from.col + kDc[static_cast<std::size_t>(action)]};
  return is_wall(to) ? from : to;
}

void DeepMaze::carve() {
  const int n = params_.size;
  walls_.assign(static_cast<std::size_t>(n * n), 1);
  // Rooms sit on odd coordinates strictly inside the border.
  const int rooms = (n - 1) / 2;
  auto open = [&](int r, int c) { walls_[static_cast<std::size_t>(r * n + c)] = 0; };
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(rooms * rooms), 0);
  Rng rng(params_.maze_seed);
  std::vector<Cell> stack{{0, 0}};
  seen[0] = 1;
  open(1, 1);
  while (!stack.empty()) {
    const Cell cur = stack.back();
    std::array<int, 4> options{};
    int count = 0;
    for (int d = 0; d < 4; ++d) {
      const int r = cur.row + kDr[static_cast<std::size_t>(d)];
      const int c = cur.col + kDc[static_cast<std::size_t>(d)];
      if (r >= 0 && c >= 0 && r < rooms && c < rooms && !seen[static_cast<std::size_t>(r * rooms + c)]) {
        options[static_cast<std::size_t>(count++)] = d;
      }
    }
    if (count == 0) {
      stack.pop_back();
      continue;
    }
    const int d = options[static_cast<std::size_t>(
        std::uniform_int_distribution<int>(0, count - 1)(rng))];
    const Cell next{cur.row + kDr[static_cast<std::size_t>(d)], cur.col + kDc[static_cast<std::size_t>(d)]};
    seen[static_cast<std::size_t>(next.row * rooms + next.col)] = 1;
    open(2 * cur.row + 1 + kDr[static_cast<std::size_t>(d)], 2 * cur.col + 1 + kDc[static_cast<std::size_t>(d)]);
    open(2 * next.row + 1, 2 * next.col + 1);
    stack.push_back(next);
  }
}

void DeepMaze::place_goal() {
  const int n = params_.size;
  std::vector<int> dist(static_cast<std::size_t>(n * n), -1);
  std::deque<Cell> queue{start_};
  dist[static_cast<std::size_t>(start_.row * n + start_.col)] = 0;
  Cell farthest = start_;
  Cell chosen = start_;
  bool found = params_.goal_distance == 0;
  while (!queue.empty()) {
    const Cell cur = queue.front();
    queue.pop_front();
    const int d = dist[static_cast<std::size_t>(cur.row * n + cur.col)];
    if (d > dist[static_cast<std::size_t>(farthest.row * n + farthest.col)]) farthest = cur;
    if (!found && d == params_.goal_distance) {
      chosen = cur;
      found = true;
    }
    for (int a = 0; a < 4; ++a) {
      const Cell next = neighbour(cur, a);
      auto& nd = dist[static_cast<std::size_t>(next.row * n + next.col)];
      if (nd < 0) {
        nd = d + 1;
        queue.push_back(next);
      }
    }
  }
  if (!found) throw std::invalid_argument("no open cell at the requested goal distance");
  goal_ = params_.goal_distance > 0 ? chosen : farthest;
}

void DeepMaze::sample_initial_state(Rng&) { agent_ = start_; }

Environment::Dynamics DeepMaze::apply(int action) {
  agent_ = neighbour(agent_, action);
  const bool reached = agent_ == goal_;
  return {(reached ? 1.0 : 0.0) - params_.action_penalty, reached};
}

void DeepMaze::write_observation(std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  out[static_cast<std::size_t>(agent_.row)] = 1.0;
  out[static_cast<std::size_t>(params_.size + agent_.col)] = 1.0;
}

void DeepMaze::encode_state(ByteWriter& w) const {
  w.i32(agent_.row);
  w.i32(agent_.col);
}

void DeepMaze::decode_state(ByteReader& r) {
  const Cell c{r.i32(), r.i32()};
  if (is_wall(c)) throw MalformedSnapshot("maze position is not an open cell");
  agent_ = c;
}

std::uint32_t DeepMaze::params_fingerprint() const {
  ByteWriter w;
  w.i32(params_.size);
  w.u64(params_.maze_seed);
  w.i32(goal_.row);
  w.i32(goal_.col);
  w.f64(params_.action_penalty);
  return crc32_of(w.data());
}

}  // namespace restart::env
