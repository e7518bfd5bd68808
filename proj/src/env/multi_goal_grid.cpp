#include "restart/env/multi_goal_grid.hpp"

#include <algorithm>

namespace restart::env {

MultiGoalGrid::MultiGoalGrid(int size, TimeLimitConfig limits) : Environment(limits), size_(size) {
  if (size < 2) throw std::invalid_argument("grid size must be at least 2");
}

void MultiGoalGrid::sample_initial_state(Rng& rng) {
  agent_ = {0, 0};
  const int g = std::uniform_int_distribution<int>(0, size_ * size_ - 1)(rng);
  goal_ = {g / size_, g % size_};
}

Environment::Dynamics MultiGoalGrid::apply(int action) {
  switch (action) {
    case 0: agent_.row = std::max(0, agent_.row - 1); break;
    case 1: agent_.row = std::min(size_ - 1, agent_.row + 1); break;
    case 2: agent_.col = std::max(0, agent_.col - 1); break;
    case 3: agent_.col = std::min(size_ - 1, agent_.col + 1); break;
    default: break;
  }
  return {agent_ == goal_ ? 0.0 : -1.0, false};
}

void MultiGoalGrid::write_observation(std::span<double> out) const {
  const double scale = 2.0 / (size_ - 1);
  out[0] = agent_.row * scale - 1.0;
  out[1] = agent_.col * scale - 1.0;
  out[2] = goal_.row * scale - 1.0;
  out[3] = goal_.col * scale - 1.0;
}

void MultiGoalGrid::encode_state(ByteWriter& w) const {
  w.i32(agent_.row);
  w.i32(agent_.col);
  w.i32(goal_.row);
  w.i32(goal_.col);
}

void MultiGoalGrid::decode_state(ByteReader& r) {
  const Cell a{r.i32(), r.i32()};
  const Cell g{r.i32(), r.i32()};
  auto inside = [&](Cell c) { return c.row >= 0 && c.col >= 0 && c.row < size_ && c.col < size_; };
  if (!inside(a) || !inside(g)) throw MalformedSnapshot("grid position out of range");
  agent_ = a;
  goal_ = g;
}

std::uint32_t MultiGoalGrid::params_fingerprint() const {
  ByteWriter w;
  w.i32(size_);
  return crc32_of(w.data());
}

}  // namespace restart::env
