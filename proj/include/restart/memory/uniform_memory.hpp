#pragma once

#include <cstdint>
#include <vector>

#include "restart/env/environment.hpp"
#include "restart/memory/restart_sample.hpp"

namespace restart::memory {

// Ring buffer of recent states, sampled uniformly.
class UniformMemory {
 public:
  UniformMemory(std::size_t capacity, int t_aug);

  void push(StateSnapshot s);
  // Throws EmptyMemory.
  RestartSample sample(Rng& rng);

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  int t_aug() const { return t_aug_; }
  const StateSnapshot& at(std::size_t slot) const { return items_.at(slot); }
  std::uint64_t reads() const { return reads_; }

  Bytes serialize() const;
  static UniformMemory deserialize(std::span<const std::uint8_t> frame);

 private:
  std::size_t capacity_;
  int t_aug_;
  std::vector<StateSnapshot> items_;
  std::size_t cursor_ = 0;
  std::uint64_t reads_ = 0;
};

}  // namespace restart::memory
