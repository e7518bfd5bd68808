#pragma once

#include <cstdint>

#include "restart/agent/rollout.hpp"

namespace restart::train {

enum class StartChoice { FromP1, FromMemory };

// Keeps the fraction of transitions that stem from augmented starts at a
// target by deciding, at each episode start, from the running counters.
class RatioController {
 public:
  explicit RatioController(double target_ratio);

  // FromMemory iff the memory is non-empty and augmented / max(total, 1) < target.
  StartChoice choose(bool memory_nonempty) const;
  void record(agent::StartOrigin origin, std::uint64_t transitions = 1);

  double target() const { return target_; }
  std::uint64_t augmented_steps() const { return augmented_; }
  std::uint64_t total_steps() const { return total_; }
  double realized() const;

 private:
  double target_;
  std::uint64_t augmented_ = 0;
  std::uint64_t total_ = 0;
};

}  // namespace restart::train
