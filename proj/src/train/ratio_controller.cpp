#include "restart/train/ratio_controller.hpp"

#include <algorithm>
#include <stdexcept>

namespace restart::train {

RatioController::RatioController(double target_ratio) : target_(target_ratio) {
  if (!(target_ratio >= 0.0 && target_ratio < 1.0)) throw std::invalid_argument("target ratio must lie in [0, 1)");
}

StartChoice RatioController::choose(bool memory_nonempty) const {
  if (!memory_nonempty) return StartChoice::FromP1;
  const double denom = static_cast<double>(std::max<std::uint64_t>(total_, 1));
  return static_cast<double>(augmented_) / denom < target_ ? StartChoice::FromMemory : StartChoice::FromP1;
}

void RatioController::record(agent::StartOrigin origin, std::uint64_t transitions) {
  total_ += transitions;
  if (origin == agent::StartOrigin::AugmentedStart) augmented_ += transitions;
}

double RatioController::realized() const {
  return total_ == 0 ? 0.0 : static_cast<double>(augmented_) / static_cast<double>(total_);
}

}  // namespace restart::train
