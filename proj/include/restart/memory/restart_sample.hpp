#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "restart/env/snapshot.hpp"

namespace restart::memory {

class EmptyMemory : public std::runtime_error {
 public:
  EmptyMemory() : std::runtime_error("restart memory is empty") {}
};

// One visited state of an episode together with the reward of the step taken from it.
struct EpisodeStep {
  StateSnapshot state;
  double reward = 0.0;
};

// Everything a sub-episode needs to be filed under the category it came from.
struct EpisodicLink {
  std::uint64_t category_id = 0;
  int start_t = 0;
  double prefix_return = 0.0;
  // States from the parent's initial state up to, not including, the augmented start.
  std::vector<EpisodeStep> lineage;
};

enum class OriginKind { Uniform, Prioritised, Episodic };

struct EpisodicOrigin {
  std::size_t category_index = 0;
  std::size_t episode_index = 0;  // 0 is the parent, k + 1 is sub-episode k
  EpisodicLink link;
};

struct RestartSample {
  StateSnapshot snapshot;
  int t_aug = 0;
  OriginKind origin = OriginKind::Uniform;
  std::size_t slot = 0;  // buffer slot for uniform/prioritised samples
  std::optional<EpisodicOrigin> episodic;
};

}  // namespace restart::memory
